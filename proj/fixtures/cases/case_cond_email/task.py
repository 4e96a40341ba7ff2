import csv
import sys

with open(sys.argv[1], newline="") as f:
    rows = list(csv.DictReader(f))

for r in rows:
    if r["status"] == "SHIPPED":
        user, host = r["email"].split("@")
        print(f"tracking mail to {user} at {host}")
