import csv
import sys


def load(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


rows = load(sys.argv[1])
completed = [r for r in rows if r["status"] == "COMPLETED"]

# ASSERTION_START
for r in completed:
    assert r["email"].strip(), "completed booking without email"
# ASSERTION_END

outbox = []
for r in completed:
    user, domain = r["email"].split("@")
    first = r["name"].split()[0]
    outbox.append(f"{first} <{user}@{domain}>: thanks for staying, here is 10% off")

print(f"queued {len(outbox)} discount emails")
