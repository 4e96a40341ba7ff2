import csv
import sys
from collections import defaultdict

REGIONS = {"DE": "EMEA", "ES": "EMEA", "FR": "EMEA", "UK": "EMEA", "US": "AMER"}


def load(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


rows = load(sys.argv[1])
active = [r for r in rows if r["status"] == "ACTIVE"]

# ASSERTION_START
for r in active:
    float(r["revenue"])
# ASSERTION_END

by_location = defaultdict(float)
for r in active:
    by_location[r["location"]] += float(r["revenue"])

for loc in sorted(by_location):
    region = REGIONS.get(loc, "OTHER")
    print(f"{loc},{region},{by_location[loc]:.2f}")
