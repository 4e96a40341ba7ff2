import csv
import statistics
import sys
from collections import defaultdict

LABELS = {"COMPLETED": 1, "ACTIVE": 0, "CANCELLED": 0}


def load(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


rows = load(sys.argv[1])

# Discount emails for completed bookings.
completed = [r for r in rows if r["status"] == "COMPLETED"]
# ASSERTION_START
for r in completed:
    assert r["email"].strip(), "completed booking without email"
# ASSERTION_END
for r in completed:
    user, domain = r["email"].split("@")
    print(f"mail {user}@{domain}")

# Standardized revenue feature for the completion model.
# ASSERTION_START
assert statistics.pstdev(float(r["revenue"]) for r in rows) > 0, "revenue has no variance"
# ASSERTION_END
rev = [float(r["revenue"]) for r in rows]
mu = statistics.fmean(rev)
sd = statistics.pstdev(rev)
features = [((v - mu) / sd, int(r["guest_cat"]), LABELS.get(r["status"], 0))
            for v, r in zip(rev, rows)]
print(f"{len(features)} training rows")

# Revenue per location for the daily report.
by_location = defaultdict(float)
for r in rows:
    by_location[r["location"]] += float(r["revenue"])
for loc in sorted(by_location):
    print(f"{loc},{by_location[loc]:.2f}")
