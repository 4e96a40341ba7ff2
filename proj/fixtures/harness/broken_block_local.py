import csv
import sys

with open(sys.argv[1], newline="") as f:
    rows = list(csv.DictReader(f))

# ASSERTION_START
values = [float(r["value"]) for r in rows]
assert all(v >= 0 for v in values), "negative value"
# ASSERTION_END

print(f"max {max(values):.2f}")
