import csv
import sys

with open(sys.argv[1], newline="") as f:
    rows = list(csv.DictReader(f))

# ASSERTION_START
assert rows, "empty batch"
# ASSERTION_END

total = 0.0
for r in rows:
    total += float(r["value"])

    # ASSERTION_START
    assert float(r["value"]) >= 0, "negative value"
    # ASSERTION_END

# ASSERTION_START
assert total < 1e9, "total overflow"
# ASSERTION_END
print(f"total {total:.2f}")
