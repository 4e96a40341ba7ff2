import csv
import sys

with open(sys.argv[1], newline="") as f:
    rows = list(csv.DictReader(f))

by_id = {}
for r in rows:
    if r["order_id"] in by_id:
        raise KeyError(f"duplicate order {r['order_id']}")
    by_id[r["order_id"]] = int(r["amount"])
print(len(by_id), "orders")
