import csv
import math
import sys

with open(sys.argv[1], newline="") as f:
    rows = list(csv.DictReader(f))

log_prices = [math.log(float(r["price"])) for r in rows]
print(f"mean log price {sum(log_prices) / len(log_prices):.3f}")
