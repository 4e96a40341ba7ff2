import csv
import sys
from collections import defaultdict


def load(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


rows = load(sys.argv[1])

# ASSERTION_START
for r in rows:
    assert r["site"], "reading without site"
# ASSERTION_END

# ASSERTION_START
for r in rows:
    assert float(r["humidity"]) <= 100.0, "humidity above 100%"
# ASSERTION_END

humidity = defaultdict(list)
for r in rows:
    humidity[r["site"]].append(float(r["humidity"]))

for site in sorted(humidity):
    vals = humidity[site]
    print(site, len(vals), f"{sum(vals) / len(vals):.1f}")
