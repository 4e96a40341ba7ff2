import csv
import re
import sys
from collections import defaultdict
from datetime import datetime


def load(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


rows = load(sys.argv[1])

# ASSERTION_START
for r in rows:
    assert re.fullmatch(r"\d{4}-\d{2}-\d{2}", r["ts"]), f"bad date {r['ts']!r}"
# ASSERTION_END

daily = defaultdict(list)
for r in rows:
    day = datetime.strptime(r["ts"], "%Y-%m-%d").date()
    daily[day].append(float(r["temp_c"]))

for day in sorted(daily):
    temps = daily[day]
    print(day.isoformat(), f"{sum(temps) / len(temps):.2f}")
