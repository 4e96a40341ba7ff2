import csv
import sys
from datetime import datetime

with open(sys.argv[1], newline="") as f:
    rows = list(csv.DictReader(f))

weekday = {}
for r in rows:
    d = datetime.strptime(r["day"], "%Y-%m-%d")
    weekday.setdefault(d.strftime("%A"), 0)
    weekday[d.strftime("%A")] += int(r["visits"])
print(weekday)
