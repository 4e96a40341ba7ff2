import csv
import sys


def load(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


rows = load(sys.argv[1])

# ASSERTION_START
for r in rows:
    h = float(r["humidity"])
    assert 0.0 <= h <= 100.0, f"humidity out of range: {h}"
# ASSERTION_END

alerts = []
for r in rows:
    t = float(r["temp_c"])
    rh = float(r["humidity"]) / 100.0
    apparent = t + 0.33 * rh * 6.105 - 4.0
    if apparent > 35.0:
        alerts.append((r["sensor_id"], r["ts"], round(apparent, 1)))

print(f"{len(alerts)} heat alerts")
