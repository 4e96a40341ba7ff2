import csv
import sys

with open(sys.argv[1], newline="") as f:
    print(sum(1 for _ in csv.DictReader(f)))
