import csv
import math
import statistics
import sys

LABELS = {"COMPLETED": 1, "ACTIVE": 0, "CANCELLED": 0}


def load(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


rows = load(sys.argv[1])

# ASSERTION_START
assert all(r["status"] in LABELS for r in rows), "unknown booking status"
# ASSERTION_END

# ASSERTION_START
revenues = [float(r["revenue"]) for r in rows]
assert statistics.pstdev(revenues) > 0, "revenue has no variance"
# ASSERTION_END

y = [LABELS[r["status"]] for r in rows]
rev = [float(r["revenue"]) for r in rows]
mu = statistics.fmean(rev)
sd = statistics.pstdev(rev)
x = [(v - mu) / sd for v in rev]
cats = sorted({int(r["guest_cat"]) for r in rows})
onehot = [[1.0 if int(r["guest_cat"]) == c else 0.0 for c in cats] for r in rows]

w = [0.0] * (1 + len(cats))
for _ in range(200):
    grad = [0.0] * len(w)
    for xi, oh, yi in zip(x, onehot, y):
        feats = [xi] + oh
        p = 1 / (1 + math.exp(-sum(a * b for a, b in zip(w, feats))))
        for k, fk in enumerate(feats):
            grad[k] += (p - yi) * fk
    w = [wk - 0.1 * gk / len(rows) for wk, gk in zip(w, grad)]

print("weights", " ".join(f"{v:.4f}" for v in w))
