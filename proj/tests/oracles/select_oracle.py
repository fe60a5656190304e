"""Reference selections on WDBC: effect-size sets and Relief weights."""
import numpy as np
from scipy.stats import norm

rows = [l.strip().split(",") for l in open("data/wdbc.data") if l.strip()]
y = np.array([r[1] == "M" for r in rows])
X = np.array([[float(v) for v in r[2:]] for r in rows])
base = ["radius", "texture", "perimeter", "area", "smoothness", "compactness", "concavity",
        "concave points", "symmetry", "fractal dimension"]
names = [f"{b} {s}" for s in ["mean", "se", "worst"] for b in base]

sd, d, D = [], [], []
for j in range(30):
    m, b = X[y, j], X[~y, j]
    n1, n2 = len(m), len(b)
    sp = np.sqrt(((n1 - 1) * m.var(ddof=1) + (n2 - 1) * b.var(ddof=1)) / (n1 + n2 - 2))
    s = (m.mean() - b.mean()) / sp
    sd.append(s)
    d.append(abs(s))
    D.append(abs(m.mean() - b.mean()) / np.sqrt((m.var(ddof=1) + b.var(ddof=1)) / 2))
d, D, sd = map(np.array, (d, D, sd))
u2 = norm.cdf(d / 2)
u1 = (2 * u2 - 1) / u2
u3 = norm.cdf(sd)
sets = {
    "d": {n for n, v in zip(names, d) if v > 0.8},
    "D": {n for n, v in zip(names, D) if v > 0.8},
}
for k, v in (("u1", u1), ("u2", u2), ("u3", u3)):
    sets[k] = {n for n, x in zip(names, v) if x >= v.mean()}
    print(k, "mean", v.mean(), "floor", np.floor(10 * v.mean()) / 10, len(sets[k]))
common = set.intersection(*sets.values())
print("common", [n for n in names if n in common])
print("u1-only", sorted(sets["u1"] - common), "u3-only", sorted(sets["u3"] - common))

# Relief, m = N, min-max normalized, squared diffs, ties to lowest index.
Z = (X - X.min(0)) / np.where(X.max(0) > X.min(0), X.max(0) - X.min(0), 1)
W = np.zeros(30)
for i in range(len(Z)):
    dist = ((Z - Z[i]) ** 2).sum(1)
    dist[i] = np.inf
    hit = min((k for k in range(len(Z)) if y[k] == y[i] and k != i), key=lambda k: (dist[k], k))
    miss = min((k for k in range(len(Z)) if y[k] != y[i]), key=lambda k: (dist[k], k))
    W += ((Z[i] - Z[miss]) ** 2 - (Z[i] - Z[hit]) ** 2) / len(Z)
print("relief", [n for n, w in zip(names, W) if w > W.mean()])
for n, w in zip(names, W):
    print(f"  {n}: {w:.17g}")
