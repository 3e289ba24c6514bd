"""Closed-form entropies of p-Gaussian members, checked against quadrature."""

import numpy as np

from infogeo import FamilyParams, Point, renyi_entropy, shannon_entropy, tsallis_entropy
from infogeo.family import sample
from infogeo import oracle

D = np.array([[2.0, 0.3], [0.3, 1.0]])
pt = Point(D, [0.5, -0.2])

# heavy-tailed (p < 1), Gaussian (p = 1) and compact (p > 1) members
for p in (0.95, 1.0, 1.5):
    fp = FamilyParams(2, p)
    print(f"p = {p}")
    print(f"  Shannon           {shannon_entropy(fp, D).value: .12f}")
    for q in (0.9, 2.0):
        closed = renyi_entropy(fp, D, q).value
        quad = oracle.quad_renyi(fp, pt, q)
        print(f"  Renyi   q={q:<4} {closed: .12f}  quadrature {quad.value: .12f} (+- {quad.error:.1e})")
        closed = tsallis_entropy(fp, D, q).value
        quad = oracle.quad_tsallis(fp, pt, q)
        print(f"  Tsallis q={q:<4} {closed: .12f}  quadrature {quad.value: .12f} (+- {quad.error:.1e})")

# samples reproduce the covariance D^-1 for every member
fp = FamilyParams(2, 1.5)
xs = sample(fp, pt, 200_000, seed=1)
print("sample covariance\n", np.cov(xs.T).round(4))
print("D^-1\n", np.linalg.inv(D).round(4))
