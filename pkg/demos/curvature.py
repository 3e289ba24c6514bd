"""Curvature of the unified metric and of the Fisher metric on the family."""

import numpy as np

from infogeo import curvature as cv
from infogeo import metric as met
from infogeo import oracle
from infogeo.family import Point
from infogeo.metric import MetricParams

mp = MetricParams(0.0, 1.0)
for n in (1, 2, 3):
    print(f"n={n}: Scal = {cv.scalar_full(mp, n):.4f}   Scal_s = {cv.scalar_special(mp, n):.4f}")

# the same numbers from finite differences of the metric in a chart
pt = Point([[2.0, 0.3], [0.3, 1.0]], [0.4, -0.1])
chart = oracle.Chart(2)
print("FD scalar n=2", oracle.fd_scalar(mp, chart, chart.to_coords(pt)))
print("FD special   ", oracle.fd_scalar(mp, chart, chart.to_coords(pt), special=True))

rep = cv.curvature_report(MetricParams(0.2, 0.7), pt)
print("Ricci operator spectrum", np.round(rep.ricci_eigenvalues, 6))

# scalar curvature of the Fisher metric rises towards 0 as p -> 2
for n in (1, 2, 3):
    ps = np.linspace(n / (n + 2) + 0.05, 1.95, 6)
    print(f"n={n}", " ".join(f"{cv.fisher_scalar_extended(n, p):8.4f}" for p in ps))
    p = 1.5
    assert abs(cv.fisher_scalar_extended(n, p) - cv.scalar_full(met.as_unified(met.Fisher(p), n), n)) < 1e-12

# negative curvature makes small geodesic balls larger than flat ones
dim = 5
scal = cv.scalar_full(mp, 2)
for r in (0.1, 0.3):
    print(f"r={r}: ball {cv.ball_volume(dim, scal, r):.6e}  flat {cv.ball_volume(dim, 0.0, r):.6e}")
