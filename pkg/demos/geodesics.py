"""Closed-form geodesics, numerical integration and shooting."""

import math

import numpy as np

from infogeo import geometry as geo
from infogeo.errors import EmbeddingError
from infogeo.family import Point
from infogeo.metric import MetricParams

mp = MetricParams(0.0, 1.0)
p0, p1 = Point([[2.0]], [0.0]), Point([[2.0]], [1.5])

# n = 1: the closed geodesic, its distance and the shooting solution
closed, d = geo.geodesic_n1(mp, p0, p1)
print("n=1 coefficients", {k: round(float(v), 6) for k, v in closed.coefficients.items()})
print("n=1 distance", d, "expected", math.sqrt(2) * 2 * math.log(2))
print("shooting     ", geo.shooting_distance(mp, p0, p1))

# integrating from the closed-form initial velocity lands on the endpoint
trace = geo.geodesic_ivp(mp, geo.GeodesicState(p0, closed.velocity(0.0)), 1.0, 1000)
print("RK4 end point", trace.end_point())

# special normal geodesics keep the mean fixed
D1 = np.diag([math.e ** 2, 1.0])
print("special-normal distance", geo.distance_special_normal(mp, np.eye(2), D1))

# the pullback through the block embedding is a geodesic only for equal means
try:
    geo.geodesic_alpha0(1.0, p0, p1)
except EmbeddingError as exc:
    print("pullback:", exc)
print("pullback distance", geo.distance_alpha0(1.0, p0, p1), "vs n=1 distance", d)

# a general pair, solved by shooting
mp = MetricParams(0.1, 0.8)
q0 = Point([[2.0, 0.3], [0.3, 1.0]], [0.1, 0.2])
q1 = Point([[1.0, 0.0], [0.0, 3.0]], [0.6, -0.3])
start = geo.geodesic_bvp_shoot(mp, q0, q1)
trace = geo.geodesic_ivp(mp, start, 1.0)
print("shooting distance", geo.path_length(mp, trace))
print(trace.to_csv().splitlines()[0])
