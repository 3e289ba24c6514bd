"""Self-check suites comparing closed forms with the independent oracles."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import curvature as cv
from . import family as fam
from . import geometry as geo
from . import metric as met
from . import oracle
from .errors import DomainError
from .family import FamilyParams, Point
from .metric import MetricParams, Tangent

SUITES = ("family", "metric", "geometry", "curvature")
TOL_PROFILES = {"default": 1.0, "strict": 0.1}


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    error: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tol)

    @property
    def margin(self) -> float:
        return self.tol - self.error

    def to_json(self) -> dict:
        return {"suite": self.suite, "name": self.name, "error": self.error, "tol": self.tol,
                "margin": self.margin, "passed": self.passed}


def _D2():
    return np.array([[2.0, 0.3], [0.3, 1.0]])


def _family_checks():
    out = []
    for n, p, q in [(1, 0.8, 1.5), (1, 1.0, 2.0), (1, 3.0, 0.9), (2, 0.95, 1.5), (2, 1.5, 2.0)]:
        fp = FamilyParams(n, p)
        pt = Point(_D2()[:n, :n], np.full(n, 0.25))
        closed = fam.renyi_entropy(fp, pt.D, q).value
        out.append((f"renyi n={n} p={p} q={q}", abs(closed - oracle.quad_renyi(fp, pt, q).value), 1e-6))
    for n, p in [(1, 0.8), (2, 1.5)]:
        fp = FamilyParams(n, p)
        pt = Point(_D2()[:n, :n])
        closed = fam.shannon_entropy(fp, pt.D).value
        out.append((f"shannon n={n} p={p}", abs(closed - oracle.quad_shannon(fp, pt).value), 1e-6))
    fp = FamilyParams(2, 1.0)
    pt = Point(_D2())
    cov = oracle.quad_covariance(fp, pt).value
    out.append(("covariance n=2 p=1", float(np.max(np.abs(cov - fam.covariance(pt)))), 1e-4))
    return out


def _metric_checks():
    out = []
    D = _D2()
    X = np.array([[0.4, 0.1], [0.1, -0.3]])
    Y = np.array([[0.2, -0.2], [-0.2, 0.5]])
    pt = Point(D, np.zeros(2))
    a = Tangent(X, np.array([0.3, -0.1]))
    b = Tangent(Y, np.array([0.2, 0.4]))
    target = met.named_eval(met.Renyi(), None, pt, Tangent(X), Tangent(Y))
    fd = oracle.fd_entropy_hessian(FamilyParams(2, 1.5), 2.0, D, X, Y)
    out.append(("renyi hessian", abs(fd - target), 1e-5))
    fp = FamilyParams(2, 0.95)
    tform = met.named_eval(met.Tsallis(0.95, 1.5), fp, pt, Tangent(X), Tangent(Y))
    fd = oracle.fd_entropy_hessian(fp, 1.5, D, X, Y, kind="tsallis")
    out.append(("tsallis hessian", abs(fd - tform), 1e-5))
    for p in (0.8, 1.0, 1.5):
        fp = FamilyParams(2, p)
        est = oracle.numeric_fisher(fp, pt, a, b)
        closed = met.named_eval(met.Fisher(p), fp, pt, a, b)
        out.append((f"fisher grid p={p}", abs(est.value - closed), max(1e-4, 3 * est.error)))
    D3 = np.eye(3) + 0.3 * np.ones((3, 3))
    X3 = np.diag([1.0, -0.5, 0.2]) + 0.1
    Y3 = np.diag([0.3, 0.7, -0.4]) + 0.05
    out.append(("kubo-mori integral", abs(oracle.kubo_mori_integral(D3, X3, Y3) - met.kubo_mori_eval(D3, X3, Y3)), 1e-8))
    return out


def _geometry_checks():
    out = []
    mp = MetricParams(0.0, 1.0)
    _, d = geo.geodesic_n1(mp, Point([[2.0]], [0.0]), Point([[2.0]], [1.5]))
    out.append(("n=1 worked distance", abs(d - math.sqrt(2.0) * 2.0 * math.log(2.0)), 1e-9))
    D1 = np.diag([math.e ** 2, 1.0])
    out.append(("special-normal distance", abs(geo.distance_special_normal(mp, np.eye(2), D1) - math.sqrt(2.0)), 1e-12))
    g = geo.geodesic_special_normal(np.eye(2), D1)
    out.append(("special-normal path length", abs(geo.path_length(mp, g.trace(mp=mp)) - math.sqrt(2.0)), 1e-6))
    p0 = Point(_D2(), [0.1, 0.2])
    p1 = Point(np.diag([1.0, 3.0]), [0.6, -0.3])
    mp2 = MetricParams(0.1, 0.8)
    st = geo.geodesic_bvp_shoot(mp2, p0, p1)
    end = geo.geodesic_ivp(mp2, st, 1.0).end_point()
    out.append(("shooting end point", float(max(np.max(np.abs(end.D - p1.D)), np.max(np.abs(end.u - p1.u)))), 1e-8))
    c = Tangent(np.array([[0.2, 0.1], [0.1, -0.1]]), np.array([0.3, 0.2]))
    fd = oracle.fd_christoffels(mp2, oracle.Chart(2), oracle.Chart(2).to_coords(p0))
    coords = met.tangent_coords(c)
    gam = np.einsum("cab,a,b->c", fd, coords, coords)
    closed = met.tangent_coords(geo.covariant_derivative(mp2, p0, c, c))
    out.append(("christoffel symbols", float(np.max(np.abs(gam - closed))), 1e-5))
    return out


def _curvature_checks():
    out = []
    for n, al in [(1, 0.0), (2, 0.0), (2, 0.2)]:
        mp = MetricParams(al, 0.7)
        pt = Point(_D2()[:n, :n], np.zeros(n))
        chart = oracle.Chart(n)
        fd = oracle.fd_scalar(mp, chart, chart.to_coords(pt))
        out.append((f"scalar n={n} alpha={al}", abs(fd - cv.scalar_full(mp, n)), 1e-3))
    out.append(("scalar (1,0)", abs(cv.scalar_full(MetricParams(), 1) + 1.0), 1e-12))
    out.append(("scalar (2,0)", abs(cv.scalar_full(MetricParams(), 2) + 4.5), 1e-12))
    out.append(("scalar special (2,0)", abs(cv.scalar_special(MetricParams(), 2) + 3.5), 1e-12))
    for n, p in [(2, 0.8), (3, 1.5)]:
        ext = cv.fisher_scalar_extended(n, p)
        out.append((f"extended fisher scalar n={n} p={p}",
                    abs(ext - cv.scalar_full(met.as_unified(met.Fisher(p), n), n)), 1e-12))
    return out


_RUNNERS = {"family": _family_checks, "metric": _metric_checks,
            "geometry": _geometry_checks, "curvature": _curvature_checks}


def run_suite(suite: str = "all", tol_profile: str = "default") -> list[Check]:
    """Run one suite (or ``"all"``) and return the individual checks."""
    if tol_profile not in TOL_PROFILES:
        raise DomainError(f"unknown tolerance profile {tol_profile!r}")
    names = SUITES if suite == "all" else (suite,)
    factor = TOL_PROFILES[tol_profile]
    checks = []
    for s in names:
        if s not in _RUNNERS:
            raise DomainError(f"unknown suite {s!r}")
        checks.extend(Check(s, name, float(err), tol * factor) for name, err, tol in _RUNNERS[s]())
    return checks
