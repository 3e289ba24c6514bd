import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from infogeo import curvature as cv
from infogeo import metric as met
from infogeo import oracle
from infogeo.errors import DomainError
from infogeo.family import Point
from infogeo.metric import MetricParams, Tangent, tangent_basis, tangent_coords, unified_eval

from randgen import point, rng, tangent

PARAMS = [MetricParams(0.0, 1.0), MetricParams(0.2, 0.7), MetricParams(-0.1, 1.3, 2.0)]


def _close(a: Tangent, b: Tangent, tol):
    return a.n == b.n and float(np.max(np.abs(tangent_coords(a) - tangent_coords(b)))) <= tol


# ---------------------------------------------------------------- riemann


@pytest.mark.parametrize("n", [1, 2, 3])
def test_riemann_vanishes_on_equal_slots(n):
    g = rng(n)
    pt, a, c = point(g, n), tangent(g, n), tangent(g, n)
    r = cv.riemann(MetricParams(0.1, 0.8), pt, a, a, c)
    assert r.norm_max() == 0.0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_riemann_matrix_directions_against_D(n):
    g = rng(10 + n)
    pt = point(g, n)
    a, b = Tangent(tangent(g, n).X), Tangent(tangent(g, n).X)
    r = cv.riemann(MetricParams(0.3, 0.5), pt, a, b, Tangent(pt.D))
    assert r.norm_max() <= 1e-12


@pytest.mark.parametrize("mp", PARAMS[:2])
def test_riemann_matches_finite_differences(mp):
    g = rng(3)
    n = 2
    pt = point(g, n)
    chart = oracle.Chart(n)
    R = oracle.fd_riemann(mp, chart, chart.to_coords(pt))
    basis = tangent_basis(n)
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            for k, c in enumerate(basis):
                closed = tangent_coords(cv.riemann(mp, pt, a, b, c))
                assert np.max(np.abs(closed - R[:, i, j, k])) <= 1e-5


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("mp", PARAMS)
def test_riemann_antisymmetry_exact(n, mp):
    g = rng(n)
    for _ in range(10):
        pt, a, b, c = point(g, n), tangent(g, n), tangent(g, n), tangent(g, n)
        r1 = cv.riemann(mp, pt, a, b, c)
        r2 = cv.riemann(mp, pt, b, a, c)
        assert np.array_equal(r1.X, -r2.X) and np.array_equal(r1.x, -r2.x)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("mp", PARAMS)
def test_first_bianchi(n, mp):
    g = rng(20 + n)
    for _ in range(10):
        pt, a, b, c = point(g, n), tangent(g, n), tangent(g, n), tangent(g, n)
        s = cv.riemann(mp, pt, a, b, c) + cv.riemann(mp, pt, b, c, a) + cv.riemann(mp, pt, c, a, b)
        assert s.norm_max() <= 1e-9


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("mp", PARAMS)
def test_metric_skew_symmetry(n, mp):
    g = rng(30 + n)
    for _ in range(10):
        pt, a, b, c, d = point(g, n), *(tangent(g, n) for _ in range(4))
        lhs = unified_eval(mp, pt, cv.riemann(mp, pt, a, b, c), d)
        rhs = -unified_eval(mp, pt, cv.riemann(mp, pt, a, b, d), c)
        assert abs(lhs - rhs) <= 1e-9


def test_degenerate_alpha_rejected():
    mp = MetricParams(-0.25, 1.0)
    pt = Point(np.eye(2))
    t = Tangent.zero(2)
    with pytest.raises(DomainError):
        cv.riemann(mp, pt, t, t, t)
    with pytest.raises(DomainError):
        cv.ricci(mp, pt, t, t)
    with pytest.raises(DomainError):
        cv.scalar_full(mp, 2)


# ---------------------------------------------------------------- ricci


def test_ricci_identity_direction():
    a = Tangent(np.eye(2))
    assert cv.ricci(MetricParams(), Point(np.eye(2)), a, a) == pytest.approx(-0.5, abs=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ricci_vector_directions(n):
    x = rng(n).standard_normal(n)
    a = Tangent(np.zeros((n, n)), x)
    val = cv.ricci(MetricParams(0.0, 1.0), Point(np.eye(n)), a, a)
    assert val == pytest.approx(-0.5 * float(x @ x), abs=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("mp", PARAMS)
def test_ricci_equals_trace_of_riemann(n, mp):
    g = rng(40 + n)
    pt, b, c = point(g, n), tangent(g, n), tangent(g, n)
    assert cv.ricci(mp, pt, b, c) == pytest.approx(cv.ricci_by_trace(mp, pt, b, c), abs=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ricci_polarization_and_symmetry(n):
    g = rng(50 + n)
    mp = MetricParams(0.2, 0.7)
    for _ in range(10):
        pt, a, b = point(g, n), tangent(g, n), tangent(g, n)
        r = cv.ricci(mp, pt, a, b)
        pol = (cv.ricci(mp, pt, a + b, a + b) - cv.ricci(mp, pt, a - b, a - b)) / 4.0
        assert r == pytest.approx(pol, abs=1e-10)
        assert abs(r - cv.ricci(mp, pt, b, a)) <= 1e-12


def test_ricci_matches_finite_differences():
    g = rng(4)
    n = 2
    mp = MetricParams(0.1, 0.9)
    pt = point(g, n)
    chart = oracle.Chart(n)
    Ric = oracle.fd_ricci(oracle.fd_riemann(mp, chart, chart.to_coords(pt)))
    basis = tangent_basis(n)
    closed = np.array([[cv.ricci(mp, pt, a, b) for b in basis] for a in basis])
    assert np.max(np.abs(closed - Ric)) <= 1e-4


# ---------------------------------------------------------------- ricci operator


@pytest.mark.parametrize("mp", PARAMS)
def test_ricci_operator_defining_identity(mp):
    g = rng(60)
    for i in range(100):
        n = 1 + i % 3
        pt, a, b = point(g, n), tangent(g, n), tangent(g, n)
        lhs = unified_eval(mp, pt, cv.ricci_operator(mp, pt, a), b)
        assert lhs == pytest.approx(cv.ricci(mp, pt, a, b), abs=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("al", [0.0, 0.3])
def test_ricci_operator_on_D(n, al):
    pt = point(rng(n), n)
    mp = MetricParams(al, 1.0)
    r = cv.ricci_operator(mp, pt, Tangent(pt.D))
    coef = -(n + 1) / 2.0 + n * (1 + 2 * (n + 1) * al) / (2 * (1 + 2 * n * al))
    assert _close(r, Tangent(coef * pt.D), 1e-12)


def test_ricci_operator_vector_part():
    x = np.array([0.3, -1.2])
    r = cv.ricci_operator(MetricParams(0.0, 1.0), point(rng(1), 2), Tangent(np.zeros((2, 2)), x))
    assert np.allclose(r.x, -x / 2, atol=1e-15, rtol=0)
    assert np.all(r.X == 0.0)


def test_ricci_operator_matches_finite_differences():
    n = 2
    mp = MetricParams(0.2, 0.6, 1.5)
    pt = point(rng(5), n)
    chart = oracle.Chart(n)
    fd = oracle.fd_ricci_operator(mp, chart, chart.to_coords(pt))
    assert np.max(np.abs(fd - cv.ricci_operator_matrix(mp, pt))) <= 1e-4


# ---------------------------------------------------------------- scalar curvature


def test_scalar_worked_values():
    assert cv.scalar_full(MetricParams(), 1) == -1.0
    assert cv.scalar_full(MetricParams(), 2) == -4.5
    assert cv.scalar_special(MetricParams(), 2) == -3.5


@pytest.mark.parametrize("n, full, special", [(1, -1.0, None), (2, -4.5, -3.5)])
def test_scalar_worked_values_by_trace(n, full, special):
    pt = point(rng(7), n)
    assert cv.scalar_by_trace(MetricParams(), pt) == pytest.approx(full, abs=1e-12)
    if special is not None:
        assert cv.scalar_by_trace(MetricParams(), pt, special=True) == pytest.approx(special, abs=1e-12)


@pytest.mark.parametrize("n, full", [(1, -1.0), (2, -4.5)])
def test_scalar_worked_values_by_finite_differences(n, full):
    pt = point(rng(8), n)
    chart = oracle.Chart(n)
    tol = 1e-4 if n == 1 else 1e-3
    assert oracle.fd_scalar(MetricParams(), chart, chart.to_coords(pt)) == pytest.approx(full, abs=tol)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("mp", PARAMS)
def test_scalar_is_point_independent(n, mp):
    g = rng(70 + n)
    vals = [cv.scalar_by_trace(mp, point(g, n)) for _ in range(20)]
    assert max(vals) - min(vals) <= 1e-9
    assert np.mean(vals) == pytest.approx(cv.scalar_full(mp, n), abs=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("mp", PARAMS)
def test_scalar_special_is_partial_trace(n, mp):
    pt = point(rng(n), n)
    assert cv.scalar_by_trace(mp, pt, special=True) == pytest.approx(cv.scalar_special(mp, n), abs=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_scalar_metric_contraction(n):
    mp = MetricParams(0.15, 0.4, 3.0)
    pt = point(rng(n), n)
    assert cv.metric_contracted_scalar(mp, pt) == pytest.approx(cv.scalar_full(mp, n), abs=1e-9)


@given(st.floats(0.1, 10.0))
@settings(max_examples=30, deadline=None)
def test_scale_divides_scalar_and_keeps_ricci(scale):
    base = MetricParams(0.1, 0.8)
    scaled = MetricParams(0.1, 0.8, scale)
    assert cv.scalar_full(scaled, 2) == pytest.approx(cv.scalar_full(base, 2) / scale, rel=1e-14)
    assert cv.scalar_special(scaled, 3) == pytest.approx(cv.scalar_special(base, 3) / scale, rel=1e-14)
    g = rng(1)
    pt, a, b = point(g, 2), tangent(g, 2), tangent(g, 2)
    assert cv.ricci(scaled, pt, a, b) == cv.ricci(base, pt, a, b)


# ---------------------------------------------------------------- extended Fisher scalar


def test_fisher_scalar_gaussian_line():
    assert cv.fisher_scalar_extended(1, 1.0) == pytest.approx(-1.0, abs=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("p", [0.8, 1.0, 1.5, 1.9])
def test_fisher_scalar_matches_unified(n, p):
    if p <= n / (n + 2.0):
        pytest.skip("outside the family range")
    mp = met.as_unified(met.Fisher(p), n)
    assert abs(cv.fisher_scalar_extended(n, p) - cv.scalar_full(mp, n)) <= 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fisher_scalar_monotone(n):
    lo = n / (n + 2.0)
    ps = np.linspace(lo, 2.0, 102)[1:-1]
    vals = [cv.fisher_scalar_extended(n, p) for p in ps]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 0.0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fisher_scalar_vanishes_at_two(n):
    vals = [abs(cv.fisher_scalar_extended(n, 2.0 - e)) for e in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-6


@pytest.mark.parametrize("n, p", [(1, 2.0), (1, 1 / 3), (2, 0.5), (3, 0.6), (2, 2.5), (1, 0.1)])
def test_fisher_scalar_domain(n, p):
    with pytest.raises(DomainError):
        cv.fisher_scalar_extended(n, p)


# ---------------------------------------------------------------- ball volume


@pytest.mark.parametrize("r", [0.1, 1.0, 2.5])
def test_ball_volume_flat(r):
    assert cv.ball_volume(2, 0.0, r) == pytest.approx(math.pi * r * r, rel=1e-15)


def test_ball_volume_zero_radius():
    assert cv.ball_volume(5, -4.5, 0.0) == 0.0


def test_ball_volume_curved_example():
    r = 0.1
    assert cv.ball_volume(2, -4.5, r) == pytest.approx(math.pi * r * r * (1 + 4.5 * 0.01 / 24), rel=1e-14)


@pytest.mark.parametrize("n, unit", [(1, 2.0), (3, 4 * math.pi / 3), (4, math.pi ** 2 / 2)])
def test_ball_volume_unit_balls(n, unit):
    assert cv.ball_volume(n, 0.0, 1.0) == pytest.approx(unit, rel=1e-14)


def test_ball_volume_negative_radius():
    with pytest.raises(DomainError):
        cv.ball_volume(2, 0.0, -1.0)


# ---------------------------------------------------------------- report


def test_curvature_report_modes_agree():
    mp = MetricParams(0.1, 0.8)
    pt = point(rng(9), 2)
    closed = cv.curvature_report(mp, pt)
    fd = cv.curvature_report(mp, pt, method="finite-difference")
    assert closed.scalar == cv.scalar_full(mp, 2)
    assert fd.scalar == pytest.approx(closed.scalar, abs=1e-3)
    assert np.allclose(fd.ricci_eigenvalues, closed.ricci_eigenvalues, atol=1e-3)
    assert closed.to_json()["method"] == "closed-form"


def test_curvature_report_unknown_method():
    with pytest.raises(DomainError):
        cv.curvature_report(MetricParams(), Point(np.eye(1)), method="symbolic")
