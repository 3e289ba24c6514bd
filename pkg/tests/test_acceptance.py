"""Acceptance criteria, one test per sub-check.

Each test carries a ``criterion`` marker; the terminal summary prints a
PASS/FAIL line per sub-check and per criterion.
"""

import math

import numpy as np
import pytest

from infogeo import curvature as cv
from infogeo import family as fam
from infogeo import geometry as geo
from infogeo import metric as met
from infogeo import oracle
from infogeo.family import FamilyParams, Point
from infogeo.metric import MetricParams, Tangent, tangent_basis, tangent_coords, unified_eval

from geocheck import ode_residual, velocity_mismatch
from randgen import point, rng, spd, sym, tangent

criterion = pytest.mark.criterion

ENTROPY_GRID = [(n, p, q) for n, ps in ((1, (0.8, 1.0, 1.5, 3.0)), (2, (0.95, 1.0, 1.5)))
                for p in ps for q in (0.9, 1.5, 2.0)
                if q > fam.power_integral_bound(FamilyParams(n, p))]
GRID_IDS = [f"n{n}-p{p}-q{q}" for n, p, q in ENTROPY_GRID]
TIMES = np.linspace(0.05, 0.95, 20)
IVP_STEPS = 1000


def _fixed_point(n, seed=0):
    g = rng(1000 + seed)
    return Point(spd(g, n, 0.5), g.standard_normal(n) * 0.5)


# ---------------------------------------------------------------- 1 entropies


@criterion(1, "Renyi")
@pytest.mark.parametrize("n, p, q", ENTROPY_GRID, ids=GRID_IDS)
def test_c1_renyi_quadrature(n, p, q):
    fp = FamilyParams(n, p)
    pt = _fixed_point(n)
    closed = fam.renyi_entropy(fp, pt.D, q).value
    quad = oracle.quad_renyi(fp, pt, q).value
    assert abs(closed - quad) <= 1e-6, (closed, quad)


@criterion(1, "Tsallis")
@pytest.mark.parametrize("n, p, q", ENTROPY_GRID, ids=GRID_IDS)
def test_c1_tsallis_quadrature(n, p, q):
    fp = FamilyParams(n, p)
    pt = _fixed_point(n)
    closed = fam.tsallis_entropy(fp, pt.D, q).value
    quad = oracle.quad_tsallis(fp, pt, q).value
    assert abs(closed - quad) <= 1e-6, (closed, quad)


# ---------------------------------------------------------------- 2 Renyi Hessian


def _hessian_inputs(n, seed=2):
    g = rng(seed)
    return spd(g, n, 0.3), sym(g, n, 0.5), sym(g, n, 0.5)


@criterion(2, "Renyi Hessian equals half trace")
@pytest.mark.parametrize("n, p, q", ENTROPY_GRID, ids=GRID_IDS)
def test_c2_renyi_hessian(n, p, q):
    D, X, Y = _hessian_inputs(n)
    fd = oracle.fd_entropy_hessian(FamilyParams(n, p), q, D, X, Y)
    target = met.named_eval(met.Renyi(), None, Point(D), Tangent(X), Tangent(Y))
    assert abs(fd - target) <= 1e-5, (fd, target)


@criterion(2, "Renyi Hessian independent of (p, q)")
@pytest.mark.parametrize("n", [1, 2])
def test_c2_renyi_hessian_invariance(n):
    D, X, Y = _hessian_inputs(n)
    vals = [oracle.fd_entropy_hessian(FamilyParams(m, p), q, D, X, Y) for m, p, q in ENTROPY_GRID if m == n]
    assert max(vals) - min(vals) <= 1e-5, vals


# ---------------------------------------------------------------- 3 Tsallis form


@criterion(3, "Tsallis Hessian matches closed form")
@pytest.mark.parametrize("n, p, q", ENTROPY_GRID, ids=GRID_IDS)
def test_c3_tsallis_hessian(n, p, q):
    D, X, Y = _hessian_inputs(n)
    fp = FamilyParams(n, p)
    fd = oracle.fd_entropy_hessian(fp, q, D, X, Y, kind="tsallis")
    closed = met.named_eval(met.Tsallis(p, q), fp, Point(D), Tangent(X), Tangent(Y))
    assert abs(fd - closed) <= 1e-5, (fd, closed)


@criterion(3, "Tsallis form tends to the Renyi form as q -> 1")
@pytest.mark.parametrize("n, p", sorted({(n, p) for n, p, _ in ENTROPY_GRID}))
def test_c3_tsallis_limit(n, p):
    D, X, Y = _hessian_inputs(n)
    fp = FamilyParams(n, p)
    target = met.named_eval(met.Renyi(), None, Point(D), Tangent(X), Tangent(Y))
    for q in (1.0 - 1e-5, 1.0 + 1e-5):
        fd = oracle.fd_entropy_hessian(fp, q, D, X, Y, h=1e-3, kind="tsallis")
        closed = met.named_eval(met.Tsallis(p, q), fp, Point(D), Tangent(X), Tangent(Y))
        assert abs(fd - target) <= 1e-4, (q, fd, target)
        assert abs(closed - target) <= 1e-4, (q, closed, target)


# ---------------------------------------------------------------- 4 Fisher


FISHER_GRID = [(1, 0.8), (1, 1.0), (1, 1.5), (2, 0.95), (2, 1.0), (2, 1.5)]
FISHER_MC = [(3, 1.0), (3, 0.95), (4, 1.0), (4, 0.95)]
RANDOM_CASES = 20


def _fisher_cases(n, p, seed):
    g = rng(seed)
    return [(point(g, n), tangent(g, n, 0.5), tangent(g, n, 0.5)) for _ in range(RANDOM_CASES)]


@criterion(4, "grid Fisher")
@pytest.mark.parametrize("n, p", FISHER_GRID)
def test_c4_fisher_grid(n, p):
    fp = FamilyParams(n, p)
    worst = 0.0
    for pt, a, b in _fisher_cases(n, p, 40 + n):
        est = oracle.numeric_fisher(fp, pt, a, b)
        worst = max(worst, abs(est.value - met.named_eval(met.Fisher(p), fp, pt, a, b)))
    assert worst <= 1e-4, worst


@criterion(4, "Monte Carlo Fisher")
@pytest.mark.parametrize("n, p", FISHER_MC)
def test_c4_fisher_mc(n, p):
    fp = FamilyParams(n, p)
    z = []
    for i, (pt, a, b) in enumerate(_fisher_cases(n, p, 50 + n)):
        est = oracle.numeric_fisher(fp, pt, a, b, method="mc", seed=i)
        z.append(abs(est.value - met.named_eval(met.Fisher(p), fp, pt, a, b)) / est.error)
    assert max(z) <= 3.0, z


@criterion(4, "cross-block orthogonality")
@pytest.mark.parametrize("n, p", FISHER_GRID)
def test_c4_cross_block(n, p):
    fp = FamilyParams(n, p)
    pt = _fixed_point(n, 4)
    worst = 0.0
    for i in range(n):
        E = np.zeros((n, n))
        E[i, i] = 1.0
        for k in range(n):
            e = np.zeros(n)
            e[k] = 1.0
            worst = max(worst, abs(oracle.numeric_fisher(fp, pt, Tangent(E), Tangent(np.zeros((n, n)), e)).value))
    assert worst <= 1e-5, worst


@criterion(4, "divergence at p = 2.5")
@pytest.mark.parametrize("n", [1, 2])
def test_c4_divergence(n):
    fp = FamilyParams(n, 2.5)
    E = np.zeros((n, n))
    E[0, 0] = 1.0
    v0, v1, ratio = oracle.fisher_growth(fp, _fixed_point(n, 5), Tangent(E), Tangent(E))
    assert ratio >= 10.0, (v0, v1)


# ---------------------------------------------------------------- 5 Csiszar


PHIS = [met.KL, met.HELLINGER, met.PhiDescriptor.alpha_relative(0.3)]
# KL between members with different supports is infinite, so it is checked on the full-support members only
CSISZAR_CASES = [(phi, n, p) for phi in PHIS for n, p in FISHER_GRID if p <= 1.0 or phi is not met.KL]


@criterion(5, "induced form over Fisher")
@pytest.mark.parametrize("phi, n, p", CSISZAR_CASES, ids=[f"{f.name}-n{n}-p{p}" for f, n, p in CSISZAR_CASES])
def test_c5_csiszar(phi, n, p):
    fp = FamilyParams(n, p)
    g = rng(60 + n)
    for _ in range(3):
        pt, a, b = point(g, n), tangent(g, n, 0.5), tangent(g, n, 0.5)
        F = met.named_eval(met.Fisher(p), fp, pt, a, a)
        ratio = met.csiszar_induced_form(phi, fp, pt, a, a) / F
        assert abs(ratio - phi.second_derivative_at_one) <= 1e-3, ratio
        Fab = met.named_eval(met.Fisher(p), fp, pt, a, b)
        mixed = met.csiszar_induced_form(phi, fp, pt, a, b)
        assert abs(mixed - phi.second_derivative_at_one * Fab) <= 1e-3 * max(1.0, abs(F)), (mixed, Fab)


# ---------------------------------------------------------------- 6 canonicalization


@criterion(6, "Fisher(1) equals Calvo-Oller(1)")
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_c6_fisher_co(n):
    g = rng(70 + n)
    fp = FamilyParams(n, 1.0)
    for _ in range(25):
        pt, a, b = point(g, n), tangent(g, n), tangent(g, n)
        f = met.named_eval(met.Fisher(1.0), fp, pt, a, b)
        c = met.named_eval(met.CalvoOller(1.0), None, pt, a, b)
        assert abs(f - c) <= 1e-12 * max(1.0, abs(f)), (f, c)


@criterion(6, "LMR equals twice the unified metric")
def test_c6_lmr():
    g = rng(80)
    for i in range(100):
        n = 1 + i % 4
        pt, a, b = point(g, n), tangent(g, n), tangent(g, n)
        lmr = met.named_eval(met.LMR(), None, pt, a, b)
        uni = 2.0 * unified_eval(MetricParams(-1.0 / (2 * (n + 1)), 0.25), pt, a, b)
        assert abs(lmr - uni) <= 1e-10, (lmr, uni)


INCOMPARABLE = [(met.Fisher(1.5), met.CalvoOller(2.0)), (met.Fisher(1.5), met.LMR()), (met.CalvoOller(2.0), met.LMR())]


@criterion(6, "pairwise incomparability")
@pytest.mark.parametrize("s1, s2", INCOMPARABLE, ids=lambda s: s.name)
def test_c6_incomparable(s1, s2):
    n = 2
    pt = Point([[2.0, 0.3], [0.3, 1.0]], [0.1, -0.2])
    fp = FamilyParams(n, 1.5)
    witnesses = [Tangent(np.eye(2)), Tangent([[1.0, 0.0], [0.0, -1.0]]), Tangent(np.zeros((2, 2)), [1.0, 0.0])]
    ratios = [met.named_eval(s1, fp, pt, t, t) / met.named_eval(s2, fp, pt, t, t) for t in witnesses]
    spread = max(ratios) / min(ratios) - 1.0
    assert spread > 0.01, ratios


# ---------------------------------------------------------------- 7 geodesics


def _ivp_endpoint_error(closed, mp):
    start = geo.GeodesicState(closed.point(0.0), closed.velocity(0.0))
    end = geo.geodesic_ivp(mp, start, 1.0, IVP_STEPS).end_point()
    ref = closed.point(1.0)
    return float(max(np.max(np.abs(end.D - ref.D)), np.max(np.abs(end.u - ref.u))))


def _ode_worst(closed, mp):
    return max(max(ode_residual(closed, mp, t), velocity_mismatch(closed, t)) for t in TIMES)


def _n1_case():
    mp = MetricParams(0.3, 0.6)
    return mp, geo.geodesic_n1(mp, Point([[0.5]], [1.0]), Point([[3.0]], [2.5]))[0]


def _special_normal_case():
    g = rng(90)
    return MetricParams(0.2, 1.3), geo.geodesic_special_normal(spd(g, 3), spd(g, 3), g.standard_normal(3))


def _alpha0_equal_means_case():
    g = rng(91)
    u = g.standard_normal(2)
    return MetricParams(0.0, 1.3), geo.geodesic_alpha0(1.3, Point(spd(g, 2), u), Point(spd(g, 2), u))[0]


def _alpha0_distinct_means_case():
    return MetricParams(0.0, 1.0), geo.geodesic_alpha0(1.0, Point([[2.0]], [0.0]), Point([[2.0]], [1.5]))[0]


def _diagonal_single_rate_case():
    beta = 0.8
    closed = geo.geodesic_diagonal_family(beta, np.eye(2), [1.2, 1.2], np.diag([0.6, 0.0]), np.diag([0.1, 0.3]))
    return MetricParams(0.0, beta), closed


def _diagonal_general_case():
    beta = 0.8
    closed = geo.geodesic_diagonal_family(beta, np.eye(2), [1.0, 1.0], np.diag([0.5, -0.3]), np.diag([0.1, 0.2]))
    return MetricParams(0.0, beta), closed


GEODESIC_CASES = {
    "n1": _n1_case,
    "special-normal": _special_normal_case,
    "alpha0-equal-means": _alpha0_equal_means_case,
    "alpha0-distinct-means": _alpha0_distinct_means_case,
    "diagonal-one-rate": _diagonal_single_rate_case,
    "diagonal-two-rates": _diagonal_general_case,
}


@criterion(7, "ODE residual")
@pytest.mark.parametrize("case", list(GEODESIC_CASES))
def test_c7_ode_residual(case):
    mp, closed = GEODESIC_CASES[case]()
    worst = _ode_worst(closed, mp)
    assert worst <= 1e-7, worst


@criterion(7, "IVP reaches the endpoint")
@pytest.mark.parametrize("case", list(GEODESIC_CASES))
def test_c7_ivp_endpoint(case):
    mp, closed = GEODESIC_CASES[case]()
    err = _ivp_endpoint_error(closed, mp)
    assert err <= 1e-6, err


@criterion(7, "n=1 and pullback distances agree")
def test_c7_n1_vs_alpha0_distance():
    p0, p1 = Point([[2.0]], [0.0]), Point([[2.0]], [1.5])
    d_n1 = geo.geodesic_n1(MetricParams(0.0, 1.0), p0, p1)[1]
    d_pull = geo.distance_alpha0(1.0, p0, p1)
    assert abs(d_n1 - d_pull) <= 1e-9, (d_n1, d_pull)


SHOOTING_CASES = ["n1", "special-normal", "alpha0-equal-means", "diagonal-one-rate"]


@criterion(7, "shooting recovers closed-form distances")
@pytest.mark.parametrize("case", SHOOTING_CASES)
def test_c7_shooting(case):
    mp, closed = GEODESIC_CASES[case]()
    v = closed.velocity(0.0)
    length = math.sqrt(unified_eval(mp, closed.point(0.0), v, v))
    shot = geo.shooting_distance(mp, closed.point(0.0), closed.point(1.0))
    assert abs(shot - length) <= 1e-5, (shot, length)


# ---------------------------------------------------------------- 8 distances


@criterion(8, "special-normal distance equals path length")
@pytest.mark.parametrize("n, alpha", [(2, 0.0), (2, 0.5), (3, -0.1)])
def test_c8_path_length(n, alpha):
    g = rng(100 + n)
    mp = MetricParams(alpha, 1.0)
    D0, D1 = spd(g, n), spd(g, n)
    closed = geo.geodesic_special_normal(D0, D1)
    length = geo.path_length(mp, closed.trace(mp=mp))
    assert abs(length - geo.distance_special_normal(mp, D0, D1)) <= 1e-6


@criterion(8, "congruence invariance")
def test_c8_congruence():
    g = rng(110)
    mp = MetricParams(0.3, 1.0)
    for _ in range(50):
        D0, D1 = spd(g, 3), spd(g, 3)
        T = g.standard_normal((3, 3)) + 3.0 * np.eye(3)
        ref = geo.distance_special_normal(mp, D0, D1)
        assert abs(geo.distance_special_normal(mp, T @ D0 @ T.T, T @ D1 @ T.T) - ref) <= 1e-9


@criterion(8, "n=1 distance under affine maps of the sample space")
def test_c8_n1_affine_invariance():
    g = rng(111)
    mp = MetricParams(0.2, 0.9)
    for _ in range(50):
        d0, d1 = np.exp(g.standard_normal(2))
        u0, u1 = g.standard_normal(2)
        c, s = math.exp(g.standard_normal()), g.standard_normal()
        ref = geo.geodesic_n1(mp, Point([[d0]], [u0]), Point([[d1]], [u1]))[1]
        moved = geo.geodesic_n1(mp, Point([[d0 / c ** 2]], [c * u0 + s]), Point([[d1 / c ** 2]], [c * u1 + s]))[1]
        assert abs(moved - ref) <= 1e-9 * max(1.0, ref)


@criterion(8, "triangle inequality")
@pytest.mark.parametrize("n", [2, 3])
def test_c8_triangle(n):
    g = rng(120 + n)
    mp = MetricParams(0.1, 1.0)
    slack = min(
        geo.distance_special_normal(mp, A, B) + geo.distance_special_normal(mp, B, C)
        - geo.distance_special_normal(mp, A, C)
        for A, B, C in ((spd(g, n, 0.8), spd(g, n, 0.8), spd(g, n, 0.8)) for _ in range(200))
    )
    assert slack >= -1e-9, slack


@criterion(8, "worked n=1 distance")
def test_c8_worked_example():
    d = geo.geodesic_n1(MetricParams(0.0, 1.0), Point([[2.0]], [0.0]), Point([[2.0]], [1.5]))[1]
    assert abs(d - math.sqrt(2.0) * 2.0 * math.log(2.0)) <= 1e-9


# ---------------------------------------------------------------- 9 curvature


CURV_PARAMS = [MetricParams(0.0, 1.0), MetricParams(0.2, 0.7), MetricParams(-0.1, 1.2, 1.5)]


@criterion(9, "closed forms vs finite-difference curvature")
@pytest.mark.parametrize("mp", CURV_PARAMS, ids=lambda m: f"a{m.alpha}-b{m.beta}-s{m.scale}")
def test_c9_fd_curvature(mp):
    n = 2
    pt = point(rng(130), n)
    chart = oracle.Chart(n)
    coords = chart.to_coords(pt)
    R = oracle.fd_riemann(mp, chart, coords)
    basis = tangent_basis(n)
    closed_R = np.array([[[tangent_coords(cv.riemann(mp, pt, a, b, c)) for c in basis] for b in basis] for a in basis])
    assert np.max(np.abs(np.einsum("abcd->dabc", closed_R) - R)) <= 1e-4
    closed_ric = np.array([[cv.ricci(mp, pt, a, b) for b in basis] for a in basis])
    assert np.max(np.abs(closed_ric - oracle.fd_ricci(R))) <= 1e-4
    assert abs(oracle.fd_scalar(mp, chart, coords) - cv.scalar_full(mp, n)) <= 1e-3


@criterion(9, "antisymmetry and first Bianchi identity")
@pytest.mark.parametrize("n", [1, 2, 3])
def test_c9_identities(n):
    g = rng(140 + n)
    for mp in CURV_PARAMS:
        for _ in range(10):
            pt, a, b, c = point(g, n), tangent(g, n), tangent(g, n), tangent(g, n)
            r = cv.riemann(mp, pt, a, b, c)
            assert (r + cv.riemann(mp, pt, b, a, c)).norm_max() <= 1e-9
            s = r + cv.riemann(mp, pt, b, c, a) + cv.riemann(mp, pt, c, a, b)
            assert s.norm_max() <= 1e-9


@criterion(9, "worked scalar curvatures from both code paths")
@pytest.mark.parametrize("n, special, expected", [(1, False, -1.0), (2, False, -4.5), (2, True, -3.5)])
def test_c9_scalar_values(n, special, expected):
    mp = MetricParams(0.0, 1.0)
    closed = cv.scalar_special(mp, n) if special else cv.scalar_full(mp, n)
    assert closed == expected
    chart = oracle.Chart(n)
    fd = oracle.fd_scalar(mp, chart, chart.to_coords(point(rng(150), n)), special=special)
    assert abs(fd - expected) <= 1e-3, fd


# ---------------------------------------------------------------- 10 extended Fisher scalar


@criterion(10, "agreement with the unified scalar curvature")
@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("p", [0.8, 1.0, 1.5, 1.9])
def test_c10_agreement(n, p):
    mp = met.as_unified(met.Fisher(p), n)
    assert abs(cv.fisher_scalar_extended(n, p) - cv.scalar_full(mp, n)) <= 1e-12


@criterion(10, "monotone increasing in p")
@pytest.mark.parametrize("n", [1, 2, 3])
def test_c10_monotone(n):
    ps = np.linspace(n / (n + 2.0), 2.0, 102)[1:-1]
    vals = np.array([cv.fisher_scalar_extended(n, p) for p in ps])
    assert np.all(np.diff(vals) > 0.0)


@criterion(10, "vanishes as p -> 2")
@pytest.mark.parametrize("n", [1, 2, 3])
def test_c10_limit(n):
    vals = [abs(cv.fisher_scalar_extended(n, 2.0 - 10.0 ** -k)) for k in range(1, 10)]
    assert all(b < a for a, b in zip(vals, vals[1:])) and vals[-1] <= 1e-7, vals


# ---------------------------------------------------------------- 11 maximum entropy


@criterion(11, "margin is non-negative")
def test_c11_nonnegative():
    g = rng(160)
    for _ in range(100):
        q = g.uniform(0.4, 4.0)
        D = [[math.exp(g.standard_normal())]]
        for competitor in ("gaussian", g.uniform(0.4, 4.0)):
            assert oracle.max_entropy_check(FamilyParams(1, q), D, competitor) >= -1e-9


@criterion(11, "self competitor has zero margin")
@pytest.mark.parametrize("q", [0.8, 1.0, 1.5, 2.0])
def test_c11_self(q):
    assert abs(oracle.max_entropy_check(FamilyParams(1, q), [[1.3]], "self")) <= 1e-9


@criterion(11, "matched-covariance Gaussian is strictly worse")
@pytest.mark.parametrize("q", [0.8, 1.5])
def test_c11_gaussian(q):
    assert oracle.max_entropy_check(FamilyParams(1, q), [[1.3]]) > 1e-6


# ---------------------------------------------------------------- 12 Kubo-Mori and largest


@criterion(12, "Kubo-Mori kernel vs integral")
def test_c12_kubo_mori():
    g = rng(170)
    for _ in range(10):
        D, X, Y = spd(g, 3), sym(g, 3), sym(g, 3)
        assert abs(met.kubo_mori_eval(D, X, Y) - oracle.kubo_mori_integral(D, X, Y)) <= 1e-8


@criterion(12, "identity point reduces to Tr(XY)")
def test_c12_identity():
    g = rng(171)
    for n in (1, 2, 3, 4):
        X, Y = sym(g, n), sym(g, n)
        ref = float(np.trace(X @ Y))
        assert abs(met.kubo_mori_eval(np.eye(n), X, Y) - ref) <= 1e-12
        assert abs(met.largest_eval(np.eye(n), X, Y) - ref) <= 1e-12
