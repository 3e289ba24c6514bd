"""Independent numerical ground truth for the closed forms.

Nothing here calls the closed-form entropy integrals, the Fisher formula, the
connection or the curvature formulas.  Integrals are computed by mapped
trapezoid grids (n <= 2) or seeded Monte Carlo (n <= 4); geometry comes from
central differences of the metric matrix in a fixed chart.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import _quadrature
from .errors import DomainError, NumericalError, StepSizeError
from .family import FamilyParams, Point, log_density, power_integral_bound, sample, support_scale
from .metric import MetricParams, Tangent, tangent_basis, unified_eval

FD_STEP_GEOMETRY = 1e-4
FD_STEP_SCORE = 1e-5
MC_CHUNK = 1 << 15


def max_workers() -> int:
    """Worker cap for parallel oracle loops, from ``INFOGEO_THREADS`` (default 4)."""
    env = os.environ.get("INFOGEO_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise DomainError(f"INFOGEO_THREADS must be an integer, got {env!r}") from None
    return max(1, min(4, os.cpu_count() or 1))


@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    error: float
    method: str
    seed: int | None = None
    diverging: bool = False

    def __post_init__(self):
        if not self.error >= 0.0:
            raise NumericalError(f"invalid error estimate {self.error!r}")

    def __float__(self):
        return float(self.value)


class Chart:
    """Coordinates ``D_11..D_nn, D_12..D_(n-1)n, u_1..u_n`` on the parameter manifold."""

    def __init__(self, n: int):
        if n < 1:
            raise DomainError("chart dimension must be positive")
        self.n = int(n)
        self.m = self.n * (self.n + 1) // 2
        self.dim = self.m + self.n
        self._iu = np.triu_indices(self.n, 1)
        self.basis = tangent_basis(self.n)

    def to_coords(self, pt: Point) -> np.ndarray:
        if pt.n != self.n:
            raise DomainError("point dimension does not match the chart")
        return np.concatenate([np.diag(pt.D), pt.D[self._iu], pt.u])

    def matrix(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        D = np.diag(v[: self.n])
        D[self._iu] = v[self.n : self.m]
        D[(self._iu[1], self._iu[0])] = v[self.n : self.m]
        return D

    def from_coords(self, v) -> Point:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.dim,):
            raise DomainError(f"expected {self.dim} chart coordinates, got shape {v.shape}")
        return Point(self.matrix(v), v[self.m :])

    def tangent(self, v) -> Tangent:
        v = np.asarray(v, dtype=float)
        return Tangent(self.matrix(v), v[self.m :])


# ---------------------------------------------------------------- integrals over the family


def _grid_sum(fp: FamilyParams, pt: Point, integrand, level, resolution):
    x, w = _quadrature.grid(fp.n, fp.p, pt.D, pt.u, level, resolution)
    vals = np.asarray(integrand(x), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NumericalError("integrand produced non-finite values")
    return np.tensordot(w, vals, axes=(0, 0))


def quad_integral(fp: FamilyParams, pt: Point, integrand, resolution: int | None = None) -> IntegralEstimate:
    """Grid quadrature of ``integrand(x)`` over the support (n <= 2).

    ``integrand`` receives nodes of shape (N, n) and returns an array whose
    leading axis has length N.  The error estimate is the change under one
    resolution doubling with extended truncation.
    """
    if pt.n != fp.n:
        raise DomainError("point and family dimensions differ")
    v0 = _grid_sum(fp, pt, integrand, 0, resolution)
    v1 = _grid_sum(fp, pt, integrand, 1, resolution)
    err = float(np.max(np.abs(v1 - v0)))
    value = float(v1) if np.ndim(v1) == 0 else v1
    return IntegralEstimate(value, err, "grid")


def _density_on(fp, pt):
    def f(x):
        return np.exp(log_density(fp, pt, x))
    return f


def quad_density_power(fp: FamilyParams, pt: Point, q: float, resolution=None) -> IntegralEstimate:
    """``int f^q`` by quadrature."""
    if not q > power_integral_bound(fp):
        raise DomainError(f"integral of f^q diverges for q={q}")
    return quad_integral(fp, pt, lambda x: np.exp(q * log_density(fp, pt, x)), resolution)


def quad_renyi(fp: FamilyParams, pt: Point, q: float, resolution=None) -> IntegralEstimate:
    if q == 1.0:
        return quad_shannon(fp, pt, resolution)
    est = quad_density_power(fp, pt, q, resolution)
    val = math.log(est.value) / (1.0 - q)
    return IntegralEstimate(val, est.error / (abs(1.0 - q) * est.value), "grid")


def quad_tsallis(fp: FamilyParams, pt: Point, q: float, resolution=None) -> IntegralEstimate:
    est = quad_density_power(fp, pt, q, resolution)
    return IntegralEstimate((est.value - 1.0) / (1.0 - q), est.error / abs(1.0 - q), "grid")


def quad_shannon(fp: FamilyParams, pt: Point, resolution=None) -> IntegralEstimate:
    def integrand(x):
        lf = log_density(fp, pt, x)
        return np.where(np.isfinite(lf), -np.exp(lf) * np.where(np.isfinite(lf), lf, 0.0), 0.0)
    return quad_integral(fp, pt, integrand, resolution)


def quad_covariance(fp: FamilyParams, pt: Point, resolution=None) -> IntegralEstimate:
    """Covariance matrix ``int f (x-u)(x-u)^T`` by quadrature."""
    def integrand(x):
        d = x - pt.u
        return np.exp(log_density(fp, pt, x))[:, None, None] * d[:, :, None] * d[:, None, :]
    return quad_integral(fp, pt, integrand, resolution)


# ---------------------------------------------------------------- Fisher information


def _perturbed(pt: Point, t: Tangent, h: float) -> Point:
    return Point(pt.D + h * t.X, pt.u + h * t.x)


def _edge_distance(fp, D, u, x):
    d = x - u
    return 1.0 - support_scale(fp) * np.einsum("ki,ij,kj->k", d, D, d)


def score(fp: FamilyParams, pt: Point, t: Tangent, x: np.ndarray, h: float = FD_STEP_SCORE) -> np.ndarray:
    """Directional derivative of ``log f`` along ``t`` at nodes ``x`` (central differences).

    For compact members the support edge moves with the parameters, so near
    the edge the step is shrunk (in powers of two) until the perturbed edge
    distance changes by at most 0.1 percent.
    """
    x = np.asarray(x, dtype=float).reshape(-1, fp.n)
    out = np.zeros(len(x))
    if fp.p > 1.0:
        s0 = _edge_distance(fp, pt.D, pt.u, x)
        sp = _edge_distance(fp, pt.D + h * t.X, pt.u + h * t.x, x)
        sm = _edge_distance(fp, pt.D - h * t.X, pt.u - h * t.x, x)
        rate = np.abs(sp - sm) / (2.0 * h)
        with np.errstate(divide="ignore"):
            need = np.where(rate > 0.0, 1e-3 * np.maximum(s0, 0.0) / rate, np.inf)
            j = np.where(need >= h, 0, np.ceil(np.log2(h / np.maximum(need, 1e-300))))
        j = np.clip(j, 0, 60).astype(int)
        inside = s0 > 0.0
    else:
        j = np.zeros(len(x), dtype=int)
        inside = np.ones(len(x), dtype=bool)
    for level in np.unique(j[inside]):
        sel = inside & (j == level)
        hj = h * 2.0 ** (-int(level))
        lp = log_density(fp, _perturbed(pt, t, hj), x[sel])
        lm = log_density(fp, _perturbed(pt, t, -hj), x[sel])
        out[sel] = np.where(np.isfinite(lp) & np.isfinite(lm), (lp - lm) / (2.0 * hj), 0.0)
    return out


def _fisher_integrand(fp, pt, a, b, h):
    def g(x):
        f = np.exp(log_density(fp, pt, x))
        sa = score(fp, pt, a, x, h)
        sb = sa if b is a else score(fp, pt, b, x, h)
        return f * sa * sb
    return g


def _mc_chunk(fp, pt, a, b, h, count, seed):
    xs = sample(fp, pt, count, seed)
    sa = score(fp, pt, a, xs, h)
    sb = sa if b is a else score(fp, pt, b, xs, h)
    prod = sa * sb
    return float(np.sum(prod)), float(np.sum(prod * prod))


def numeric_fisher(fp: FamilyParams, pt: Point, a: Tangent, b: Tangent, method: str = "grid",
                   samples: int = 400_000, seed: int = 0, h: float = FD_STEP_SCORE,
                   resolution: int | None = None) -> IntegralEstimate:
    """Fisher information ``int f (d_a log f)(d_b log f)`` from finite-difference scores.

    ``method="grid"`` (n <= 2) integrates at two resolutions; if the finer
    one is more than ten times the coarser the estimate is flagged
    ``diverging`` (this is how the nonexistence for p >= 2 shows up).
    ``method="mc"`` (n <= 4) averages over ``samples`` draws split into fixed
    chunks with spawned seeds, so results do not depend on the worker count;
    the error is one standard error.
    """
    if pt.n != fp.n or a.n != fp.n or b.n != fp.n:
        raise DomainError("dimension mismatch")
    if method == "grid":
        g = _fisher_integrand(fp, pt, a, b, h)
        v0 = float(_grid_sum(fp, pt, g, 0, resolution))
        v1 = float(_grid_sum(fp, pt, g, 1, resolution))
        diverging = abs(v1) > 10.0 * abs(v0)
        return IntegralEstimate(v1, abs(v1 - v0), "grid", None, diverging)
    if method == "mc":
        if fp.n > 4:
            raise DomainError("Monte Carlo Fisher oracle supports n <= 4")
        samples = int(samples)
        nchunks = max(1, -(-samples // MC_CHUNK))
        sizes = [MC_CHUNK] * (nchunks - 1) + [samples - MC_CHUNK * (nchunks - 1)]
        seeds = [int(s.generate_state(1, np.uint64)[0]) for s in np.random.SeedSequence(seed).spawn(nchunks)]
        with ThreadPoolExecutor(max_workers=max_workers()) as pool:
            parts = list(pool.map(lambda k: _mc_chunk(fp, pt, a, b, h, sizes[k], seeds[k]), range(nchunks)))
        s1 = sum(p[0] for p in parts)
        s2 = sum(p[1] for p in parts)
        mean = s1 / samples
        var = max(s2 / samples - mean * mean, 0.0)
        return IntegralEstimate(mean, math.sqrt(var / samples), "monte-carlo", seed)
    raise DomainError(f"unknown Fisher oracle method {method!r}")


def fisher_growth(fp: FamilyParams, pt: Point, a: Tangent, b: Tangent, resolution=None) -> tuple[float, float, float]:
    """Grid Fisher estimates at both resolutions and their ratio."""
    g = _fisher_integrand(fp, pt, a, b, FD_STEP_SCORE)
    v0 = float(_grid_sum(fp, pt, g, 0, resolution))
    v1 = float(_grid_sum(fp, pt, g, 1, resolution))
    return v0, v1, v1 / v0


# ---------------------------------------------------------------- entropy Hessians


def fd_entropy_hessian(fp: FamilyParams, q: float, D, X, Y, h: float = FD_STEP_GEOMETRY,
                       kind: str = "renyi") -> float:
    """Mixed central second difference of an entropy along ``X`` and ``Y``."""
    from .family import renyi_entropy, shannon_entropy, tsallis_entropy

    if kind == "renyi":
        S = (lambda M: renyi_entropy(fp, M, q).value) if q != 1.0 else (lambda M: shannon_entropy(fp, M).value)
    elif kind == "tsallis":
        S = (lambda M: tsallis_entropy(fp, M, q).value) if q != 1.0 else (lambda M: shannon_entropy(fp, M).value)
    else:
        raise DomainError(f"unknown entropy kind {kind!r}")
    D = np.atleast_2d(np.asarray(D, dtype=float))
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    vals = {}
    for sx in (1, -1):
        for sy in (1, -1):
            M = D + h * (sx * X + sy * Y)
            if np.linalg.eigvalsh(0.5 * (M + M.T))[0] <= 0.0:
                raise StepSizeError(f"step h={h} leaves the positive definite cone")
            vals[sx, sy] = S(M)
    return (vals[1, 1] - vals[1, -1] - vals[-1, 1] + vals[-1, -1]) / (4.0 * h * h)


# ---------------------------------------------------------------- chart geometry


def fd_metric_components(mp: MetricParams, chart: Chart, coords) -> np.ndarray:
    """Metric matrix ``G_ab = g(e_a, e_b)`` in the chart basis."""
    pt = chart.from_coords(coords)
    B = chart.basis
    G = np.empty((chart.dim, chart.dim))
    for i, e in enumerate(B):
        for j in range(i, chart.dim):
            G[i, j] = G[j, i] = unified_eval(mp, pt, e, B[j])
    return G


def _metric_derivatives(mp, chart, coords, h):
    coords = np.asarray(coords, dtype=float)
    dG = np.empty((chart.dim, chart.dim, chart.dim))
    for c in range(chart.dim):
        e = np.zeros(chart.dim)
        e[c] = h
        try:
            Gp = fd_metric_components(mp, chart, coords + e)
            Gm = fd_metric_components(mp, chart, coords - e)
        except DomainError as exc:
            raise StepSizeError(f"step h={h} leaves the manifold: {exc}") from None
        dG[c] = (Gp - Gm) / (2.0 * h)
    return dG


def fd_christoffels(mp: MetricParams, chart: Chart, coords, h: float = FD_STEP_GEOMETRY) -> np.ndarray:
    """Christoffel symbols ``Gam[c, a, b]`` of the metric from central differences of ``G``."""
    G = fd_metric_components(mp, chart, coords)
    dG = _metric_derivatives(mp, chart, coords, h)  # dG[c, a, b] = d_c G_ab
    # lower[d, a, b] = 1/2 (d_a G_bd + d_b G_ad - d_d G_ab)
    lower = 0.5 * (np.einsum("abd->dab", dG) + np.einsum("bad->dab", dG) - dG)
    Gam = np.einsum("cd,dab->cab", np.linalg.inv(G), lower)
    return 0.5 * (Gam + np.transpose(Gam, (0, 2, 1)))


def fd_riemann(mp: MetricParams, chart: Chart, coords, h: float = FD_STEP_GEOMETRY) -> np.ndarray:
    """Riemann components ``R[d, a, b, c]`` with ``R(e_a, e_b) e_c = R[d, a, b, c] e_d``.

    ``R^d_abc = d_a Gam^d_bc - d_b Gam^d_ac + Gam^d_ae Gam^e_bc - Gam^d_be Gam^e_ac``.
    """
    coords = np.asarray(coords, dtype=float)
    Gam = fd_christoffels(mp, chart, coords, h)
    dGam = np.empty((chart.dim,) * 4)  # dGam[a, d, b, c] = d_a Gam^d_bc
    for a in range(chart.dim):
        e = np.zeros(chart.dim)
        e[a] = h
        dGam[a] = (fd_christoffels(mp, chart, coords + e, h) - fd_christoffels(mp, chart, coords - e, h)) / (2.0 * h)
    R = np.einsum("adbc->dabc", dGam) - np.einsum("bdac->dabc", dGam)
    R += np.einsum("dae,ebc->dabc", Gam, Gam) - np.einsum("dbe,eac->dabc", Gam, Gam)
    return R


def fd_ricci(R: np.ndarray) -> np.ndarray:
    """Ricci components ``Ric[b, c] = R[a, a, b, c]`` (trace over the first slot)."""
    return np.einsum("aabc->bc", R)


def fd_ricci_operator(mp: MetricParams, chart: Chart, coords, h: float = FD_STEP_GEOMETRY) -> np.ndarray:
    """Ricci operator matrix ``G^-1 Ric`` from finite-difference curvature."""
    G = fd_metric_components(mp, chart, coords)
    Ric = fd_ricci(fd_riemann(mp, chart, coords, h))
    return np.linalg.solve(G, 0.5 * (Ric + Ric.T))


def fd_scalar(mp: MetricParams, chart: Chart, coords, h: float = FD_STEP_GEOMETRY, special: bool = False) -> float:
    """Scalar curvature ``G^bc Ric_bc``; ``special`` traces the matrix directions only."""
    R = fd_ricci_operator(mp, chart, coords, h)
    m = chart.m if special else chart.dim
    return float(np.trace(R[:m, :m]))


# ---------------------------------------------------------------- max-entropy comparison


def max_entropy_check(fp: FamilyParams, D, competitor="gaussian", resolution=None) -> float:
    """Margin ``S_q(f_q(D)) - S_q(competitor)`` with ``q = fp.p``.

    ``competitor`` is ``"gaussian"`` (the normal law with covariance ``D^-1``),
    ``"self"`` (``f_q`` itself, its entropy recomputed by quadrature) or a
    float ``p'`` naming another member of the family at the same ``D``, whose
    covariance is also ``D^-1``.
    """
    from .family import renyi_entropy, shannon_entropy

    q = fp.p
    D = np.atleast_2d(np.asarray(D, dtype=float))

    def entropy(fam):
        if not q > power_integral_bound(fam):
            raise DomainError(f"competitor entropy diverges at q={q}")
        return shannon_entropy(fam, D).value if q == 1.0 else renyi_entropy(fam, D, q).value

    own = entropy(fp)
    if isinstance(competitor, str) and competitor == "self":
        other = quad_renyi(fp, Point(D), q, resolution).value
    elif isinstance(competitor, str) and competitor == "gaussian":
        other = entropy(FamilyParams(fp.n, 1.0))
    elif isinstance(competitor, (int, float)):
        # every admissible p has finite covariance D^-1
        other = entropy(FamilyParams(fp.n, float(competitor)))
    else:
        raise DomainError(f"unknown competitor {competitor!r}")
    return own - other


# ---------------------------------------------------------------- Kubo-Mori integral


def kubo_mori_integral(D, X, Y) -> float:
    """``int_0^inf Tr((D+tI)^-1 X (D+tI)^-1 Y) dt`` by adaptive quadrature."""
    D = np.asarray(D, dtype=float)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    I = np.eye(D.shape[0])

    def integrand(t):
        M = D + t * I
        return float(np.trace(np.linalg.solve(M, X) @ np.linalg.solve(M, Y)))

    val, _ = quad(integrand, 0.0, np.inf, epsabs=1e-14, epsrel=1e-13, limit=500)
    return float(val)
