"""Curvature of the unified metric: Riemann, Ricci, scalar curvature.

Conventions: ``R(a, b)c = dGamma(a)(b)(c) - dGamma(b)(a)(c) + Gamma(a, Gamma(b)c)
- Gamma(b, Gamma(a)c)``, Ricci is the trace over the first slot, and for a
metric ``scale * g`` the (1,3) tensor and Ricci are unchanged while the
Ricci operator and scalar curvature are divided by ``scale``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError
from .family import Point
from .linalg import inv_spd
from .metric import MetricParams, Tangent, tangent_basis, tangent_coords, unified_eval


def _sym2(a, b):
    """``a (.) b = a b^T + b a^T``."""
    return np.outer(a, b) + np.outer(b, a)


def _k(mp: MetricParams, n: int) -> float:
    mp.require_nondegenerate(n)
    return mp.alpha * mp.beta / (1.0 + 2.0 * n * mp.alpha)


def _riemann_half(be, k, D, Di, a, b, c):
    """Terms of ``R(a, b)c`` that change sign under ``a <-> b``: ``R = h(a, b) - h(b, a)``."""
    X, x = a.X, a.x
    Y, y = b.X, b.x
    Z, z = c.X, c.x
    Dz = D @ z
    M = 0.25 * (Z @ Di @ X @ Di @ Y + Y @ Di @ X @ Di @ Z)
    M = M + 0.25 * be * (_sym2(Y @ x, Dz) + _sym2(D @ y, Z @ x))
    M = M + k * (float((X @ y) @ z) + float(x @ Z @ y)) * D
    v = 0.25 * (Di @ (Y @ Di @ X) @ z + Di @ Z @ Di @ (X @ y))
    v = v + 0.25 * be * (_sym2(z, x) @ D @ y)
    v = v + k * float(y @ Dz) * x
    return M, v


def riemann(mp: MetricParams, pt: Point, a: Tangent, b: Tangent, c: Tangent) -> Tangent:
    """Riemann tensor ``R(a, b)c`` in closed form.

    Evaluated as the difference of one expression with ``a`` and ``b``
    swapped, so antisymmetry in the first two slots holds exactly.
    """
    k = _k(mp, pt.n)
    D = pt.D
    Di = inv_spd(D)
    M1, v1 = _riemann_half(mp.beta, k, D, Di, a, b, c)
    M2, v2 = _riemann_half(mp.beta, k, D, Di, b, a, c)
    M = M1 - M2
    return Tangent(0.5 * (M + M.T), v1 - v2)


def ricci(mp: MetricParams, pt: Point, a: Tangent, b: Tangent) -> float:
    """Ricci tensor in closed form (independent of the metric scale)."""
    n = pt.n
    mp.require_nondegenerate(n)
    Di = inv_spd(pt.D)
    A = Di @ a.X
    B = Di @ b.X
    return (
        -0.25 * (n + 1) * float(np.sum(A * B.T))
        + 0.25 * float(np.trace(A)) * float(np.trace(B))
        - mp.beta / (2.0 * (1.0 + 2.0 * n * mp.alpha)) * float(a.x @ pt.D @ b.x)
    )


def ricci_operator(mp: MetricParams, pt: Point, a: Tangent) -> Tangent:
    """Ricci operator: the tangent ``r`` with ``g(r, b) = ricci(a, b)`` for every ``b``."""
    n = pt.n
    mp.require_nondegenerate(n)
    al = mp.alpha
    Di = inv_spd(pt.D)
    tr = float(np.trace(Di @ a.X))
    M = -0.5 * (n + 1) * a.X + (1.0 + 2.0 * (n + 1) * al) / (2.0 * (1.0 + 2.0 * n * al)) * tr * pt.D
    v = -a.x / (2.0 * (1.0 + 2.0 * n * al))
    return Tangent(M / mp.scale, v / mp.scale)


def scalar_full(mp: MetricParams, n: int) -> float:
    """Scalar curvature of the full (D, u) manifold; constant in the point."""
    mp.require_nondegenerate(n)
    al = mp.alpha
    val = -n * (n + 1) * (2.0 * (n + 2) * (n - 1) * al + n + 1) / (4.0 * (1.0 + 2.0 * n * al))
    return val / mp.scale


def scalar_special(mp: MetricParams, n: int) -> float:
    """Trace of the Ricci operator over the matrix directions only."""
    mp.require_nondegenerate(n)
    al = mp.alpha
    val = -n * (2.0 * (n - 1) * (n + 1) * (n + 2) * al + n * n + 2 * n - 1) / (4.0 * (1.0 + 2.0 * n * al))
    return val / mp.scale


def fisher_scalar_extended(n: int, p: float) -> float:
    """Scalar curvature of the Fisher metric on the p-Gaussian family, ``n/(n+2) < p < 2``."""
    if not (n / (n + 2.0) < p < 2.0):
        raise DomainError(f"p={p} outside the open interval ({n / (n + 2.0)}, 2)")
    return -n * (n + 1) * (2.0 - p) / (4.0 * (2.0 + n * (p - 1.0))) * ((n + 2) * (n - 1) * (p - 1.0) + 2.0 * (n + 1))


def ball_volume(n: int, scal: float, r: float) -> float:
    """Volume of a geodesic ball of radius ``r`` to second order in ``r``."""
    if r < 0.0:
        raise DomainError("radius must be non-negative")
    if r == 0.0:
        return 0.0
    log_unit = 0.5 * n * math.log(math.pi) - gammaln(0.5 * n + 1.0)
    return r ** n * math.exp(log_unit) * (1.0 - scal * r * r / (6.0 * (n + 2)))


# ---------------------------------------------------------------- basis traces


def ricci_by_trace(mp: MetricParams, pt: Point, b: Tangent, c: Tangent) -> float:
    """Ricci tensor as the trace of ``a -> R(a, b)c`` over the coordinate basis."""
    return float(sum(tangent_coords(riemann(mp, pt, e, b, c))[i] for i, e in enumerate(tangent_basis(pt.n))))


def ricci_operator_matrix(mp: MetricParams, pt: Point) -> np.ndarray:
    """Matrix of the Ricci operator in the coordinate basis (columns are images)."""
    basis = tangent_basis(pt.n)
    return np.column_stack([tangent_coords(ricci_operator(mp, pt, e)) for e in basis])


def scalar_by_trace(mp: MetricParams, pt: Point, special: bool = False) -> float:
    """Trace of the Ricci operator over all basis directions, or matrix directions only."""
    R = ricci_operator_matrix(mp, pt)
    m = pt.n * (pt.n + 1) // 2 if special else R.shape[0]
    return float(np.trace(R[:m, :m]))


def metric_contracted_scalar(mp: MetricParams, pt: Point) -> float:
    """``G^{bc} Ric_bc`` from the Ricci tensor and the metric matrix."""
    basis = tangent_basis(pt.n)
    G = np.array([[unified_eval(mp, pt, e, f) for f in basis] for e in basis])
    Ric = np.array([[ricci(mp, pt, e, f) for f in basis] for e in basis])
    return float(np.sum(np.linalg.inv(G) * Ric))


@dataclass(frozen=True)
class CurvatureReport:
    point: Point
    mp: MetricParams
    scalar: float
    ricci_eigenvalues: tuple
    method: str

    def to_json(self) -> dict:
        return {
            "scalar": self.scalar,
            "ricci_eigenvalues": list(self.ricci_eigenvalues),
            "method": self.method,
            "alpha": self.mp.alpha,
            "beta": self.mp.beta,
            "scale": self.mp.scale,
        }


def curvature_report(mp: MetricParams, pt: Point, method: str = "closed-form", h: float = 1e-4) -> CurvatureReport:
    """Scalar curvature and Ricci-operator spectrum at ``pt``.

    ``method="finite-difference"`` derives both from chart finite differences of
    the metric instead of the closed forms.
    """
    n = pt.n
    if method == "closed-form":
        scal = scalar_full(mp, n)
        R = ricci_operator_matrix(mp, pt)
    elif method == "finite-difference":
        from .oracle import Chart, fd_ricci_operator

        chart = Chart(n)
        R = fd_ricci_operator(mp, chart, chart.to_coords(pt), h)
        scal = float(np.trace(R))
    else:
        raise DomainError(f"unknown curvature method {method!r}")
    eig = np.sort(np.linalg.eigvals(R).real)
    return CurvatureReport(pt, mp, float(scal), tuple(float(e) for e in eig), method)
