"""Levi-Civita connection, geodesics and Rao distances of the unified metric.

Closed-form geodesic families:

* ``N1``: one-dimensional members, cosh/tanh curves between any two points,
* ``SpecialNormal``: constant mean, ``D0^1/2 exp(t L) D0^1/2``,
* ``Alpha0Pullback``: affine-invariant geodesics of the block embedding
  ``pi_beta`` pulled back to (D, u); exact only while the embedded curve stays
  in the image of ``pi_beta``,
* ``DiagonalFamily``: products of one-dimensional curves rotated by an
  orthogonal ``U``.

General endpoints are handled by shooting on a fixed-step RK4 integrator.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import simpson

from .errors import (
    DomainError,
    EmbeddingError,
    NonConvergenceError,
    NotRiemannianError,
    NotSPDError,
    StepFailure,
)
from .family import Point
from .linalg import (
    Definiteness,
    as_spd,
    eig_sym,
    exp_sym,
    inv_spd,
    inv_sym_unchecked,
    invsqrt_spd,
    log_spd,
    spd_classify,
    sqrt_spd,
)
from .metric import MetricParams, Signature, Tangent, signature, unified_eval

STEPS_PER_UNIT_TIME = 1000
SPD_STEP_TOL = 1e-12


def _connection_coefficient(mp: MetricParams, n: int) -> float:
    mp.require_nondegenerate(n)
    return 2.0 * mp.alpha * mp.beta / (1.0 + 2.0 * n * mp.alpha)


def _gamma_arrays(mp: MetricParams, D, Di, X, x, Y, y):
    n = D.shape[0]
    k = _connection_coefficient(mp, n)
    # both orderings are formed explicitly so the result is symmetric in (a, b) bit for bit
    S = X @ Di @ Y + Y @ Di @ X
    Dx = D @ x
    Dy = D @ y
    xDy = 0.5 * (float(x @ Dy) + float(y @ Dx))
    M = -0.5 * S - 0.5 * mp.beta * (np.outer(Dx, Dy) + np.outer(Dy, Dx)) + k * xDy * D
    v = 0.5 * Di @ (X @ y + Y @ x)
    return 0.5 * (M + M.T), v


def covariant_derivative(mp: MetricParams, pt: Point, a: Tangent, b: Tangent) -> Tangent:
    """Christoffel map ``Gamma_(D,u)(a)(b)`` of the unified metric.

    Symmetric in ``a`` and ``b`` and independent of ``u`` and of the scale.
    """
    if a.n != pt.n or b.n != pt.n:
        raise DomainError("tangent dimension does not match the point")
    M, v = _gamma_arrays(mp, pt.D, inv_spd(pt.D), a.X, a.x, b.X, b.x)
    return Tangent(M, v)


@dataclass(frozen=True)
class GeodesicState:
    pt: Point
    vel: Tangent

    def __post_init__(self):
        if self.vel.n != self.pt.n:
            raise DomainError("velocity dimension does not match the point")


def _accel(mp, D, X, x, k=None):
    """Geodesic acceleration ``-Gamma(v)(v)`` on raw arrays (integrator hot path)."""
    if k is None:
        k = _connection_coefficient(mp, D.shape[0])
    Di = inv_sym_unchecked(D)
    XDX = X @ Di @ X
    Dx = D @ x
    M = 0.5 * (XDX + XDX.T) + mp.beta * (Dx[:, None] * Dx[None, :]) - (k * float(x @ Dx)) * D
    return M, -(Di @ (X @ x))


def geodesic_rhs(mp: MetricParams, s: GeodesicState) -> tuple[Tangent, Tangent]:
    """Right side of the geodesic equation: ``(velocity, -Gamma(velocity)(velocity))``."""
    M, v = _accel(mp, s.pt.D, s.vel.X, s.vel.x)
    return s.vel, Tangent(M, v)


# ---------------------------------------------------------------- traces


@dataclass(frozen=True, eq=False)
class GeodesicTrace:
    times: np.ndarray
    D: np.ndarray   # (T, n, n)
    u: np.ndarray   # (T, n)
    X: np.ndarray   # (T, n, n) velocities
    x: np.ndarray   # (T, n)
    mp: MetricParams | None = None

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or len(t) < 1:
            raise DomainError("trace needs at least one time")
        if np.any(np.diff(t) <= 0.0):
            raise DomainError("trace times must be strictly increasing")
        for name in ("D", "u", "X", "x"):
            if len(getattr(self, name)) != len(t):
                raise DomainError("trace arrays must have equal lengths")
        for name, arr in (("times", t), ("D", self.D), ("u", self.u), ("X", self.X), ("x", self.x)):
            arr = np.array(arr, dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self):
        return len(self.times)

    @property
    def n(self) -> int:
        return self.D.shape[1]

    def state(self, i: int) -> GeodesicState:
        return GeodesicState(Point(self.D[i], self.u[i]), Tangent(self.X[i], self.x[i]))

    @property
    def states(self) -> list[GeodesicState]:
        return [self.state(i) for i in range(len(self))]

    def end_point(self) -> Point:
        return Point(self.D[-1], self.u[-1])

    def header(self) -> list[str]:
        n = self.n
        cols = ["t"]
        cols += [f"D_{i + 1}{j + 1}" for i in range(n) for j in range(i, n)]
        cols += [f"u_{i + 1}" for i in range(n)]
        return cols

    def rows(self) -> np.ndarray:
        n = self.n
        iu = np.triu_indices(n)
        return np.column_stack([self.times, self.D[:, iu[0], iu[1]], self.u])

    def to_csv(self, dest=None) -> str:
        """Write the trace as CSV with 17 significant digits; returns the text."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header())
        for row in self.rows():
            w.writerow(["%.17g" % v for v in row])
        text = buf.getvalue()
        if dest is not None:
            if hasattr(dest, "write"):
                dest.write(text)
            else:
                with open(dest, "w", newline="") as fh:
                    fh.write(text)
        return text


def geodesic_ivp(mp: MetricParams, start: GeodesicState, t_end: float, steps: int | None = None,
                 t_start: float = 0.0) -> GeodesicTrace:
    """Integrate the geodesic equation with classical fixed-step RK4.

    After every step ``D`` must stay positive definite (absolute tolerance
    1e-12); otherwise :class:`StepFailure` is raised carrying the last valid
    time and state.
    """
    span = float(t_end) - float(t_start)
    if not span > 0.0:
        raise DomainError("t_end must exceed the start time")
    if steps is None:
        steps = max(1, int(round(STEPS_PER_UNIT_TIME * span)))
    steps = int(steps)
    if steps < 1:
        raise DomainError("steps must be at least 1")
    n = start.pt.n
    kc = _connection_coefficient(mp, n)
    h = span / steps
    T = steps + 1
    Ds = np.empty((T, n, n))
    us = np.empty((T, n))
    Xs = np.empty((T, n, n))
    xs = np.empty((T, n))
    D, u = np.array(start.pt.D), np.array(start.pt.u)
    X, x = np.array(start.vel.X), np.array(start.vel.x)
    Ds[0], us[0], Xs[0], xs[0] = D, u, X, x
    times = t_start + h * np.arange(T)

    def fail(i, msg):
        last = GeodesicState(Point(Ds[i], us[i]), Tangent(Xs[i], xs[i]))
        raise StepFailure(msg, last_time=float(times[i]), last_state=last)

    for i in range(steps):
        try:
            k1M, k1v = _accel(mp, D, X, x, kc)
            D2, X2, x2 = D + 0.5 * h * X, X + 0.5 * h * k1M, x + 0.5 * h * k1v
            k2M, k2v = _accel(mp, D2, X2, x2, kc)
            D3, X3, x3 = D + 0.5 * h * X2, X + 0.5 * h * k2M, x + 0.5 * h * k2v
            k3M, k3v = _accel(mp, D3, X3, x3, kc)
            D4, X4, x4 = D + h * X3, X + h * k3M, x + h * k3v
            k4M, k4v = _accel(mp, D4, X4, x4, kc)
        except (DomainError, ArithmeticError) as exc:
            fail(i, f"integration broke down after t={times[i]}: {exc}")
        Dn = D + h / 6.0 * (X + 2.0 * X2 + 2.0 * X3 + X4)
        un = u + h / 6.0 * (x + 2.0 * x2 + 2.0 * x3 + x4)
        Xn = X + h / 6.0 * (k1M + 2.0 * k2M + 2.0 * k3M + k4M)
        xn = x + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        Dn = 0.5 * (Dn + Dn.T)
        Xn = 0.5 * (Xn + Xn.T)
        finite = all(np.all(np.isfinite(a)) for a in (Dn, un, Xn, xn))
        if not finite or spd_classify(Dn, SPD_STEP_TOL) is not Definiteness.POSITIVE_DEFINITE:
            fail(i, f"D left the positive definite cone at t={times[i + 1]}")
        D, u, X, x = Dn, un, Xn, xn
        Ds[i + 1], us[i + 1], Xs[i + 1], xs[i + 1] = D, u, X, x
    return GeodesicTrace(times, Ds, us, Xs, xs, mp)


def path_length(mp: MetricParams, trace: GeodesicTrace) -> float:
    """Length ``int sqrt(g(vel, vel)) dt`` along a trace (composite Simpson)."""
    if len(trace) < 2:
        return 0.0
    sq = np.empty(len(trace))
    for i in range(len(trace)):
        st = trace.state(i)
        sq[i] = unified_eval(mp, st.pt, st.vel, st.vel)
    if np.any(sq < -1e-12 * max(1.0, float(np.max(np.abs(sq))))):
        raise NotRiemannianError("negative squared speed along the trace")
    speed = np.sqrt(np.maximum(sq, 0.0))
    return float(simpson(speed, x=trace.times))


# ---------------------------------------------------------------- closed forms


class GeodesicFamily(str, enum.Enum):
    N1 = "n1"
    SPECIAL_NORMAL = "special-normal"
    ALPHA0_PULLBACK = "alpha0-pullback"
    DIAGONAL_FAMILY = "diagonal-family"


@dataclass(frozen=True, eq=False)
class ClosedGeodesic:
    """Closed-form geodesic with evaluators for position and velocity."""

    family: GeodesicFamily
    coefficients: dict
    point_fn: Callable[[float], tuple[np.ndarray, np.ndarray]] = field(repr=False)
    velocity_fn: Callable[[float], tuple[np.ndarray, np.ndarray]] = field(repr=False)

    def point(self, t: float) -> Point:
        D, u = self.point_fn(float(t))
        return Point(D, u)

    def velocity(self, t: float) -> Tangent:
        X, x = self.velocity_fn(float(t))
        return Tangent(X, x)

    def state(self, t: float) -> GeodesicState:
        return GeodesicState(self.point(t), self.velocity(t))

    def trace(self, steps: int = STEPS_PER_UNIT_TIME, t0: float = 0.0, t1: float = 1.0,
              mp: MetricParams | None = None) -> GeodesicTrace:
        times = np.linspace(t0, t1, int(steps) + 1)
        pts = [self.point_fn(t) for t in times]
        vels = [self.velocity_fn(t) for t in times]
        return GeodesicTrace(
            times,
            np.array([p[0] for p in pts]),
            np.array([p[1] for p in pts]),
            np.array([v[0] for v in vels]),
            np.array([v[1] for v in vels]),
            mp,
        )


def _require_riemannian(mp: MetricParams, n: int):
    if mp.beta <= 0.0:
        raise NotRiemannianError(f"beta={mp.beta} does not give a distance")
    if signature(mp, n) is not Signature.RIEMANNIAN:
        raise NotRiemannianError(f"metric {mp} is not Riemannian for n={n}")


def _special_normal_parts(D0, D1):
    S = sqrt_spd(D0)
    Si = invsqrt_spd(D0)
    L = log_spd(Si @ D1 @ Si)
    return S, L


def geodesic_special_normal(D0, D1, u=None) -> ClosedGeodesic:
    """Constant-mean geodesic ``D0^1/2 exp(t log(D0^-1/2 D1 D0^-1/2)) D0^1/2``.

    It is a geodesic of every unified metric, whatever ``alpha`` and ``beta``.
    """
    D0 = as_spd(np.atleast_2d(np.asarray(D0, dtype=float)))
    D1 = as_spd(np.atleast_2d(np.asarray(D1, dtype=float)))
    if D0.shape != D1.shape:
        raise DomainError("endpoint matrices differ in size")
    n = D0.shape[0]
    u = np.zeros(n) if u is None else np.asarray(u, dtype=float).reshape(n)
    S, L = _special_normal_parts(D0, D1)
    zero = np.zeros(n)

    def point_fn(t):
        return S @ exp_sym(t * L) @ S, u

    def velocity_fn(t):
        V = S @ L @ exp_sym(t * L) @ S
        return 0.5 * (V + V.T), zero

    return ClosedGeodesic(GeodesicFamily.SPECIAL_NORMAL, {"D0": D0, "log": L, "u": u}, point_fn, velocity_fn)


def distance_special_normal(mp: MetricParams, D0, D1) -> float:
    """Distance between two constant-mean points ``(D0, u)`` and ``(D1, u)``."""
    D0 = as_spd(np.atleast_2d(np.asarray(D0, dtype=float)))
    D1 = as_spd(np.atleast_2d(np.asarray(D1, dtype=float)))
    n = D0.shape[0]
    if signature(mp, n) is not Signature.RIEMANNIAN:
        raise NotRiemannianError(f"metric {mp} is not Riemannian for n={n}")
    Si = invsqrt_spd(D0)
    lam, _ = eig_sym(Si @ D1 @ Si)
    logs = np.log(lam)
    sq = 0.5 * float(logs @ logs) + mp.alpha * float(np.sum(logs)) ** 2
    return math.sqrt(mp.scale * max(sq, 0.0))


def geodesic_n1(mp: MetricParams, p0: Point, p1: Point) -> tuple[ClosedGeodesic, float]:
    """Geodesic and distance between two points of the one-dimensional manifold.

    For ``u1 != u0`` the curve is ``((2/a^2) cosh^2(bt+c), a k tanh(bt+c) + d)``
    with ``k = sqrt((1+2 alpha)/beta)``; ``u1 < u0`` is solved in the mirror
    image ``u -> -u``.  Equal means reduce to the constant-mean geodesic.
    """
    if p0.n != 1 or p1.n != 1:
        raise DomainError("geodesic_n1 needs one-dimensional points")
    _require_riemannian(mp, 1)
    al, be = mp.alpha, mp.beta
    D0, D1 = float(p0.D[0, 0]), float(p1.D[0, 0])
    u0, u1 = float(p0.u[0]), float(p1.u[0])
    if u1 == u0:
        geo = geodesic_special_normal(p0.D, p1.D, p0.u)
        dist = math.sqrt(mp.scale * (0.5 + al)) * abs(math.log(D1 / D0))
        return geo, dist
    sign = 1.0 if u1 > u0 else -1.0
    v0, v1 = sign * u0, sign * u1
    x = (v1 - v0) * math.sqrt(D0 * be / (2.0 + 4.0 * al))
    y = math.sqrt(D1 / D0)
    B = x * x * y * y + 1.0 - y * y
    root = math.sqrt(B * B + 4.0 * x * x * y ** 4)
    num = 4.0 * x * x * y ** 4 / (root + B) if B > 0.0 else root - B
    c = math.log(num / (2.0 * x * y * y))
    a = math.sqrt(2.0 / D0) * math.cosh(c)
    b = -math.log(y * (1.0 - x * math.exp(c)))
    k = math.sqrt((1.0 + 2.0 * al) / be)
    d = v0 - a * k * math.tanh(c)
    dist = math.sqrt(mp.scale * (2.0 + 4.0 * al)) * abs(b)

    def point_fn(t):
        z = b * t + c
        return np.array([[2.0 / (a * a) * math.cosh(z) ** 2]]), np.array([sign * (a * k * math.tanh(z) + d)])

    def velocity_fn(t):
        z = b * t + c
        return (np.array([[2.0 * b / (a * a) * math.sinh(2.0 * z)]]),
                np.array([sign * a * k * b / math.cosh(z) ** 2]))

    coeffs = {"a": a, "b": b, "c": c, "d": d, "reflected": sign < 0, "alpha": al, "beta": be}
    return ClosedGeodesic(GeodesicFamily.N1, coeffs, point_fn, velocity_fn), dist


def embed_pi_beta(beta: float, pt: Point) -> np.ndarray:
    """Block embedding ``[[D^-1 + beta u u^T, beta u], [beta u^T, beta]]`` into (n+1)x(n+1) SPD matrices."""
    if not beta > 0.0:
        raise DomainError(f"embedding needs beta > 0, got {beta}")
    n = pt.n
    u = pt.u
    S = np.empty((n + 1, n + 1))
    S[:n, :n] = inv_spd(pt.D) + beta * np.outer(u, u)
    S[:n, n] = S[n, :n] = beta * u
    S[n, n] = beta
    try:
        return as_spd(S)
    except NotSPDError as exc:
        raise EmbeddingError(f"embedded matrix is not positive definite: {exc}") from None


def unembed_pi_beta(S, beta: float | None = None, rtol: float = 1e-8) -> Point:
    """Inverse of :func:`embed_pi_beta`; checks the corner entry when ``beta`` is given."""
    S = np.asarray(S, dtype=float)
    n = S.shape[0] - 1
    b = float(S[n, n])
    if beta is not None and abs(b - beta) > rtol * abs(beta):
        raise EmbeddingError(f"matrix corner {b} differs from beta={beta}: not in the image of the embedding")
    if not b > 0.0:
        raise EmbeddingError("matrix corner must be positive")
    u = S[:n, n] / b
    K = S[:n, :n] - b * np.outer(u, u)
    try:
        D = inv_spd(as_spd(0.5 * (K + K.T)))
        return Point(D, u)
    except (NotSPDError, DomainError) as exc:
        raise EmbeddingError(f"cannot invert the embedding: {exc}") from None


def _affine_parts(beta, p0, p1):
    S0 = embed_pi_beta(beta, p0)
    S1 = embed_pi_beta(beta, p1)
    R = sqrt_spd(S0)
    Ri = invsqrt_spd(S0)
    L = log_spd(Ri @ S1 @ Ri)
    return S0, R, L


def distance_alpha0(beta: float, p0: Point, p1: Point) -> float:
    """Affine-invariant distance ``sqrt(1/2 Tr log^2(S0^-1/2 S1 S0^-1/2))`` of the embedded endpoints."""
    S0 = embed_pi_beta(beta, p0)
    S1 = embed_pi_beta(beta, p1)
    Ri = invsqrt_spd(S0)
    lam, _ = eig_sym(Ri @ S1 @ Ri)
    logs = np.log(lam)
    return math.sqrt(0.5 * float(logs @ logs))


ALPHA0_SAMPLES = 33


def geodesic_alpha0(beta: float, p0: Point, p1: Point, rtol: float = 1e-8) -> tuple[ClosedGeodesic, float]:
    """Pull back the affine-invariant geodesic between the embedded endpoints.

    The embedded curve is checked at 33 equally spaced times; if its corner
    entry drifts away from ``beta`` the curve has left the image of the
    embedding and :class:`EmbeddingError` is raised.
    """
    if p0.n != p1.n:
        raise DomainError("endpoints differ in dimension")
    n = p0.n
    S0, R, L = _affine_parts(beta, p0, p1)
    worst = 0.0
    for t in np.linspace(0.0, 1.0, ALPHA0_SAMPLES):
        G = R @ exp_sym(t * L) @ R
        worst = max(worst, abs(G[n, n] - beta) / beta)
    if worst > rtol:
        raise EmbeddingError(
            f"embedded geodesic leaves the image of the embedding (corner drift {worst:.3e} relative)"
        )

    def point_fn(t):
        P = unembed_pi_beta(R @ exp_sym(t * L) @ R, beta, rtol)
        return P.D, P.u

    def velocity_fn(t):
        E = exp_sym(t * L)
        G = R @ E @ R
        Gd = R @ L @ E @ R
        u = G[:n, n] / beta
        ud = Gd[:n, n] / beta
        K = G[:n, :n] - beta * np.outer(u, u)
        Kd = Gd[:n, :n] - beta * (np.outer(ud, u) + np.outer(u, ud))
        D = inv_spd(0.5 * (K + K.T))
        Dd = -D @ Kd @ D
        return 0.5 * (Dd + Dd.T), ud

    geo = ClosedGeodesic(GeodesicFamily.ALPHA0_PULLBACK, {"S0": S0, "log": L, "beta": beta}, point_fn, velocity_fn)
    return geo, distance_alpha0(beta, p0, p1)


def _diagonal_check(U, A, B, C, tol=1e-10):
    n = len(A)
    if U.shape != (n, n) or B.shape != (n, n) or C.shape != (n, n):
        raise DomainError("U, B, C must be n x n for an n-vector A")
    if np.max(np.abs(U.T @ U - np.eye(n))) > tol:
        raise DomainError("U must be orthogonal")
    if np.all(A == 0.0) or np.max(np.abs(A - A[0])) > tol * max(1.0, abs(A[0])):
        raise DomainError("A must be a nonzero vector with equal components")
    if np.max(np.abs(U @ A - A)) > tol * max(1.0, float(np.max(np.abs(A)))):
        raise DomainError("U must fix A")
    for name, M in (("B", B), ("C", C)):
        if np.any(M - np.diag(np.diag(M))):
            raise DomainError(f"{name} must be diagonal")


def geodesic_diagonal_family(beta: float, U, A, B, C, offset=None) -> ClosedGeodesic:
    """Geodesic ``((2/|A|^2) U cosh^2(Bt+C) U^T, sqrt(n/beta) U tanh(Bt+C) A + offset)`` of the alpha = 0 metric."""
    if not beta > 0.0:
        raise DomainError(f"beta must be positive, got {beta}")
    A = np.asarray(A, dtype=float).reshape(-1)
    n = len(A)
    U = np.asarray(U, dtype=float).reshape(n, n)
    B = np.asarray(B, dtype=float).reshape(n, n)
    C = np.asarray(C, dtype=float).reshape(n, n)
    offset = np.zeros(n) if offset is None else np.asarray(offset, dtype=float).reshape(n)
    _diagonal_check(U, A, B, C)
    bd, cd = np.diag(B).copy(), np.diag(C).copy()
    s = 2.0 / float(A @ A)
    k = math.sqrt(n / beta)

    def point_fn(t):
        z = bd * t + cd
        return s * (U * np.cosh(z) ** 2) @ U.T, k * U @ (np.tanh(z) * A) + offset

    def velocity_fn(t):
        z = bd * t + cd
        return s * (U * (bd * np.sinh(2.0 * z))) @ U.T, k * U @ (bd / np.cosh(z) ** 2 * A)

    coeffs = {"U": U, "A": A, "B": B, "C": C, "offset": offset, "beta": beta}
    return ClosedGeodesic(GeodesicFamily.DIAGONAL_FAMILY, coeffs, point_fn, velocity_fn)


def diagonal_family_distance(B, t0: float, t1: float) -> float:
    """Distance ``|t1 - t0| sqrt(2 Tr B^2)`` between two points of a diagonal-family geodesic."""
    B = np.asarray(B, dtype=float)
    return abs(t1 - t0) * math.sqrt(2.0 * float(np.sum(np.diag(B) ** 2)))


# ---------------------------------------------------------------- shooting


def _chart(D, u) -> np.ndarray:
    n = len(u)
    iu = np.triu_indices(n, 1)
    return np.concatenate([np.diag(D), D[iu], u])


def _tangent_from(v, n) -> Tangent:
    k = n * (n + 1) // 2
    X = np.diag(v[:n])
    iu = np.triu_indices(n, 1)
    X[iu] = v[n:k]
    X[(iu[1], iu[0])] = v[n:k]
    return Tangent(X, v[k:])


def _initial_guess(mp, p0, p1):
    n = p0.n
    if np.array_equal(p0.u, p1.u):
        return geodesic_special_normal(p0.D, p1.D, p0.u).velocity(0.0)
    if n == 1 and mp.beta > 0.0:
        geo, _ = geodesic_n1(MetricParams(0.0, mp.beta), p0, p1)
        return geo.velocity(0.0)
    return Tangent(p1.D - p0.D, p1.u - p0.u)


def _shoot_end(mp, p0, v, n, steps):
    tr = geodesic_ivp(mp, GeodesicState(p0, _tangent_from(v, n)), 1.0, steps)
    return _chart(tr.D[-1], tr.u[-1])


def geodesic_bvp_shoot(mp: MetricParams, p0: Point, p1: Point, tol: float = 1e-10,
                       steps: int = STEPS_PER_UNIT_TIME, max_iter: int = 50,
                       init: Tangent | None = None) -> GeodesicState:
    """Initial velocity at ``p0`` of a geodesic reaching ``p1`` at ``t = 1``.

    Damped Newton on the chart mismatch of the RK4 end point with a
    forward-difference Jacobian.  ``init`` overrides the starting velocity
    (default: a closed-form guess where one applies, else the chart difference).  Failure to converge raises
    :class:`NonConvergenceError`; it does not prove that no geodesic exists.
    """
    if p0.n != p1.n:
        raise DomainError("endpoints differ in dimension")
    n = p0.n
    _require_riemannian(mp, n)
    target = _chart(p1.D, p1.u)
    if np.array_equal(_chart(p0.D, p0.u), target):
        return GeodesicState(p0, Tangent.zero(n))
    g = _initial_guess(mp, p0, p1) if init is None else init
    v = _chart(g.X, g.x)

    coarse = max(100, steps // 10)

    def residual(w, nsteps=steps):
        return _shoot_end(mp, p0, w, n, nsteps) - target

    try:
        r = residual(v)
    except StepFailure:
        v = _chart(p1.D - p0.D, p1.u - p0.u)
        r = residual(v)
    err = float(np.max(np.abs(r)))
    for _ in range(max_iter):
        if err <= tol:
            return GeodesicState(p0, _tangent_from(v, n))
        # the Jacobian only steers Newton, so a coarser integration suffices
        dim = len(v)
        J = np.empty((dim, dim))
        r_coarse = residual(v, coarse)
        for j in range(dim):
            hj = 1e-7 * max(1.0, abs(v[j]))
            e = np.zeros(dim)
            e[j] = hj
            J[:, j] = (residual(v + e, coarse) - r_coarse) / hj
        step = np.linalg.solve(J, -r)
        lam = 1.0
        while lam > 1e-6:
            cand = v + lam * step
            try:
                rc = residual(cand)
            except StepFailure:
                lam *= 0.5
                continue
            ec = float(np.max(np.abs(rc)))
            if ec < err:
                v, r, err = cand, rc, ec
                break
            lam *= 0.5
        else:
            break
    if err <= tol:
        return GeodesicState(p0, _tangent_from(v, n))
    raise NonConvergenceError(f"shooting did not converge (endpoint mismatch {err:.3e})")


def shooting_distance(mp: MetricParams, p0: Point, p1: Point, **kw) -> float:
    """Length of the shooting geodesic, ``sqrt(g(v, v))`` for the initial velocity ``v``."""
    st = geodesic_bvp_shoot(mp, p0, p1, **kw)
    return math.sqrt(max(unified_eval(mp, st.pt, st.vel, st.vel), 0.0))
