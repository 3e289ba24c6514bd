"""The p-Gaussian family: support, density, normalization, entropies, sampling.

A member is selected by ``FamilyParams(n, p)`` with ``p > n/(n+2)`` and
located by a :class:`Point` ``(D, u)``, where ``D`` is the inverse covariance
and ``u`` the mean.  Writing ``Q = <x-u, D(x-u)>`` the density is

* ``p > 1``: ``A sqrt(det D) (1 - a Q)_+^(1/(p-1))``, compact support,
* ``p < 1``: ``A sqrt(det D) (1 + a Q)^(-1/(1-p))``, power-law tails,
* ``p = 1``: the Gaussian ``N(u, D^-1)``,

with ``a = |1-p| / (2p - n(1-p))``.  Every constant is computed in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import digamma, gammaln

from .errors import DomainError, NumericalError
from .linalg import as_spd, eig_sym, invsqrt_spd, logdet_spd

LOG_PI = math.log(math.pi)
LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class FamilyParams:
    n: int
    p: float

    def __post_init__(self):
        n, p = self.n, self.p
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise DomainError(f"dimension must be a positive integer, got {n!r}")
        if not math.isfinite(p):
            raise DomainError(f"order p must be finite, got {p!r}")
        if not p > n / (n + 2.0):
            raise DomainError(f"order p={p} must exceed n/(n+2)={n / (n + 2.0)}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "p", float(p))

    @property
    def is_gaussian(self) -> bool:
        return self.p == 1.0

    @property
    def exponent(self) -> float:
        """``k = 1/(p-1)`` for compact members, ``m = 1/(1-p)`` for heavy-tailed ones."""
        if self.p == 1.0:
            return math.inf
        return 1.0 / abs(self.p - 1.0)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Point:
    """Parameter pair ``(D, u)``: inverse covariance and mean.

    ``u`` defaults to the zero vector (the zero-mean slice).
    """

    D: np.ndarray
    u: np.ndarray = field(default=None)

    def __post_init__(self):
        D = np.array(self.D, dtype=float)
        if D.ndim == 0:
            D = D.reshape(1, 1)
        D = as_spd(D)
        n = D.shape[0]
        u = np.zeros(n) if self.u is None else np.array(self.u, dtype=float).reshape(-1)
        if u.shape != (n,):
            raise DomainError(f"mean has shape {u.shape}, expected ({n},)")
        if not np.all(np.isfinite(u)):
            raise DomainError("mean has non-finite entries")
        object.__setattr__(self, "D", _frozen(D))
        object.__setattr__(self, "u", _frozen(u))

    @property
    def n(self) -> int:
        return self.D.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return np.array_equal(self.D, other.D) and np.array_equal(self.u, other.u)

    def __hash__(self):
        return hash((self.D.tobytes(), self.u.tobytes()))

    def __repr__(self):
        return f"Point(D={self.D.tolist()}, u={self.u.tolist()})"


@dataclass(frozen=True)
class EntropyValue:
    value: float
    q: float
    method: str = "closed-form"

    def __float__(self):
        return float(self.value)


def _check_dims(fp: FamilyParams, pt: Point):
    if pt.n != fp.n:
        raise DomainError(f"point has dimension {pt.n}, family has n={fp.n}")


def _as_spd(D, fp: FamilyParams) -> np.ndarray:
    D = np.array(D, dtype=float)
    if D.ndim == 0:
        D = D.reshape(1, 1)
    D = as_spd(D)
    if D.shape[0] != fp.n:
        raise DomainError(f"matrix has dimension {D.shape[0]}, family has n={fp.n}")
    return D


def support_scale(fp: FamilyParams) -> float:
    """Coefficient ``a`` of the quadratic form; 0 marks the Gaussian member."""
    n, p = fp.n, fp.p
    if p == 1.0:
        return 0.0
    return abs(p - 1.0) / (2.0 * p - n * (1.0 - p))


def _quadratic(pt: Point, x) -> np.ndarray:
    n = pt.n
    x = np.asarray(x, dtype=float)
    if n == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    if x.shape[-1] != n:
        raise DomainError(f"evaluation point has trailing dimension {x.shape[-1]}, expected {n}")
    d = x - pt.u
    return np.einsum("...i,ij,...j->...", d, pt.D, d)


def in_support(fp: FamilyParams, pt: Point, x):
    """True where ``x`` lies in the support of the density."""
    _check_dims(fp, pt)
    Q = _quadratic(pt, x)
    if fp.p > 1.0:
        res = 1.0 - support_scale(fp) * Q >= 0.0
    else:
        res = np.ones_like(Q, dtype=bool)
    return bool(res) if np.ndim(res) == 0 else res


def log_normalization_constant(fp: FamilyParams) -> float:
    n, p = fp.n, fp.p
    if p == 1.0:
        return -0.5 * n * LOG_2PI
    a = support_scale(fp)
    if p > 1.0:
        k = 1.0 / (p - 1.0)
        g = gammaln(k + 1.0 + 0.5 * n) - gammaln(k + 1.0)
    else:
        m = 1.0 / (1.0 - p)
        g = gammaln(m) - gammaln(m - 0.5 * n)
    val = 0.5 * n * (math.log(a) - LOG_PI) + g
    if not math.isfinite(val):
        raise NumericalError(f"normalization constant out of range for {fp}")
    return float(val)


def normalization_constant(fp: FamilyParams) -> float:
    """``A_{n,p}``, so that ``A sqrt(det D)`` times the shape integrates to one."""
    val = math.exp(log_normalization_constant(fp))
    if not (math.isfinite(val) and val > 0.0):
        raise NumericalError(f"normalization constant out of range for {fp}")
    return val


def log_density(fp: FamilyParams, pt: Point, x):
    """Natural log of the density; ``-inf`` outside the support."""
    _check_dims(fp, pt)
    Q = _quadratic(pt, x)
    base = log_normalization_constant(fp) + 0.5 * logdet_spd(pt.D)
    p = fp.p
    if p == 1.0:
        out = base - 0.5 * Q
    elif p > 1.0:
        s = 1.0 - support_scale(fp) * Q
        with np.errstate(divide="ignore"):
            out = np.where(s > 0.0, base + np.log(np.where(s > 0.0, s, 1.0)) / (p - 1.0), -np.inf)
    else:
        out = base - np.log1p(support_scale(fp) * Q) / (1.0 - p)
    return float(out) if np.ndim(out) == 0 else out


def density(fp: FamilyParams, pt: Point, x):
    """Density ``f_p(D, u, x)``; vectorized over leading axes of ``x``."""
    out = np.exp(log_density(fp, pt, x))
    return float(out) if np.ndim(out) == 0 else out


def power_integral_bound(fp: FamilyParams) -> float:
    """Exclusive lower bound on ``q`` for ``int f^q`` to be finite."""
    if fp.p < 1.0:
        return 0.5 * fp.n * (1.0 - fp.p)
    return 0.0


def _check_q(fp: FamilyParams, q: float):
    q = float(q)
    lo = power_integral_bound(fp)
    # the boundary itself is excluded, allowing for rounding in n(1-p)/2
    if not (math.isfinite(q) and q > lo * (1.0 + 1e-12)):
        raise DomainError(f"integral of f^q diverges: need q > {lo} for {fp}, got q={q}")
    return q


def log_density_power_integral(fp: FamilyParams, D, q: float) -> float:
    q = _check_q(fp, q)
    D = _as_spd(D, fp)
    n, p = fp.n, fp.p
    ld = logdet_spd(D)
    if p == 1.0:
        return -0.5 * q * n * LOG_2PI + 0.5 * n * (LOG_2PI - math.log(q)) + 0.5 * (q - 1.0) * ld
    a = support_scale(fp)
    if p > 1.0:
        k = 1.0 / (p - 1.0)
        ratio = gammaln(q * k + 1.0) - gammaln(q * k + 1.0 + 0.5 * n)
    else:
        m = 1.0 / (1.0 - p)
        ratio = gammaln(q * m - 0.5 * n) - gammaln(q * m)
    val = q * log_normalization_constant(fp) + 0.5 * n * (LOG_PI - math.log(a)) + ratio + 0.5 * (q - 1.0) * ld
    if not math.isfinite(val):
        raise NumericalError("power integral out of floating-point range")
    return float(val)


def density_power_integral(fp: FamilyParams, D, q: float) -> float:
    """``int f_p(D, u, x)^q dx`` in closed form (independent of ``u``)."""
    val = math.exp(log_density_power_integral(fp, D, q))
    if not math.isfinite(val):
        raise NumericalError("power integral overflows")
    return val


def _reject_q_one(q, name):
    if float(q) == 1.0:
        raise DomainError(f"{name} entropy is undefined at q=1; use shannon_entropy")


def renyi_entropy(fp: FamilyParams, D, q: float) -> EntropyValue:
    """Order-q Renyi entropy ``log(int f^q) / (1-q)`` in nats."""
    _reject_q_one(q, "Renyi")
    q = float(q)
    val = log_density_power_integral(fp, D, q) / (1.0 - q)
    return EntropyValue(val, q, "closed-form")


def tsallis_entropy(fp: FamilyParams, D, q: float) -> EntropyValue:
    """Order-q Tsallis entropy ``(int f^q - 1) / (1-q)``."""
    _reject_q_one(q, "Tsallis")
    q = float(q)
    val = math.expm1(log_density_power_integral(fp, D, q)) / (1.0 - q)
    return EntropyValue(val, q, "closed-form")


def shannon_entropy(fp: FamilyParams, D) -> EntropyValue:
    """Differential entropy ``-int f log f``.

    Uses the moments of ``log(1 -+ aQ)`` under the family, which are
    digamma differences because ``aQ`` is Beta (compact case) or Beta-prime
    (heavy-tailed case) distributed.
    """
    D = _as_spd(D, fp)
    n, p = fp.n, fp.p
    ld = logdet_spd(D)
    if p == 1.0:
        val = 0.5 * n * (LOG_2PI + 1.0) - 0.5 * ld
    elif p > 1.0:
        k = 1.0 / (p - 1.0)
        val = -log_normalization_constant(fp) - 0.5 * ld - k * (digamma(k + 1.0) - digamma(k + 1.0 + 0.5 * n))
    else:
        m = 1.0 / (1.0 - p)
        val = -log_normalization_constant(fp) - 0.5 * ld + m * (digamma(m) - digamma(m - 0.5 * n))
    return EntropyValue(float(val), 1.0, "closed-form")


def sample(fp: FamilyParams, pt: Point, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` i.i.d. samples, shape ``(count, n)``; deterministic in ``seed``.

    The heavy-tailed members are multivariate Student-t laws with
    ``2/(1-p) - n`` degrees of freedom; compact members are drawn by
    rejection from the uniform law on the support ellipsoid.
    """
    _check_dims(fp, pt)
    count = int(count)
    if count < 1:
        raise DomainError("sample count must be at least 1")
    rng = np.random.default_rng(seed)
    n, p = fp.n, fp.p
    W = invsqrt_spd(pt.D)
    if p == 1.0:
        y = rng.standard_normal((count, n))
        return pt.u + y @ W
    a = support_scale(fp)
    if p < 1.0:
        nu = 2.0 / (1.0 - p) - n
        z = rng.standard_normal((count, n))
        chi2 = rng.chisquare(nu, size=count)
        y = z / np.sqrt(a * chi2)[:, None]
        return pt.u + y @ W
    k = 1.0 / (p - 1.0)
    out = np.empty((count, n))
    filled = 0
    while filled < count:
        batch = max(64, 2 * (count - filled))
        z = rng.standard_normal((batch, n))
        r = rng.random(batch) ** (1.0 / n)
        y = z / np.linalg.norm(z, axis=1)[:, None] * r[:, None]
        accept = rng.random(batch) < (1.0 - r * r) ** k
        y = y[accept][: count - filled]
        out[filled : filled + len(y)] = y
        filled += len(y)
    return pt.u + out @ W / math.sqrt(a)


def covariance(pt: Point) -> np.ndarray:
    """Covariance of every family member at ``pt``, namely ``D^-1`` (when finite)."""
    w, Q = eig_sym(pt.D)
    return (Q / w) @ Q.T
