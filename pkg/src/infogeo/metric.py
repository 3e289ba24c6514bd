"""Information metrics on the parameter manifold of (D, u) pairs.

The central object is the two-parameter form

    g(a, b) = scale * ( 1/2 Tr(D^-1 X D^-1 Y) + alpha Tr(D^-1 X) Tr(D^-1 Y) + beta <x, D y> )

for tangents ``a = (X, x)`` and ``b = (Y, y)``.  The Renyi, Fisher,
Calvo-Oller and LMR metrics are all of this shape; the Tsallis form carries a
point-dependent factor and the Kubo-Mori and largest metrics live on the
zero-mean slice only.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from . import _quadrature
from .errors import (
    DegenerateMetricError,
    DomainError,
    FisherNonexistenceError,
    NumericalError,
    StepSizeError,
)
from .family import FamilyParams, Point, log_density, log_density_power_integral, power_integral_bound
from .linalg import Definiteness, as_symmetric, eig_sym, inv_spd, spd_classify, sqrt_spd, sym_basis

DEGENERACY_RTOL = 1e-12


@dataclass(frozen=True)
class MetricParams:
    """Coefficients of the unified metric.

    ``beta = 0`` drops the mean directions entirely and is only accepted
    with ``special=True``, which restricts the metric to the zero-mean slice.
    """

    alpha: float = 0.0
    beta: float = 1.0
    scale: float = 1.0
    special: bool = False

    def __post_init__(self):
        for name in ("alpha", "beta", "scale"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, float(v))
        if not self.scale > 0.0:
            raise DomainError(f"scale must be positive, got {self.scale}")
        if self.beta == 0.0 and not self.special:
            raise DomainError("beta = 0 requires special=True (zero-mean slice)")

    def degenerate_alpha(self, n: int) -> bool:
        crit = -1.0 / (2.0 * n)
        return math.isclose(self.alpha, crit, rel_tol=DEGENERACY_RTOL, abs_tol=1e-15)

    def require_nondegenerate(self, n: int):
        if self.degenerate_alpha(n):
            raise DegenerateMetricError(f"alpha = -1/(2n) = {-1.0 / (2 * n)} makes the metric degenerate")


class Signature(str, enum.Enum):
    RIEMANNIAN = "riemannian"
    SEMI_RIEMANNIAN = "semi-riemannian"
    DEGENERATE = "degenerate"


def signature(mp: MetricParams, n: int) -> Signature:
    if mp.degenerate_alpha(n):
        return Signature.DEGENERATE
    beta_ok = mp.beta > 0.0 or (mp.beta == 0.0 and mp.special)
    if mp.alpha > -1.0 / (2.0 * n) and beta_ok:
        return Signature.RIEMANNIAN
    return Signature.SEMI_RIEMANNIAN


@dataclass(frozen=True, eq=False)
class Tangent:
    """Tangent vector ``(X, x)``: symmetric matrix part and vector part."""

    X: np.ndarray
    x: np.ndarray = field(default=None)

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        if X.ndim == 0:
            X = X.reshape(1, 1)
        X = as_symmetric(X)
        n = X.shape[0]
        x = np.zeros(n) if self.x is None else np.array(self.x, dtype=float).reshape(-1)
        if x.shape != (n,):
            raise DomainError(f"vector part has shape {x.shape}, expected ({n},)")
        if not np.all(np.isfinite(x)):
            raise DomainError("vector part has non-finite entries")
        X.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "x", x)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @classmethod
    def zero(cls, n: int) -> "Tangent":
        return cls(np.zeros((n, n)), np.zeros(n))

    def __add__(self, other: "Tangent") -> "Tangent":
        return Tangent(self.X + other.X, self.x + other.x)

    def __sub__(self, other: "Tangent") -> "Tangent":
        return Tangent(self.X - other.X, self.x - other.x)

    def __neg__(self) -> "Tangent":
        return Tangent(-self.X, -self.x)

    def __mul__(self, c: float) -> "Tangent":
        return Tangent(c * self.X, c * self.x)

    __rmul__ = __mul__

    def __truediv__(self, c: float) -> "Tangent":
        return Tangent(self.X / c, self.x / c)

    def norm_max(self) -> float:
        return float(max(np.max(np.abs(self.X)), np.max(np.abs(self.x), initial=0.0)))

    def __repr__(self):
        return f"Tangent(X={self.X.tolist()}, x={self.x.tolist()})"


def tangent_basis(n: int) -> list[Tangent]:
    """Coordinate tangents: sym_basis(n) on the matrix part, then unit vectors."""
    out = [Tangent(E, np.zeros(n)) for E in sym_basis(n)]
    out += [Tangent(np.zeros((n, n)), np.eye(n)[i]) for i in range(n)]
    return out


def tangent_coords(t: Tangent) -> np.ndarray:
    n = t.n
    iu = np.triu_indices(n, 1)
    return np.concatenate([np.diag(t.X), t.X[iu], t.x])


def tangent_from_coords(v, n: int) -> Tangent:
    v = np.asarray(v, dtype=float)
    k = n * (n + 1) // 2
    X = np.diag(v[:n])
    iu = np.triu_indices(n, 1)
    X[iu] = v[n:k]
    X[(iu[1], iu[0])] = v[n:k]
    return Tangent(X, v[k:])


def _check(pt: Point, *tangents: Tangent):
    for t in tangents:
        if t.n != pt.n:
            raise DomainError(f"tangent of dimension {t.n} at a point of dimension {pt.n}")


def _unified_terms(Di: np.ndarray, D: np.ndarray, a: Tangent, b: Tangent):
    A = Di @ a.X
    B = Di @ b.X
    return 0.5 * float(np.sum(A * B.T)), float(np.trace(A)) * float(np.trace(B)), float(a.x @ D @ b.x)


def unified_eval(mp: MetricParams, pt: Point, a: Tangent, b: Tangent) -> float:
    """Value of the unified metric at ``pt`` on the tangents ``a`` and ``b``."""
    _check(pt, a, b)
    Di = inv_spd(pt.D)
    tr, trtr, vec = _unified_terms(Di, pt.D, a, b)
    return mp.scale * (tr + mp.alpha * trtr + mp.beta * vec)


# ---------------------------------------------------------------- named metrics


@dataclass(frozen=True)
class Renyi:
    name = "renyi"


@dataclass(frozen=True)
class Tsallis:
    p: float
    q: float
    name = "tsallis"


@dataclass(frozen=True)
class Fisher:
    p: float
    name = "fisher"


@dataclass(frozen=True)
class CalvoOller:
    beta: float
    name = "co"


@dataclass(frozen=True)
class LMR:
    name = "lmr"


@dataclass(frozen=True)
class Unified:
    params: MetricParams
    name = "unified"


@dataclass(frozen=True)
class KuboMori:
    name = "km"


@dataclass(frozen=True)
class Largest:
    name = "largest"


MetricSpec = Union[Renyi, Tsallis, Fisher, CalvoOller, LMR, Unified, KuboMori, Largest]


def spec_to_json(spec: MetricSpec) -> dict:
    if isinstance(spec, Tsallis):
        return {"name": "tsallis", "p": spec.p, "q": spec.q}
    if isinstance(spec, Fisher):
        return {"name": "fisher", "p": spec.p}
    if isinstance(spec, CalvoOller):
        return {"name": "co", "beta": spec.beta}
    if isinstance(spec, Unified):
        mp = spec.params
        doc = {"name": "unified", "alpha": mp.alpha, "beta": mp.beta, "scale": mp.scale}
        if mp.special:
            doc["special"] = True
        return doc
    return {"name": spec.name}


def _num(doc: dict, key: str, default=None) -> float:
    if key not in doc:
        if default is None:
            raise DomainError(f"metric spec: missing field '{key}'")
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise DomainError(f"metric spec: field '{key}' must be a number")
    return float(v)


def spec_from_json(doc) -> MetricSpec:
    """Parse a metric spec from a JSON string or an already decoded dict."""
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    if not isinstance(doc, dict) or "name" not in doc:
        raise DomainError("metric spec: expected an object with a 'name' field")
    name = doc["name"]
    if name == "renyi":
        return Renyi()
    if name == "tsallis":
        return Tsallis(_num(doc, "p"), _num(doc, "q"))
    if name == "fisher":
        return Fisher(_num(doc, "p"))
    if name == "co":
        return CalvoOller(_num(doc, "beta"))
    if name == "lmr":
        return LMR()
    if name == "unified":
        mp = MetricParams(_num(doc, "alpha"), _num(doc, "beta"), _num(doc, "scale", 1.0), bool(doc.get("special", False)))
        return Unified(mp)
    if name == "km":
        return KuboMori()
    if name == "largest":
        return Largest()
    raise DomainError(f"metric spec: unknown name {name!r}")


def tsallis_constant(n: int, p: float, q: float) -> float:
    """Prefactor ``A'_{n,p,q}`` of the Tsallis form, i.e. half of int f^q at D = I."""
    fp = FamilyParams(n, p)
    return 0.5 * math.exp(log_density_power_integral(fp, np.eye(n), q))


def _fisher_check(n: int, p: float):
    if p >= 2.0:
        raise FisherNonexistenceError(f"Fisher information does not exist for p={p} >= 2")
    FamilyParams(n, p)


def named_eval(spec: MetricSpec, fpctx: FamilyParams | None, pt: Point, a: Tangent, b: Tangent) -> float:
    """Evaluate a named metric at ``pt``.

    ``fpctx`` is optional; when given, its dimension must match the point.
    Renyi, Tsallis, Kubo-Mori and largest metrics only see the matrix parts.
    """
    _check(pt, a, b)
    n = pt.n
    if fpctx is not None and fpctx.n != n:
        raise DomainError(f"family dimension {fpctx.n} does not match point dimension {n}")
    D = pt.D
    if isinstance(spec, Unified):
        return unified_eval(spec.params, pt, a, b)
    if isinstance(spec, KuboMori):
        return kubo_mori_eval(D, a.X, b.X)
    if isinstance(spec, Largest):
        return largest_eval(D, a.X, b.X)
    Di = inv_spd(D)
    tr, trtr, vec = _unified_terms(Di, D, a, b)
    if isinstance(spec, Renyi):
        return tr
    if isinstance(spec, Tsallis):
        fp = FamilyParams(n, spec.p)
        q = spec.q
        if not q > power_integral_bound(fp):
            raise DomainError(f"Tsallis form undefined: need q > {power_integral_bound(fp)}, got {q}")
        logdet = float(np.sum(np.log(eig_sym(D)[0])))
        factor = tsallis_constant(n, spec.p, q) * math.exp(0.5 * (q - 1.0) * logdet)
        return factor * (2.0 * tr - 0.5 * (q - 1.0) * trtr)
    if isinstance(spec, Fisher):
        p = spec.p
        _fisher_check(n, p)
        return (
            tr / (2.0 - p)
            + (p - 1.0) / (4.0 * (2.0 - p)) * trtr
            + (2.0 + n * (p - 1.0)) / ((2.0 * p + n * (p - 1.0)) * (2.0 - p)) * vec
        )
    if isinstance(spec, CalvoOller):
        return tr + spec.beta * vec
    if isinstance(spec, LMR):
        return 2.0 * tr - trtr / (n + 1.0) + 0.5 * vec
    raise DomainError(f"unknown metric spec {spec!r}")


def as_unified(spec: MetricSpec, n: int) -> MetricParams | None:
    """Unified coefficients reproducing ``spec`` exactly, or None when impossible."""
    if isinstance(spec, Unified):
        return spec.params
    if isinstance(spec, Renyi):
        return MetricParams(0.0, 0.0, 1.0, special=True)
    if isinstance(spec, Tsallis):
        if spec.q == 1.0:
            return MetricParams(0.0, 0.0, 1.0, special=True)
        return None
    if isinstance(spec, Fisher):
        p = spec.p
        _fisher_check(n, p)
        return MetricParams((p - 1.0) / 4.0, (2.0 + n * (p - 1.0)) / (2.0 * p + n * (p - 1.0)), 1.0 / (2.0 - p))
    if isinstance(spec, CalvoOller):
        return MetricParams(0.0, spec.beta, 1.0, special=spec.beta == 0.0)
    if isinstance(spec, LMR):
        return MetricParams(-1.0 / (2.0 * (n + 1)), 0.25, 2.0)
    return None


# ---------------------------------------------------------------- quantum-flavoured metrics


def kubo_mori_eval(D, X, Y) -> float:
    """Kubo-Mori metric: the trace metric integrated along ``D + tI``, ``t >= 0``.

    Evaluated in the eigenbasis of ``D`` with the logarithmic-mean kernel.
    """
    w, Q = eig_sym(D)
    if w[-1] <= 0.0:
        raise DomainError("Kubo-Mori metric needs a positive definite D")
    Xt = Q.T @ np.asarray(X, dtype=float) @ Q
    Yt = Q.T @ np.asarray(Y, dtype=float) @ Q
    li = w[:, None]
    lj = w[None, :]
    r = li / lj - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.where(np.abs(r) > 1e-8, np.log1p(r) / (li - lj), (1.0 - 0.5 * r + r * r / 3.0) / lj)
    return float(np.sum(Xt * Yt.T * k))


def largest_eval(D, X, Y) -> float:
    """Largest metric ``Tr(D^-1 D^1/2 X D^-1 Y D^1/2)``."""
    S = sqrt_spd(D)
    Di = inv_spd(D)
    return float(np.trace(Di @ S @ np.asarray(X, dtype=float) @ Di @ np.asarray(Y, dtype=float) @ S))


# ---------------------------------------------------------------- Csiszar divergences


@dataclass(frozen=True)
class PhiDescriptor:
    """Convex generator ``phi`` of a Csiszar divergence.

    ``of_log_ratio(l)`` must return ``phi(exp(l))``; working in the log ratio
    keeps the near-cancelling values accurate.
    """

    name: str
    of_log_ratio: Callable[[np.ndarray], np.ndarray]
    second_derivative_at_one: float

    def __call__(self, x):
        with np.errstate(divide="ignore"):
            return self.of_log_ratio(np.log(np.asarray(x, dtype=float)))

    @staticmethod
    def alpha_relative(alpha: float) -> "PhiDescriptor":
        if not -1.0 < alpha < 1.0:
            raise DomainError("alpha-relative entropy needs -1 < alpha < 1")
        c = 4.0 / (1.0 - alpha * alpha)
        e = 0.5 * (1.0 + alpha)
        return PhiDescriptor(f"alpha-relative({alpha:g})", lambda l: -c * np.expm1(e * l), 1.0)


KL = PhiDescriptor("kl", lambda l: -l, 1.0)
HELLINGER = PhiDescriptor("hellinger", lambda l: np.expm1(0.5 * l) ** 2, 0.5)


def _divergence_on_nodes(phi: PhiDescriptor, fp, l1, w, pt2, x):
    l2 = log_density(fp, pt2, x)
    with np.errstate(invalid="ignore", over="ignore"):
        vals = np.exp(l1) * phi.of_log_ratio(l2 - l1)
    mask = np.isfinite(l1)
    vals = np.where(mask, vals, 0.0)
    if not np.all(np.isfinite(vals)):
        raise NumericalError(f"{phi.name} divergence integral diverges (perturbed density vanishes on the support)")
    return float(w @ vals)


def csiszar_divergence(phi: PhiDescriptor, fp: FamilyParams, pt1: Point, pt2: Point, resolution=None) -> float:
    """``int f1 phi(f2/f1)`` over the support of ``f1`` (grid quadrature, n <= 2)."""
    x, w = _quadrature.grid(fp.n, fp.p, pt1.D, pt1.u, 0, resolution)
    l1 = log_density(fp, pt1, x)
    return _divergence_on_nodes(phi, fp, l1, w, pt2, x)


def _shift(pt: Point, a: Tangent, t: float) -> Point:
    D = pt.D + t * a.X
    if spd_classify(D, 0.0) is not Definiteness.POSITIVE_DEFINITE:
        raise StepSizeError(f"step {t} leaves the positive definite cone")
    return Point(D, pt.u + t * a.x)


def csiszar_induced_form(phi: PhiDescriptor, fp: FamilyParams, pt: Point, a: Tangent, b: Tangent,
                         h: float = 1e-3, resolution=None) -> float:
    """Mixed second derivative of ``H(f(pt), f(pt + t a + s b))`` at ``t = s = 0``.

    Central differences at steps ``h`` and ``h/2`` combined by one Richardson
    step.  All divergences share the quadrature nodes of ``pt``.
    """
    _check(pt, a, b)
    x, w = _quadrature.grid(fp.n, fp.p, pt.D, pt.u, 0, resolution)
    l1 = log_density(fp, pt, x)

    def mixed(step):
        total = 0.0
        for st, ss, sign in ((1, 1, 1.0), (1, -1, -1.0), (-1, 1, -1.0), (-1, -1, 1.0)):
            pt2 = _shift(_shift(pt, a, st * step), b, ss * step)
            total += sign * _divergence_on_nodes(phi, fp, l1, w, pt2, x)
        return total / (4.0 * step * step)

    f_h = mixed(h)
    f_h2 = mixed(0.5 * h)
    return (4.0 * f_h2 - f_h) / 3.0
