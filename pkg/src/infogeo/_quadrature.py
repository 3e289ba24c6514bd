"""Mapped trapezoid grids over the support of a family member (n <= 2).

Nodes are laid out in whitened coordinates ``y`` with ``a Q = |y|^2``
(``Q = |y|^2`` for the Gaussian member) and then mapped back through
``x = u + L^-T y / c``, ``D = L L^T``.  The radial variable is reparametrized
so that the integrands decay exponentially in the grid variable, which makes
the plain trapezoid rule converge geometrically:

* compact support: ``y = tanh(w)`` (n=1) or ``rho = (1 + tanh w)/2`` (n=2),
* unbounded support: ``y = sinh(w)`` (n=1) or ``rho = exp(w)`` (n=2).

Level 1 doubles the resolution and pushes the truncation further out, so
``|level1 - level0|`` serves as an error estimate and exposes integrals that
diverge at the support edge or in the tails.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

DEFAULT_RESOLUTION = {1: 2001, 2: 301}
# distance 1 - |y|^2 to the support edge at which compact grids stop
EDGE_MARGIN = (1e-8, 1e-14)
# relative density level at which unbounded grids stop
TAIL_CUTOFF = (1e-14, 1e-28)
RHO_MIN = (1e-8, 1e-16)


def _tail_radius(n: int, p: float, eps: float) -> float:
    if p == 1.0:
        return math.sqrt(2.0 * math.log(1.0 / eps))
    m = 1.0 / (1.0 - p)
    return math.sqrt(eps ** (-1.0 / m) - 1.0)


def grid(n: int, p: float, D: np.ndarray, u: np.ndarray, level: int = 0, resolution: int | None = None):
    """Nodes ``x`` of shape (N, n) and weights of shape (N,) for ``int g(x) dx``."""
    if n > 2:
        raise DomainError(f"grid quadrature supports n <= 2, got n={n}")
    if level not in (0, 1):
        raise DomainError("grid level must be 0 or 1")
    res = DEFAULT_RESOLUTION[n] if resolution is None else int(resolution)
    if res < 3:
        raise DomainError("grid resolution must be at least 3")
    if p == 1.0:
        c = 1.0
    else:
        c = math.sqrt(abs(p - 1.0) / (2.0 * p - n * (1.0 - p)))
    L = np.linalg.cholesky(D)
    jac = 1.0 / (c ** n * float(np.prod(np.diag(L))))
    Linv_T = np.linalg.inv(L).T

    if n == 1:
        N = res if level == 0 else 2 * res - 1
        if p > 1.0:
            W = math.atanh(1.0 - EDGE_MARGIN[level])
            w, h = np.linspace(-W, W, N, retstep=True)
            y = np.tanh(w)
            dy = 1.0 / np.cosh(w) ** 2
        else:
            W = math.asinh(_tail_radius(n, p, TAIL_CUTOFF[level]))
            w, h = np.linspace(-W, W, N, retstep=True)
            y = np.sinh(w)
            dy = np.cosh(w)
        wt = h * dy
        wt[0] *= 0.5
        wt[-1] *= 0.5
        Y = y[:, None]
    else:
        N = res if level == 0 else 2 * res - 1
        M = res if level == 0 else 2 * res
        if p > 1.0:
            w_lo = math.atanh(2.0 * RHO_MIN[level] - 1.0)
            w_hi = math.atanh(1.0 - EDGE_MARGIN[level])
            w, h = np.linspace(w_lo, w_hi, N, retstep=True)
            rho = 0.5 * (1.0 + np.tanh(w))
            drho = 0.5 / np.cosh(w) ** 2
        else:
            w_lo = math.log(RHO_MIN[level])
            w_hi = math.log(_tail_radius(n, p, TAIL_CUTOFF[level]))
            w, h = np.linspace(w_lo, w_hi, N, retstep=True)
            rho = np.exp(w)
            drho = rho
        wr = h * rho * drho
        wr[0] *= 0.5
        wr[-1] *= 0.5
        theta = 2.0 * math.pi * np.arange(M) / M
        R, T = np.meshgrid(rho, theta, indexing="ij")
        Y = np.stack([(R * np.cos(T)).ravel(), (R * np.sin(T)).ravel()], axis=1)
        wt = np.repeat(wr * (2.0 * math.pi / M), M)
    x = np.asarray(u, dtype=float) + (Y @ Linv_T.T) / c
    return x, wt * jac
