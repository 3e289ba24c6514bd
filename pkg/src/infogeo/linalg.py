"""Symmetric and SPD matrix kernel.

All matrix functions go through one spectral path: a cyclic Jacobi
eigensolver followed by ``Q f(L) Q^T``.  The matrices handled by this
library are small (n <= 16), so a deterministic Jacobi sweep is both fast
enough and reproducible bit for bit.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import DomainError, NotSPDError, NumericalError

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
SPD_RTOL = 1e-10


class Definiteness(str, enum.Enum):
    POSITIVE_DEFINITE = "positive-definite"
    POSITIVE_SEMIDEFINITE = "positive-semidefinite"
    INDEFINITE = "indefinite"


def as_symmetric(S, rtol: float = 1e-12) -> np.ndarray:
    """Return ``S`` as a float array, checking symmetry and finiteness.

    The result is exactly symmetric: the upper triangle is mirrored.
    """
    A = np.array(S, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DomainError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    if np.max(np.abs(A - A.T), initial=0.0) > rtol * scale:
        raise DomainError("matrix is not symmetric")
    upper = np.triu(A)
    return upper + np.triu(A, 1).T


def _jacobi(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi on an already validated symmetric array.

    Rotations run on plain Python floats: for the small matrices this library
    targets that is several times faster than slicing numpy rows.
    """
    n = A.shape[0]
    if n == 1:
        return np.array([float(A[0, 0])]), np.eye(1)
    a = A.tolist()
    v = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    scale = math.sqrt(sum(x * x for row in a for x in row))
    if scale == 0.0:
        return np.zeros(n), np.eye(n)
    thresh = JACOBI_TOL * scale
    for _ in range(JACOBI_MAX_SWEEPS):
        off = math.sqrt(2.0 * sum(a[i][j] * a[i][j] for i in range(n - 1) for j in range(i + 1, n)))
        if not off > thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if apq == 0.0:
                    continue
                theta = (a[q][q] - a[p][p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - s * akq
                    a[k][q] = s * akp + c * akq
                ap, aq = a[p], a[q]
                for k in range(n):
                    apk, aqk = ap[k], aq[k]
                    ap[k] = c * apk - s * aqk
                    aq[k] = s * apk + c * aqk
                ap[q] = aq[p] = 0.0
                for k in range(n):
                    vkp, vkq = v[k][p], v[k][q]
                    v[k][p] = c * vkp - s * vkq
                    v[k][q] = s * vkp + c * vkq
    else:
        raise NumericalError(f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    w = np.array([a[i][i] for i in range(n)])
    order = np.argsort(-w, kind="stable")
    return w[order], np.array(v)[:, order]


def eig_sym(S) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi.

    Returns
    -------
    eigenvalues : ndarray, shape (n,)
        Sorted in descending order.
    eigenvectors : ndarray, shape (n, n)
        Orthogonal; column ``k`` belongs to ``eigenvalues[k]``.
    """
    return _jacobi(as_symmetric(S))


def inv_sym_unchecked(A: np.ndarray) -> np.ndarray:
    """Spectral inverse without input validation, for integrator inner loops.

    ``A`` must be symmetric with finite entries; zero eigenvalues raise.
    """
    w, Q = _jacobi(A)
    if np.any(w == 0.0) or not np.all(np.isfinite(w)):
        raise DomainError("singular matrix")
    R = (Q / w) @ Q.T
    return 0.5 * (R + R.T)


def spectral_apply(S, f) -> np.ndarray:
    """Apply the scalar function ``f`` to a symmetric matrix spectrally.

    ``f`` must accept an array of eigenvalues.  A non-finite value of
    ``f`` at any eigenvalue (log of a non-positive number, say) raises
    :class:`DomainError`.
    """
    w, Q = eig_sym(S)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(w), dtype=float)
    if fw.shape != w.shape or not np.all(np.isfinite(fw)):
        raise DomainError(f"function undefined at an eigenvalue in {w!r}")
    R = (Q * fw) @ Q.T
    return 0.5 * (R + R.T)


def spd_classify(S, tol: float) -> Definiteness:
    w, _ = eig_sym(S)
    lo = w[-1]
    if lo > tol:
        return Definiteness.POSITIVE_DEFINITE
    if lo >= -tol:
        return Definiteness.POSITIVE_SEMIDEFINITE
    return Definiteness.INDEFINITE


def as_spd(S) -> np.ndarray:
    """Validate an SPD matrix: smallest eigenvalue above 1e-10 times the largest."""
    try:
        A = as_symmetric(S)
    except DomainError as exc:
        raise NotSPDError(str(exc)) from None
    w, _ = eig_sym(A)
    if not (w[-1] > 0.0 and w[-1] > SPD_RTOL * w[0]):
        raise NotSPDError(f"matrix is not positive definite (eigenvalues {w!r})")
    return A


def inv_spd(S) -> np.ndarray:
    return spectral_apply(S, lambda w: 1.0 / w)


def sqrt_spd(S) -> np.ndarray:
    return spectral_apply(S, np.sqrt)


def invsqrt_spd(S) -> np.ndarray:
    return spectral_apply(S, lambda w: 1.0 / np.sqrt(w))


def log_spd(S) -> np.ndarray:
    return spectral_apply(S, np.log)


def exp_sym(S) -> np.ndarray:
    return spectral_apply(S, np.exp)


def pow_spd(S, t: float) -> np.ndarray:
    return spectral_apply(S, lambda w: w ** t)


def logdet_spd(S) -> float:
    w, _ = eig_sym(S)
    if w[-1] <= 0.0:
        raise NotSPDError("log-determinant of a non-positive matrix")
    return float(np.sum(np.log(w)))


def sym_basis(n: int) -> list[np.ndarray]:
    """Basis of symmetric n x n matrices: E_11..E_nn, then F_12, F_13, ..., F_{n-1,n}.

    ``F_ij = E_ij + E_ji``, so a symmetric X has coordinates X_ii on E_ii and
    X_ij (not 2 X_ij) on F_ij.
    """
    if n < 1:
        raise DomainError("dimension must be positive")
    basis = []
    for i in range(n):
        E = np.zeros((n, n))
        E[i, i] = 1.0
        basis.append(E)
    for i in range(n):
        for j in range(i + 1, n):
            F = np.zeros((n, n))
            F[i, j] = F[j, i] = 1.0
            basis.append(F)
    return basis


def sym_coords(X) -> np.ndarray:
    """Coordinates of a symmetric matrix in :func:`sym_basis` order."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    iu = np.triu_indices(n, 1)
    return np.concatenate([np.diag(X), X[iu]])


def sym_from_coords(v, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    X = np.diag(v[:n])
    iu = np.triu_indices(n, 1)
    X[iu] = v[n:]
    X[(iu[1], iu[0])] = v[n:]
    return X
