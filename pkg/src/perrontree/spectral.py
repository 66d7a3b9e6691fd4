"""Floating-point spectral computations for rooted trees.

The dominant eigenpair of the (entrywise positive, symmetric) bottleneck
matrix is simple, so a deterministic normalized power iteration from the
all-ones vector converges geometrically; that iteration is the primary
method throughout.  Dense LAPACK eigensolves appear only as test oracles.

Trees above ``DENSE_EIG_LIMIT`` vertices are solved matrix-free: the
bottleneck matvec factors into a subtree-sum pass followed by a root-path
sum pass (see ``_kernels``), which is exactly the same iteration run
against an O(n) operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import PowerIterationError
from .matrices import bottleneck_matrix, neckbottle_matrix
from .trees import RootedTree, subtree_sizes

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 200_000

#: Largest order for which the dense bottleneck matrix is materialized;
#: bigger trees go through the matrix-free operator.
DENSE_EIG_LIMIT = 2048


@dataclass(frozen=True)
class SpectralResult:
    """Dominant eigenvalue with its positive unit eigenvector.

    ``residual`` is ``||A v - rho v||`` at acceptance, which is at most
    ``tol * rho`` on success.
    """
    rho: float
    vector: np.ndarray
    iterations: int
    residual: float


@dataclass(frozen=True)
class EntropyResult:
    """Eigenvector-uniformity value in [1, n] plus its source eigenpair."""
    h: float
    spectral: SpectralResult


def _finish(raw, what: str, tol: float) -> SpectralResult:
    lam, vec, iters, resid, converged = raw
    result = SpectralResult(float(lam), vec, int(iters), float(resid))
    if not converged:
        raise PowerIterationError(
            f"{what} did not converge to {tol:g} within {iters} iterations "
            f"(residual {resid:.3e})", best=result)
    return result


def perron(m: np.ndarray, tol: float = DEFAULT_TOL,
           max_iter: int = DEFAULT_MAX_ITER) -> SpectralResult:
    """Dominant eigenpair of a symmetric entrywise-nonnegative matrix."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not np.array_equal(m, m.T):
        raise ValueError("matrix must be exactly symmetric")
    if np.any(m < 0):
        raise ValueError("matrix must be entrywise nonnegative")
    raw = _kernels.power_iteration_dense(m, 0.0, tol, max_iter)
    return _finish(raw, "power iteration", tol)


def perron_value(t: RootedTree, tol: float = DEFAULT_TOL,
                 max_iter: int = DEFAULT_MAX_ITER,
                 use_neckbottle: bool = False) -> SpectralResult:
    """Dominant eigenpair of the tree's bottleneck matrix.

    ``use_neckbottle`` runs the same iteration against the common-descendant
    matrix instead; the two share their spectrum, so the values agree to
    solver accuracy while the returned eigenvectors differ.
    """
    if t.n <= DENSE_EIG_LIMIT:
        build = neckbottle_matrix if use_neckbottle else bottleneck_matrix
        m = build(t).astype(np.float64)
        raw = _kernels.power_iteration_dense(m, 0.0, tol, max_iter)
    else:
        raw = _kernels.power_iteration_tree(
            t.parent, t.order, t.depth, use_neckbottle, tol, max_iter)
    return _finish(raw, f"power iteration on {t!r}", tol)


def symmetric_max_eig(m: np.ndarray, tol: float = DEFAULT_TOL,
                      max_iter: int = DEFAULT_MAX_ITER) -> float:
    """Largest eigenvalue of a symmetric (possibly indefinite) matrix.

    Power iteration on ``m + c I`` with ``c`` the maximum absolute row sum,
    which makes the shifted matrix positive semidefinite so its dominant
    eigenvalue is the one sought; ``c`` is subtracted from the result.
    Convergence is judged on the shifted operator.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not np.array_equal(m, m.T):
        raise ValueError("matrix must be exactly symmetric")
    shift = float(np.abs(m).sum(axis=1).max())
    raw = _kernels.power_iteration_dense(m, shift, tol, max_iter)
    result = _finish(raw, "shifted power iteration", tol)
    return result.rho - shift


def perron_entropy(t: RootedTree, tol: float = DEFAULT_TOL,
                   max_iter: int = DEFAULT_MAX_ITER) -> EntropyResult:
    """(sum w)**2 / ||w||**2 for the dominant eigenvector w; in [1, n]."""
    spectral = perron_value(t, tol=tol, max_iter=max_iter)
    w = spectral.vector
    h = float(w.sum()) ** 2 / float(w @ w)
    return EntropyResult(h, spectral)


def rayleigh_lower_bound(t: RootedTree) -> float:
    """Rayleigh quotient of the bottleneck matrix at the all-ones vector.

    A guaranteed lower bound on the dominant eigenvalue.  The numerator
    (the sum of all bottleneck entries) equals the sum of squared subtree
    sizes, so it is computed exactly without building the matrix.
    """
    sz = subtree_sizes(t)
    return int(np.dot(sz, sz)) / t.n


# ---------------------------------------------------------------------------
# Closed forms for rooted stars and paths
# ---------------------------------------------------------------------------

def _check_n(n: int):
    if n < 1:
        raise ValueError("n must be positive")


def rho_star_closed(n: int) -> float:
    """Dominant bottleneck eigenvalue of the rooted star on n vertices."""
    _check_n(n)
    return 0.5 * (n + 1 + math.sqrt(n * n + 2 * n - 3))


def rho_path_closed(n: int) -> float:
    """Dominant bottleneck eigenvalue of the endpoint-rooted path.

    The defining expression is 1/(2 (1 - cos(pi/(2n+1)))); evaluating the
    denominator as 4 sin^2(pi/(4n+2)) avoids the cancellation that would
    otherwise cost eight digits by n ~ 10**4.
    """
    _check_n(n)
    s = math.sin(math.pi / (4 * n + 2))
    return 0.25 / (s * s)


def entropy_path_closed(n: int) -> float:
    """Eigenvector-uniformity value of the endpoint-rooted path."""
    _check_n(n)
    return 1.0 / (math.tan(math.pi / (4 * n + 2)) ** 2 * (2 * n + 1))


def entropy_star_closed(n: int) -> float:
    """Eigenvector-uniformity value of the rooted star (1 for n = 1)."""
    _check_n(n)
    if n == 1:
        return 1.0
    s = math.sqrt(n * n + 2 * n - 3)
    num = (n * n + 2 * n) * s + n ** 3 + 3 * n * n - 2
    den = (n + 2) * s + n * n + 3 * n
    return num / den


def perron_vector_path_closed(n: int) -> np.ndarray:
    """Unnormalized dominant eigenvector of the endpoint-rooted path:
    entry i (root first, 1-based) is sin(i*pi/(2n+1))."""
    _check_n(n)
    i = np.arange(1, n + 1, dtype=np.float64)
    return np.sin(i * math.pi / (2 * n + 1))
