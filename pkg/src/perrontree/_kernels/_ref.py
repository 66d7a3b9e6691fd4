"""Pure-numpy reference implementations of the iteration kernels.

The compiled variant in ``_fast.pyx`` implements the same contracts and the
package picks whichever imports at run time, so keep the two in sync; the
kernel test compares them on identical inputs.

Every kernel runs a normalized power iteration from the all-ones start
vector and stops when the residual ``||A v - lam v||`` drops below
``tol * |lam|`` (``lam`` is the Rayleigh quotient of the current iterate).
The shifted kernel falls back once to a fixed perturbed start vector when
the first sweep shows no growth, then gives up; start vectors are part of
the contract, not an implementation detail.

Return convention for all kernels:
    (lam, vector, iterations, residual, converged)
with ``vector`` of unit Euclidean norm.
"""

import numpy as np


def _uniform_start(n):
    return np.full(n, 1.0 / np.sqrt(n))


def _perturbed_start(n):
    v = 1.0 + (np.arange(n) + 1.0) / (n + 1.0)
    return v / np.linalg.norm(v)


# A run is declared stalled (and reported unconverged) when the residual
# fails to improve by STALL_FACTOR over STALL_WINDOW consecutive iterations:
# that is the floating-point floor, not slow convergence, and grinding out
# the remaining iteration budget there would be pure waste.
STALL_WINDOW = 200
STALL_FACTOR = 1.0 - 1e-4


def _iterate(matvec, n, shift, tol, max_iter):
    v = _uniform_start(n)
    lam = 0.0
    resid = np.inf
    best = np.inf
    stall = 0
    restarted = False
    for it in range(1, max_iter + 1):
        w = matvec(v)
        if shift != 0.0:
            w += shift * v
        lam = float(v @ w)
        if it == 1 and lam <= 0.0 and not restarted:
            # No growth from the uniform start; retry from the fixed
            # perturbed vector before trusting a degenerate direction.
            restarted = True
            v = _perturbed_start(n)
            continue
        resid = float(np.linalg.norm(w - lam * v))
        if resid <= tol * abs(lam) or resid == 0.0:
            return lam, v, it, resid, True
        if resid < best * STALL_FACTOR:
            best = resid
            stall = 0
        else:
            stall += 1
            if stall >= STALL_WINDOW:
                return lam, v, it, resid, False
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return lam, v, it, resid, True  # exact kernel vector: lam = 0
        v = w / nw
    return lam, v, max_iter, resid, False


def power_iteration_dense(a, shift=0.0, tol=1e-12, max_iter=200_000):
    """Dominant eigenvalue of ``a + shift * I`` for symmetric ``a``."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    return _iterate(lambda v: a @ v, a.shape[0], float(shift), tol, max_iter)


def _level_slices(order, depth):
    """Split a BFS order into per-depth index arrays."""
    d_sorted = depth[order]
    max_depth = int(d_sorted[-1])
    bounds = np.searchsorted(d_sorted, np.arange(max_depth + 2))
    return [order[bounds[d]:bounds[d + 1]] for d in range(max_depth + 1)]


def power_iteration_tree(parent, order, depth, neckbottle=False,
                         tol=1e-12, max_iter=200_000):
    """Dominant eigenvalue of the bottleneck (or common-descendant) matrix
    of a rooted tree, without materializing it.

    Multiplying by the ancestry matrix is a subtree-sum pass and multiplying
    by its transpose is a root-path-sum pass, both linear in the vertex
    count; the Gram products chain the two passes.
    """
    parent = np.asarray(parent, dtype=np.int64)
    n = parent.shape[0]
    levels = _level_slices(np.asarray(order, dtype=np.int64),
                           np.asarray(depth, dtype=np.int64))
    par = [parent[lv] for lv in levels]
    ndepths = len(levels)

    def subtree_sum(x):
        s = x.copy()
        for d in range(ndepths - 1, 0, -1):
            np.add.at(s, par[d], s[levels[d]])
        return s

    def path_sum(x):
        s = x.copy()
        for d in range(1, ndepths):
            s[levels[d]] += s[par[d]]
        return s

    if neckbottle:
        matvec = lambda v: subtree_sum(path_sum(v))
    else:
        matvec = lambda v: path_sum(subtree_sum(v))
    return _iterate(matvec, n, 0.0, tol, max_iter)
