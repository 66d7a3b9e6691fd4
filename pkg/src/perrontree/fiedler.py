"""Type I / type II analysis of unrooted trees.

Removing a vertex v splits a tree into branches, each rooted at its vertex
adjacent to v.  Exactly one of two cases occurs: either a single vertex
carries two or more branches tying for the maximal dominant eigenvalue
(type I, the algebraic connectivity is the reciprocal of that eigenvalue),
or a single edge pq exists whose endpoints' unique maximal branches contain
each other (type II, the connectivity is the reciprocal of the largest
eigenvalue of the rank-one-shifted bottleneck matrix at the balancing
parameter beta).

The classifier scans every vertex, solves every branch spectrally, and
resolves beta by bisection; it is deliberately the naive, traceable
strategy.  ``algebraic_connectivity_oracle`` recomputes the same quantity
from the Laplacian spectrum and serves as the independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ClassificationAmbiguityError
from .matrices import bottleneck_matrix
from .spectral import (DEFAULT_MAX_ITER, DEFAULT_TOL, perron_value,
                       symmetric_max_eig)
from .trees import RootedTree, UnrootedTree, bethe, bethe_order

TYPE_I = "I"
TYPE_II = "II"

#: Relative tolerance under which branch eigenvalues count as tied.
TIE_TOL = 1e-9

_BISECTION_STEPS = 60


@dataclass(frozen=True)
class Branch:
    """One component of G - v, rooted at its vertex adjacent to v.

    ``vertices[local]`` is the original id of the branch's local vertex;
    ``vertices[tree.root]`` is the neighbor of v the branch hangs from.
    """
    tree: RootedTree
    vertices: np.ndarray


@dataclass(frozen=True)
class TreeClassification:
    """Classification outcome.

    ``characteristic`` holds the characteristic vertex ``(z,)`` for type I
    or the characteristic edge ``(p, q)`` for type II; ``beta`` is None for
    type I.  ``perron_branch_rho`` is the maximal branch eigenvalue at the
    characteristic vertex (type I) or at p (type II);
    ``perron_branch_roots`` lists the neighbors heading each maximal branch.
    """
    kind: str
    characteristic: tuple
    algebraic_connectivity: float
    perron_branch_rho: float
    perron_branch_roots: tuple
    beta: float | None = None


def branches_at(g: UnrootedTree, v: int) -> list[Branch]:
    """The components of G - v, each rooted at its neighbor of v.

    Branches are listed by ascending neighbor id; local vertex ids follow
    the discovery order from the neighbor, so local id 0 is the root.
    """
    if not (0 <= v < g.n):
        raise ValueError(f"vertex {v} out of range")
    out = []
    for w in g.neighbors(v):
        w = int(w)
        local = {w: 0}
        orig = [w]
        parent = [-1]
        stack = [w]
        while stack:
            u = stack.pop()
            for x in g.neighbors(u):
                x = int(x)
                if x == v or x in local:
                    continue
                local[x] = len(orig)
                orig.append(x)
                parent.append(local[u])
                stack.append(x)
        out.append(Branch(RootedTree(parent), np.array(orig, dtype=np.int64)))
    return out


def _branch_rhos(g, v, tol, max_iter):
    branches = branches_at(g, v)
    rhos = [perron_value(b.tree, tol=tol, max_iter=max_iter).rho
            for b in branches]
    return branches, rhos


def classify(g: UnrootedTree, tol: float = TIE_TOL,
             solver_tol: float = DEFAULT_TOL,
             max_iter: int = DEFAULT_MAX_ITER) -> TreeClassification:
    """Classify an unrooted tree on at least two vertices.

    ``tol`` is the relative tie tolerance for calling two branches equally
    dominant.  The dichotomy is clean in exact arithmetic, so detecting
    both cases (or neither) raises ClassificationAmbiguityError rather than
    silently tie-breaking.
    """
    if g.n < 2:
        raise ValueError("classification needs at least two vertices")

    tie_vertices = []          # (v, branches, rhos, max_rho)
    perron_neighbor = {}       # v -> neighbor heading the unique max branch
    max_rho_at = {}
    branch_cache = {}
    for v in range(g.n):
        branches, rhos = _branch_rhos(g, v, solver_tol, max_iter)
        branch_cache[v] = (branches, rhos)
        mx = max(rhos)
        max_rho_at[v] = mx
        tied = [i for i, r in enumerate(rhos) if mx - r <= tol * mx]
        if len(tied) >= 2:
            tie_vertices.append((v, branches, rhos, mx))
        else:
            perron_neighbor[v] = int(branches[tied[0]].vertices[0])

    if len(tie_vertices) > 1:
        raise ClassificationAmbiguityError(
            f"{len(tie_vertices)} vertices show tied maximal branches "
            f"(tie tolerance {tol:g} is too loose for this instance)")

    if len(tie_vertices) == 1:
        z, branches, rhos, mx = tie_vertices[0]
        roots = tuple(int(b.vertices[0]) for b, r in zip(branches, rhos)
                      if mx - r <= tol * mx)
        return TreeClassification(
            kind=TYPE_I, characteristic=(z,),
            algebraic_connectivity=1.0 / mx,
            perron_branch_rho=mx, perron_branch_roots=roots)

    mutual = sorted({(min(v, w), max(v, w))
                     for v, w in perron_neighbor.items()
                     if perron_neighbor.get(w) == v})
    if len(mutual) != 1:
        raise ClassificationAmbiguityError(
            f"no tied vertex and {len(mutual)} mutually dominant edges; "
            f"expected exactly one (tie tolerance {tol:g})")
    p, q = mutual[0]

    branch_p = next(b for b in branch_cache[p][0] if int(b.vertices[0]) == q)
    branch_q = next(b for b in branch_cache[q][0] if int(b.vertices[0]) == p)
    m_p = bottleneck_matrix(branch_p.tree).astype(np.float64)
    m_q = bottleneck_matrix(branch_q.tree).astype(np.float64)
    j_p = np.ones_like(m_p)
    j_q = np.ones_like(m_q)

    def lam_p(beta):
        return symmetric_max_eig(m_p - beta * j_p, tol=solver_tol,
                                 max_iter=max_iter)

    def lam_q(beta):
        return symmetric_max_eig(m_q - (1.0 - beta) * j_q, tol=solver_tol,
                                 max_iter=max_iter)

    def gap(beta):
        return lam_p(beta) - lam_q(beta)

    # The balancing parameter is the root of the (continuous, decreasing)
    # gap on (0, 1); the bracket is asserted, not assumed.
    g0, g1 = gap(0.0), gap(1.0)
    if g0 < 0.0 or g1 > 0.0:
        raise ClassificationAmbiguityError(
            f"balancing bracket violated: gap(0)={g0:.3e}, gap(1)={g1:.3e}")
    lo, hi = 0.0, 1.0
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        gm = gap(mid)
        if gm == 0.0:
            lo = hi = mid
            break
        if gm > 0.0:
            lo = mid
        else:
            hi = mid
    beta = 0.5 * (lo + hi)

    lp, lq = lam_p(beta), lam_q(beta)
    if abs(lp - lq) > 1e-6 * max(1.0, abs(lp)):
        raise ClassificationAmbiguityError(
            f"shifted eigenvalues failed to balance: {lp!r} vs {lq!r}")
    return TreeClassification(
        kind=TYPE_II, characteristic=(p, q),
        algebraic_connectivity=1.0 / lp,
        perron_branch_rho=max_rho_at[p],
        perron_branch_roots=(q, p), beta=beta)


def algebraic_connectivity_oracle(g: UnrootedTree) -> float:
    """Second-smallest Laplacian eigenvalue, from a dense symmetric
    eigensolve.  Independent cross-check for ``classify``."""
    n = g.n
    if n < 2:
        raise ValueError("needs at least two vertices")
    lap = np.zeros((n, n), dtype=np.float64)
    for u, v in g.edges:
        lap[u, u] += 1.0
        lap[v, v] += 1.0
        lap[u, v] -= 1.0
        lap[v, u] -= 1.0
    return float(np.linalg.eigvalsh(lap)[1])


# ---------------------------------------------------------------------------
# Bounds for the symmetric branching family
# ---------------------------------------------------------------------------

def bethe_rho_upper(p: int, k: int) -> float:
    """Closed upper bound on the dominant bottleneck eigenvalue of the
    depth-p branching-k tree."""
    if p < 1:
        raise ValueError("p must be at least 1")
    if k < 2:
        raise ValueError("k must be at least 2")
    return (k ** (p + 1) - p * k - k + p) / (k - 1) ** 2


def bethe_alg_conn_lower(p: int, k: int) -> float:
    """Closed lower bound on the algebraic connectivity of the unrooted
    depth-p branching-k tree (p at least 2)."""
    if p < 2:
        raise ValueError("p must be at least 2")
    if k < 2:
        raise ValueError("k must be at least 2")
    return (k - 1) ** 2 / (k ** p - p * k + p - 1)


def bethe_alg_conn_exact(p: int, k: int, tol: float = DEFAULT_TOL,
                         max_iter: int = DEFAULT_MAX_ITER) -> float:
    """Exact algebraic connectivity of the unrooted depth-p branching-k
    tree: the tree is symmetric about its center, so it is type I there
    with every branch maximal, giving 1/rho of the depth-(p-1) tree."""
    if p < 2:
        raise ValueError("p must be at least 2")
    sub = bethe(p - 1, k, max_vertices=max(bethe_order(p - 1, k), 1))
    return 1.0 / perron_value(sub, tol=tol, max_iter=max_iter).rho
