"""Exact integer matrices attached to a rooted tree.

All constructors return dense ``int64`` numpy arrays and never round:
the ancestry matrix is (0,1) with unit diagonal, the bottleneck and
common-descendant matrices are built from combinatorial recurrences, and
each closed-form inverse is filled entry-by-entry from adjacency.  The
test suite asserts the algebraic characterizations (inverse products equal
the identity, the two Gram factorizations) in integer arithmetic.

Conventions (for a tree with root r):

* ``path_matrix(t)[i, j] == 1`` iff ``i`` lies on the path from ``j`` to r,
  i.e. ``i`` is an ancestor of ``j`` or ``j`` itself.
* ``bottleneck_matrix(t)[i, j]`` counts the vertices common to the two
  root paths; equals ``N.T @ N``.
* ``neckbottle_matrix(t)[i, j]`` counts the common descendants (each vertex
  descends from itself); equals ``N @ N.T``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError
from .trees import NO_PARENT, VERTEX_CAP, RootedTree, subtree_sizes

_EXACT_FLOAT_BOUND = 2 ** 53


def path_matrix(t: RootedTree) -> np.ndarray:
    """(0,1) ancestry matrix with unit diagonal; the root row is all ones."""
    n = t.n
    m = np.zeros((n, n), dtype=np.int64)
    for v in t.order:
        v = int(v)
        p = int(t.parent[v])
        if p >= 0:
            m[:, v] = m[:, p]
        m[v, v] = 1
    return m


def path_matrix_inverse(t: RootedTree) -> np.ndarray:
    """Unit diagonal, -1 at (parent, child), zero elsewhere."""
    x = np.eye(t.n, dtype=np.int64)
    nonroot = np.flatnonzero(t.parent >= 0)
    x[t.parent[nonroot], nonroot] = -1
    return x


def bottleneck_matrix(t: RootedTree) -> np.ndarray:
    """Common-root-path vertex counts; symmetric, entrywise positive.

    Built by the row recurrence: a child's row is its parent's row plus the
    child's ancestry row (its ancestor set is the parent's plus itself).
    """
    n = t.n
    anc = path_matrix(t)
    m = np.empty((n, n), dtype=np.int64)
    for v in t.order:
        v = int(v)
        p = int(t.parent[v])
        if p >= 0:
            np.add(m[p], anc[v], out=m[v])
        else:
            m[v] = anc[v]
    return m


def bottleneck_inverse(t: RootedTree) -> np.ndarray:
    """Exact inverse of the bottleneck matrix, via the ancestry inverse.

    Equals the Laplacian of the tree extended by one vertex above the root,
    with the extra row and column deleted.
    """
    x = path_matrix_inverse(t)
    return exact_matmul(x, x.T)


def neckbottle_matrix(t: RootedTree) -> np.ndarray:
    """Common-descendant counts: subtree size of the deeper vertex when one
    contains the other, zero when the subtrees are disjoint."""
    anc = path_matrix(t).astype(bool)
    sz = subtree_sizes(t)
    q = np.where(anc, sz[np.newaxis, :], 0)
    q += np.where(anc.T & ~anc, sz[:, np.newaxis], 0)
    return q.astype(np.int64)


def neckbottle_inverse(t: RootedTree) -> np.ndarray:
    """Closed-form inverse of the common-descendant matrix.

    Diagonal is 1 at the root and 2 elsewhere; -1 between adjacent vertices;
    +1 between distinct vertices sharing a parent; zero elsewhere.
    """
    n = t.n
    y = np.zeros((n, n), dtype=np.int64)
    for v in range(n):
        kids = t.children(v)
        if kids.size > 1:
            y[np.ix_(kids, kids)] = 1
    np.fill_diagonal(y, 2)
    y[t.root, t.root] = 1
    nonroot = np.flatnonzero(t.parent >= 0)
    y[t.parent[nonroot], nonroot] = -1
    y[nonroot, t.parent[nonroot]] = -1
    return y


def exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of two integer matrices.

    Routes through BLAS in double precision whenever every inner product is
    guaranteed below 2**53 (always true under the vertex cap), falling back
    to numpy's integer matmul otherwise.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    inner = a.shape[-1]
    ma = int(np.abs(a).max(initial=0))
    mb = int(np.abs(b).max(initial=0))
    bound = ma * mb * max(inner, 1)
    if bound < _EXACT_FLOAT_BOUND:
        c = a.astype(np.float64) @ b.astype(np.float64)
        return np.rint(c).astype(np.int64)
    if bound < 2 ** 63:
        return a @ b
    raise OverflowError("matrix product would overflow 64-bit integers")


# ---------------------------------------------------------------------------
# Structured forms for rooted products
# ---------------------------------------------------------------------------

def _root_row_ones(t: RootedTree) -> np.ndarray:
    e = np.zeros((t.n, t.n), dtype=np.int64)
    e[t.root, :] = 1
    return e


def _check_product_cap(t1, t2, max_vertices):
    if t1.n * t2.n > max_vertices:
        raise CapacityError(
            f"product order {t1.n * t2.n} exceeds the cap of {max_vertices}")


def product_path_matrix(t1: RootedTree, t2: RootedTree,
                        max_vertices: int = VERTEX_CAP) -> np.ndarray:
    """Ancestry matrix of the rooted product, assembled blockwise.

    Under the canonical product ordering this equals the directly
    constructed matrix entrywise; no permutation is involved.
    """
    _check_product_cap(t1, t2, max_vertices)
    n1 = t1.n
    i1 = np.eye(n1, dtype=np.int64)
    n_1 = path_matrix(t1)
    n_2 = path_matrix(t2)
    return np.kron(i1, n_2) + np.kron(n_1 - i1, _root_row_ones(t2))


def product_bottleneck(t1: RootedTree, t2: RootedTree,
                       max_vertices: int = VERTEX_CAP) -> np.ndarray:
    """Bottleneck matrix of the rooted product, assembled blockwise."""
    _check_product_cap(t1, t2, max_vertices)
    n1, n2 = t1.n, t2.n
    i1 = np.eye(n1, dtype=np.int64)
    m1 = bottleneck_matrix(t1)
    m2 = bottleneck_matrix(t2)
    j2 = np.ones((n2, n2), dtype=np.int64)
    return np.kron(i1, m2) + np.kron(m1 - i1, j2)


def product_neckbottle(t1: RootedTree, t2: RootedTree,
                       max_vertices: int = VERTEX_CAP) -> np.ndarray:
    """Common-descendant matrix of the rooted product, assembled blockwise."""
    _check_product_cap(t1, t2, max_vertices)
    n1, n2 = t1.n, t2.n
    i1 = np.eye(n1, dtype=np.int64)
    n_1 = path_matrix(t1)
    q1 = neckbottle_matrix(t1)
    q2 = neckbottle_matrix(t2)

    sz2 = subtree_sizes(t2)
    col_sz = np.zeros((n2, n2), dtype=np.int64)  # subtree sizes in column r2
    col_sz[:, t2.root] = sz2
    spike = np.zeros((n2, n2), dtype=np.int64)   # 1 at (r2, r2)
    spike[t2.root, t2.root] = 1

    return (np.kron(i1, q2)
            + np.kron(n_1.T - i1, col_sz)
            + np.kron(n_1 - i1, col_sz.T)
            + n2 * np.kron(q1 - n_1 - n_1.T + i1, spike))


# ---------------------------------------------------------------------------
# Permutation similarity
# ---------------------------------------------------------------------------

SIMILAR = "similar"
DIFFERENT = "different"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class PermutationSearch:
    """Outcome of a permutation-similarity search.

    ``status`` is one of SIMILAR, DIFFERENT, UNDECIDED; on SIMILAR,
    ``permutation`` maps positions of ``b`` to positions of ``a`` so that
    ``b[i, j] == a[p[i], p[j]]`` for all i, j.
    """
    status: str
    permutation: tuple | None = None


def _refine_colors(a, b):
    """Joint color refinement of the two matrices' index sets.

    Returns (colors_a, colors_b) or None when the color class sizes ever
    disagree (certifying the matrices are not permutation-similar).
    """
    n = a.shape[0]
    table: dict = {}

    def recolor(sig_rows):
        out = np.empty(len(sig_rows), dtype=np.int64)
        for i, sig in enumerate(sig_rows):
            out[i] = table.setdefault(sig, len(table))
        return out

    ca = recolor([(int(a[i, i]),) for i in range(n)])
    cb = recolor([(int(b[i, i]),) for i in range(n)])
    for _ in range(n):
        if sorted(ca.tolist()) != sorted(cb.tolist()):
            return None
        classes = len(set(ca.tolist()) | set(cb.tolist()))
        table = {}
        sig_a = [(int(ca[i]),) + tuple(sorted(zip(a[i].tolist(), ca.tolist())))
                 for i in range(n)]
        sig_b = [(int(cb[i]),) + tuple(sorted(zip(b[i].tolist(), cb.tolist())))
                 for i in range(n)]
        ca, cb = recolor(sig_a), recolor(sig_b)
        if len(set(ca.tolist()) | set(cb.tolist())) == classes:
            break
    if sorted(ca.tolist()) != sorted(cb.tolist()):
        return None
    return ca, cb


def is_permutation_similar(a: np.ndarray, b: np.ndarray,
                           node_cap: int = 1_000_000) -> PermutationSearch:
    """Search for a simultaneous row/column permutation mapping a onto b.

    Color refinement narrows the candidates; a backtracking search over the
    color classes finds a witness.  The search counts candidate placements
    and reports UNDECIDED once ``node_cap`` is exceeded (the problem is
    isomorphism-hard in general).
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("first matrix is not square")
    if b.shape != a.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    n = a.shape[0]
    if n == 0:
        return PermutationSearch(SIMILAR, ())
    if sorted(a.ravel().tolist()) != sorted(b.ravel().tolist()):
        return PermutationSearch(DIFFERENT)

    refined = _refine_colors(a, b)
    if refined is None:
        return PermutationSearch(DIFFERENT)
    ca, cb = refined

    by_color: dict = {}
    for v in range(n):
        by_color.setdefault(int(ca[v]), []).append(v)

    # Assign positions of b in order of ascending candidate-class size.
    pos_order = sorted(range(n), key=lambda i: len(by_color.get(int(cb[i]), [])))
    assigned = np.full(n, -1, dtype=np.int64)  # assigned[i] = image in a
    used = np.zeros(n, dtype=bool)
    nodes = 0

    def backtrack(idx: int) -> str:
        nonlocal nodes
        if idx == n:
            return SIMILAR
        i = pos_order[idx]
        for v in by_color.get(int(cb[i]), []):
            if used[v]:
                continue
            nodes += 1
            if nodes > node_cap:
                return UNDECIDED
            ok = True
            for jdx in range(idx):
                j = pos_order[jdx]
                w = assigned[j]
                if a[v, w] != b[i, j] or a[w, v] != b[j, i]:
                    ok = False
                    break
            if not ok:
                continue
            assigned[i] = v
            used[v] = True
            result = backtrack(idx + 1)
            if result != DIFFERENT:
                return result
            assigned[i] = -1
            used[v] = False
        return DIFFERENT

    status = backtrack(0)
    if status != SIMILAR:
        return PermutationSearch(status)
    perm = tuple(int(v) for v in assigned)
    rows = np.array(perm)
    if not np.array_equal(a[np.ix_(rows, rows)], b):
        raise AssertionError("witness permutation failed verification")
    return PermutationSearch(SIMILAR, perm)


# ---------------------------------------------------------------------------
# Plain-text grid format
# ---------------------------------------------------------------------------

def matrix_to_text(m: np.ndarray) -> str:
    """First line "rows cols", then one space-separated row per line."""
    m = np.asarray(m)
    lines = [f"{m.shape[0]} {m.shape[1]}"]
    lines.extend(" ".join(str(int(v)) for v in row) for row in m)
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> np.ndarray:
    tokens = text.split()
    if len(tokens) < 2:
        raise ValueError("matrix text needs a 'rows cols' header")
    rows, cols = int(tokens[0]), int(tokens[1])
    vals = [int(v) for v in tokens[2:]]
    if len(vals) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, found {len(vals)}")
    return np.array(vals, dtype=np.int64).reshape(rows, cols)
