"""Rooted and unrooted trees: construction, composition, exact functionals.

Vertices are 0-based integers everywhere in memory.  A rooted tree is a
parent array (``parent[v]`` is the parent id, ``-1`` at the root) plus
derived caches: a BFS order in which parents precede children, depths,
degrees and a children index.  All arrays are read-only after construction,
so trees can be shared freely between threads; every operation in this
module is a pure function.

The on-disk text format is 1-based with ``0`` marking the root (see
``tree_to_text``), which keeps files directly comparable with hand-drawn
vertex labellings starting at 1.
"""

from __future__ import annotations

import heapq
import json

import numpy as np

from .errors import CapacityError

NO_PARENT = -1

#: Default ceiling on the number of vertices a constructor will produce.
#: Keeps dense n-by-n integer matrices within desk memory; every
#: constructor takes an explicit override.
VERTEX_CAP = 1_000_000

_U64 = 0xFFFFFFFFFFFFFFFF


class Splitmix64:
    """Deterministic 64-bit generator used for every seeded construction.

    State update and output mix (all arithmetic mod 2**64):

        state += 0x9E3779B97F4A7C15
        z = state
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)

    The constants are fixed by the repository contract: the same seed must
    reproduce bit-identical trees in any implementation of this format.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _U64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _U64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _U64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _U64
        return (z ^ (z >> 31)) & _U64

    def below(self, bound: int) -> int:
        """Next draw reduced mod ``bound`` (plain modulo by contract)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class RootedTree:
    """Immutable rooted tree.

    Attributes
    ----------
    n      : int       vertex count
    root   : int       root id
    parent : int64[n]  parent id per vertex, -1 at the root
    order  : int64[n]  BFS order; parents precede children, depths ascend
    depth  : int64[n]  edge distance to the root
    degree : int64[n]  vertex degree within the tree
    """

    __slots__ = ("n", "root", "parent", "order", "depth", "degree",
                 "_child_idx", "_child_ptr")

    def __init__(self, parent):
        p = np.array(parent, dtype=np.int64)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("parent array must be a nonempty 1-d sequence")
        n = int(p.size)
        if np.any((p < NO_PARENT) | (p >= n)):
            raise ValueError("parent id out of range")
        roots = np.flatnonzero(p == NO_PARENT)
        if roots.size != 1:
            raise ValueError(f"expected exactly one root, found {roots.size}")
        root = int(roots[0])

        # Children index in CSR form: children of v are
        # _child_idx[_child_ptr[v]:_child_ptr[v + 1]], ascending.
        child_idx = np.argsort(p, kind="stable")[1:]  # drop the root (-1)
        counts = np.bincount(p[p >= 0], minlength=n)
        child_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=child_ptr[1:])

        # Level-by-level BFS; covering all n vertices certifies acyclicity.
        depth = np.full(n, -1, dtype=np.int64)
        depth[root] = 0
        pieces = []
        frontier = np.array([root], dtype=np.int64)
        level = 0
        seen = 0
        while frontier.size:
            pieces.append(frontier)
            seen += frontier.size
            starts = child_ptr[frontier]
            cnt = child_ptr[frontier + 1] - starts
            total = int(cnt.sum())
            if total == 0:
                break
            level += 1
            base = np.repeat(starts, cnt)
            step = np.arange(total) - np.repeat(np.cumsum(cnt) - cnt, cnt)
            frontier = child_idx[base + step]
            depth[frontier] = level
        if seen != n:
            raise ValueError("parent pointers contain a cycle")

        order = np.concatenate(pieces) if len(pieces) > 1 else pieces[0]
        degree = counts.astype(np.int64)
        degree[p >= 0] += 1

        self.n = n
        self.root = root
        self.parent = _readonly(p)
        self.order = _readonly(order.astype(np.int64))
        self.depth = _readonly(depth)
        self.degree = _readonly(degree)
        self._child_idx = _readonly(child_idx)
        self._child_ptr = _readonly(child_ptr)

    def children(self, v: int) -> np.ndarray:
        return self._child_idx[self._child_ptr[v]:self._child_ptr[v + 1]]

    def __eq__(self, other):
        return (isinstance(other, RootedTree)
                and self.n == other.n
                and bool(np.array_equal(self.parent, other.parent)))

    def __hash__(self):
        return hash((self.n, self.parent.tobytes()))

    def __repr__(self):
        return f"RootedTree(n={self.n}, root={self.root})"


class UnrootedTree:
    """Unrooted tree on vertices 0..n-1 given by an edge list."""

    __slots__ = ("n", "edges", "_adj_idx", "_adj_ptr")

    def __init__(self, n: int, edges):
        if n < 1:
            raise ValueError("n must be positive")
        pairs = [(int(u), int(v)) for u, v in edges]
        if len(pairs) != n - 1:
            raise ValueError(f"a tree on {n} vertices has {n - 1} edges")
        canon = set()
        for u, v in pairs:
            if u == v:
                raise ValueError("self-loop")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError("edge endpoint out of range")
            key = (u, v) if u < v else (v, u)
            if key in canon:
                raise ValueError("duplicate edge")
            canon.add(key)

        ends = np.fromiter((w for e in pairs for w in e), dtype=np.int64,
                           count=2 * len(pairs))
        other = ends.reshape(-1, 2)[:, ::-1].ravel()
        srt = np.argsort(ends, kind="stable")
        adj_idx = other[srt]
        adj_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(ends, minlength=n), out=adj_ptr[1:])

        # n-1 edges plus connectivity (checked by BFS) make it a tree.
        seen = np.zeros(n, dtype=bool)
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            v = stack.pop()
            for w in adj_idx[adj_ptr[v]:adj_ptr[v + 1]]:
                w = int(w)
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        if count != n:
            raise ValueError("edge list is not connected")

        self.n = n
        self.edges = tuple(sorted(canon))
        self._adj_idx = _readonly(adj_idx)
        self._adj_ptr = _readonly(adj_ptr)

    def neighbors(self, v: int) -> np.ndarray:
        if not (0 <= v < self.n):
            raise ValueError(f"vertex {v} out of range")
        return self._adj_idx[self._adj_ptr[v]:self._adj_ptr[v + 1]]

    def __eq__(self, other):
        return (isinstance(other, UnrootedTree) and self.n == other.n
                and self.edges == other.edges)

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"UnrootedTree(n={self.n})"


def unroot(t: RootedTree) -> UnrootedTree:
    """Forget the root; edges are the parent links."""
    nonroot = np.flatnonzero(t.parent >= 0)
    return UnrootedTree(t.n, [(int(v), int(t.parent[v])) for v in nonroot])


def root_at(g: UnrootedTree, r: int) -> RootedTree:
    """Orient ``g`` toward root ``r``, keeping the original vertex ids."""
    if not (0 <= r < g.n):
        raise ValueError(f"vertex {r} out of range")
    parent = np.full(g.n, NO_PARENT, dtype=np.int64)
    seen = np.zeros(g.n, dtype=bool)
    seen[r] = True
    stack = [r]
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            w = int(w)
            if not seen[w]:
                seen[w] = True
                parent[w] = v
                stack.append(w)
    return RootedTree(parent)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def _check_cap(n: int, max_vertices: int):
    if n > max_vertices:
        raise CapacityError(f"{n} vertices exceed the cap of {max_vertices}")


def star(n: int, max_vertices: int = VERTEX_CAP) -> RootedTree:
    """Star on ``n`` vertices rooted at the center (single vertex for n=1)."""
    if n < 1:
        raise ValueError("n must be positive")
    _check_cap(n, max_vertices)
    parent = np.zeros(n, dtype=np.int64)
    parent[0] = NO_PARENT
    return RootedTree(parent)


def path(n: int, max_vertices: int = VERTEX_CAP) -> RootedTree:
    """Path on ``n`` vertices rooted at an endpoint."""
    if n < 1:
        raise ValueError("n must be positive")
    _check_cap(n, max_vertices)
    return RootedTree(np.arange(-1, n - 1, dtype=np.int64))


def broom(x: int, y: int, max_vertices: int = VERTEX_CAP) -> RootedTree:
    """Path of ``x`` vertices rooted at one end, ``y`` pendants on the other.

    ``broom(1, y)`` is the star on ``y + 1`` vertices; ``broom(0, 1)`` is the
    single-vertex tree.
    """
    if y < 0:
        raise ValueError("y must be nonnegative")
    if x < 1:
        if x == 0 and y == 1:
            return RootedTree([NO_PARENT])
        raise ValueError("x must be positive (except broom(0, 1))")
    _check_cap(x + y, max_vertices)
    parent = np.empty(x + y, dtype=np.int64)
    parent[:x] = np.arange(-1, x - 1)
    parent[x:] = x - 1
    return RootedTree(parent)


def bethe(p: int, k: int, max_vertices: int = VERTEX_CAP) -> RootedTree:
    """Depth-``p`` tree in which every internal vertex has ``k`` children.

    Defined recursively: the p=1 tree is a single vertex, and the depth-p
    tree joins ``k`` copies of the depth-(p-1) tree under a fresh root.
    Order is ``(k**p - 1) // (k - 1)``.
    """
    if p < 1:
        raise ValueError("p must be positive")
    if k < 2:
        raise ValueError("k must be at least 2")
    _check_cap(bethe_order(p, k), max_vertices)
    t = RootedTree([NO_PARENT])
    for _ in range(p - 1):
        t = rooted_sum([t] * k, max_vertices=max_vertices)
    return t


def random_tree(n: int, seed: int, max_vertices: int = VERTEX_CAP) -> RootedTree:
    """Uniformly random labeled tree, rooted at vertex 0.

    A length ``n - 2`` sequence is drawn from ``Splitmix64(seed)`` with each
    entry ``next_u64() % n``, then decoded with the smallest-leaf-first rule
    (the classic sequence-to-tree bijection).  Same ``(n, seed)`` gives a
    bit-identical tree in every implementation.
    """
    if n < 1:
        raise ValueError("n must be positive")
    _check_cap(n, max_vertices)
    if n == 1:
        return RootedTree([NO_PARENT])
    if n == 2:
        return RootedTree([NO_PARENT, 0])

    rng = Splitmix64(seed)
    seq = [rng.below(n) for _ in range(n - 2)]

    deg = [1] * n
    for a in seq:
        deg[a] += 1
    leaves = [v for v in range(n) if deg[v] == 1]
    heapq.heapify(leaves)
    adj = [[] for _ in range(n)]
    for a in seq:
        leaf = heapq.heappop(leaves)
        adj[leaf].append(a)
        adj[a].append(leaf)
        deg[a] -= 1
        if deg[a] == 1:
            heapq.heappush(leaves, a)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    adj[u].append(v)
    adj[v].append(u)

    parent = np.full(n, NO_PARENT, dtype=np.int64)
    seen = [False] * n
    seen[0] = True
    stack = [0]
    while stack:
        w = stack.pop()
        for x in adj[w]:
            if not seen[x]:
                seen[x] = True
                parent[x] = w
                stack.append(x)
    return RootedTree(parent)


# ---------------------------------------------------------------------------
# Composition
# ---------------------------------------------------------------------------

def rooted_sum(parts, max_vertices: int = VERTEX_CAP) -> RootedTree:
    """Join the roots of all ``parts`` to a fresh root.

    Vertex numbering: the new root is 0, then the parts follow in list
    order, each keeping its internal order.
    """
    parts = list(parts)
    if not parts:
        raise ValueError("rooted_sum needs at least one part")
    n = 1 + sum(t.n for t in parts)
    _check_cap(n, max_vertices)
    parent = np.empty(n, dtype=np.int64)
    parent[0] = NO_PARENT
    off = 1
    for t in parts:
        block = parent[off:off + t.n]
        block[:] = t.parent + off
        block[t.root] = 0
        off += t.n
    return RootedTree(parent)


def rooted_product(t1: RootedTree, t2: RootedTree,
                   max_vertices: int = VERTEX_CAP) -> RootedTree:
    """One copy of ``t2`` per vertex of ``t1``, copies joined root-to-root
    along the edges of ``t1``; rooted at the root of the copy at ``t1.root``.

    Canonical numbering: vertex ``a`` of the copy at ``i`` becomes
    ``i * t2.n + a``.  Under this ordering the structured matrix forms for
    products hold entrywise, with no permutation.
    """
    n1, n2 = t1.n, t2.n
    _check_cap(n1 * n2, max_vertices)
    offsets = np.arange(n1, dtype=np.int64) * n2
    parent = np.add.outer(offsets, t2.parent)
    root_slot = np.where(t1.parent == NO_PARENT, NO_PARENT,
                         t1.parent * n2 + t2.root)
    parent[:, t2.root] = root_slot
    return RootedTree(parent.ravel())


def rooted_power(t: RootedTree, k: int,
                 max_vertices: int = VERTEX_CAP) -> RootedTree:
    """k-fold iterated rooted product of ``t`` with itself (single vertex
    for k=0).  Order is ``t.n ** k``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return RootedTree([NO_PARENT])
    _check_cap(t.n ** k, max_vertices)
    result = t
    for _ in range(k - 1):
        result = rooted_product(t, result, max_vertices=max_vertices)
    return result


# ---------------------------------------------------------------------------
# Exact integer functionals
# ---------------------------------------------------------------------------

def moment(t: RootedTree) -> int:
    """Sum over vertices of (distance to root) * degree.  Exact."""
    return int(np.dot(t.depth, t.degree))


def root_transmission(t: RootedTree) -> int:
    """Sum of the distances of all vertices from the root.  Exact."""
    return int(t.depth.sum())


def subtree_sizes(t: RootedTree) -> np.ndarray:
    """Number of vertices in the subtree hanging at each vertex (incl. it)."""
    sz = np.ones(t.n, dtype=np.int64)
    for v in t.order[::-1]:
        p = t.parent[v]
        if p >= 0:
            sz[p] += sz[v]
    return sz


def is_star(t: RootedTree) -> bool:
    """True when every non-root vertex is a child of the root."""
    return int(t.depth.max()) <= 1


def is_path(t: RootedTree) -> bool:
    """True when the tree is a path rooted at one of its endpoints."""
    return int(t.depth.max()) == t.n - 1


def bethe_order(p: int, k: int) -> int:
    """Order of the depth-``p``, branching-``k`` tree: (k**p - 1)/(k - 1)."""
    if p < 1:
        raise ValueError("p must be positive")
    if k < 2:
        raise ValueError("k must be at least 2")
    return (k ** p - 1) // (k - 1)


def bethe_moment_closed(p: int, k: int) -> int:
    """Closed-form moment of the depth-``p``, branching-``k`` tree.  Exact."""
    if p < 1:
        raise ValueError("p must be positive")
    if k < 2:
        raise ValueError("k must be at least 2")
    num = (2 * p * k ** (p + 1) - 3 * k ** (p + 1)
           - 2 * p * k ** p + k ** p + k * k + k)
    den = (k - 1) ** 2
    if num % den:
        raise ArithmeticError("closed form is not integral; p,k invalid")
    return num // den


def moment_sum_identity(parts) -> int:
    """Moment of a rooted sum from the parts' moments alone."""
    parts = list(parts)
    if not parts:
        raise ValueError("need at least one part")
    k = len(parts)
    n = 1 + sum(t.n for t in parts)
    return sum(moment(t) for t in parts) + 2 * n - 2 - k


def moment_product_identity(t1: RootedTree, t2: RootedTree) -> int:
    """Moment of a rooted product from factor moments and root-transmission."""
    return (moment(t1) + t1.n * moment(t2)
            + 2 * (t2.n - 1) * root_transmission(t1))


def moment_power_identity(t: RootedTree, k: int) -> int:
    """Moment of the k-th rooted power of a nontrivial tree, in closed form."""
    if t.n < 2:
        raise ValueError("base tree must be nontrivial")
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return 0
    n, mu, tau = t.n, moment(t), root_transmission(t)
    geom = (n ** k - 1) // (n - 1)
    return (mu - 2 * tau) * geom + 2 * tau * k * n ** (k - 1)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def tree_to_text(t: RootedTree) -> str:
    """Two-line text format: vertex count, then 1-based parents (0 = root).

    Bit-exact: the same tree always serializes to the same bytes.
    """
    ids = np.where(t.parent == NO_PARENT, 0, t.parent + 1)
    return f"{t.n}\n" + " ".join(str(int(v)) for v in ids) + "\n"


def tree_from_text(text: str) -> RootedTree:
    lines = text.split()
    if not lines:
        raise ValueError("empty tree file")
    n = int(lines[0])
    vals = [int(x) for x in lines[1:]]
    if len(vals) != n:
        raise ValueError(f"expected {n} parent entries, found {len(vals)}")
    parent = np.array(vals, dtype=np.int64) - 1
    return RootedTree(parent)


def tree_to_json(t: RootedTree) -> str:
    ids = [int(v) for v in np.where(t.parent == NO_PARENT, 0, t.parent + 1)]
    return json.dumps({"n": t.n, "parent": ids})


def tree_from_json(text: str) -> RootedTree:
    obj = json.loads(text)
    n = int(obj["n"])
    vals = [int(x) for x in obj["parent"]]
    if len(vals) != n:
        raise ValueError(f"expected {n} parent entries, found {len(vals)}")
    return RootedTree(np.array(vals, dtype=np.int64) - 1)


def parse_tree(text: str) -> RootedTree:
    """Parse either format; JSON is recognized by a leading brace."""
    if text.lstrip().startswith("{"):
        return tree_from_json(text)
    return tree_from_text(text)


def load_tree(filepath) -> RootedTree:
    with open(filepath, "r", encoding="ascii") as fh:
        return parse_tree(fh.read())


def save_tree(t: RootedTree, filepath, fmt: str = "text"):
    if fmt == "text":
        payload = tree_to_text(t)
    elif fmt == "json":
        payload = tree_to_json(t) + "\n"
    else:
        raise ValueError(f"unknown tree format {fmt!r}")
    with open(filepath, "w", encoding="ascii") as fh:
        fh.write(payload)
