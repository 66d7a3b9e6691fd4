# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled power-iteration kernels.

Same contracts and return convention as the pure-numpy reference in
``_ref.py``; all inner loops run in C.  Keep the two implementations in
sync -- the kernel test compares them on identical inputs.
"""

from libc.math cimport fabs, sqrt

import numpy as np


cdef double _dot(double[::1] x, double[::1] y) noexcept:
    # extended-precision accumulator: keeps the rounding floor of the
    # Rayleigh quotient and residual below 1e-12 even at multi-million n
    cdef Py_ssize_t i, n = x.shape[0]
    cdef long double acc = 0.0
    for i in range(n):
        acc += <long double> x[i] * y[i]
    return <double> acc


cdef void _uniform_start(double[::1] v) noexcept:
    cdef Py_ssize_t i, n = v.shape[0]
    cdef double s = 1.0 / sqrt(<double> n)
    for i in range(n):
        v[i] = s


cdef void _perturbed_start(double[::1] v) noexcept:
    cdef Py_ssize_t i, n = v.shape[0]
    cdef double nrm = 0.0
    for i in range(n):
        v[i] = 1.0 + (i + 1.0) / (n + 1.0)
        nrm += v[i] * v[i]
    nrm = sqrt(nrm)
    for i in range(n):
        v[i] /= nrm


# Below this order the matvec runs as a plain C loop; above it, a BLAS call
# through numpy is faster than anything hand-rolled.
DEF DENSE_LOOP_LIMIT = 256

# Stall detection, mirroring _ref: a residual that stops improving has hit
# the floating-point floor, so the run is reported unconverged right away.
DEF STALL_WINDOW = 200
DEF STALL_FACTOR = 1.0 - 1e-4


def power_iteration_dense(a, double shift=0.0, double tol=1e-12,
                          long max_iter=200000):
    """Dominant eigenvalue of ``a + shift * I`` for symmetric ``a``."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[:, ::1] A = a
    cdef Py_ssize_t n = A.shape[0]
    v_arr = np.empty(n, dtype=np.float64)
    w_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] v = v_arr
    cdef double[::1] w = w_arr
    _uniform_start(v)

    cdef bint small = n <= DENSE_LOOP_LIMIT
    cdef double lam = 0.0, resid = 0.0, best = -1.0, acc, nw, d
    cdef long double racc
    cdef Py_ssize_t i, j
    cdef long it = 0, stall = 0
    cdef bint restarted = False
    while it < max_iter:
        it += 1
        if small:
            for i in range(n):
                acc = 0.0
                for j in range(n):
                    acc += A[i, j] * v[j]
                w[i] = acc + shift * v[i]
        else:
            np.matmul(a, v_arr, out=w_arr)
            if shift != 0.0:
                for i in range(n):
                    w[i] += shift * v[i]
        lam = _dot(v, w)
        if it == 1 and lam <= 0.0 and not restarted:
            # No growth from the uniform start; retry once from the fixed
            # perturbed vector before trusting a degenerate direction.
            restarted = True
            it = 0
            _perturbed_start(v)
            continue
        racc = 0.0
        for i in range(n):
            d = w[i] - lam * v[i]
            racc += <long double> d * d
        resid = sqrt(<double> racc)
        if resid <= tol * fabs(lam) or resid == 0.0:
            return lam, v_arr.copy(), int(it), resid, True
        if best < 0.0 or resid < best * STALL_FACTOR:
            best = resid
            stall = 0
        else:
            stall += 1
            if stall >= STALL_WINDOW:
                return lam, v_arr.copy(), int(it), resid, False
        nw = sqrt(_dot(w, w))
        if nw == 0.0:
            return lam, v_arr.copy(), int(it), resid, True
        for i in range(n):
            v[i] = w[i] / nw
    return lam, v_arr.copy(), int(max_iter), resid, False


def power_iteration_tree(parent, order, depth, bint neckbottle=False,
                         double tol=1e-12, long max_iter=200000):
    """Dominant eigenvalue of the bottleneck (or common-descendant) matrix
    of a rooted tree, via O(n) subtree-sum / root-path-sum passes."""
    cdef const long long[::1] par = np.ascontiguousarray(parent, dtype=np.int64)
    cdef const long long[::1] bfs = np.ascontiguousarray(order, dtype=np.int64)
    cdef Py_ssize_t n = par.shape[0]
    v_arr = np.empty(n, dtype=np.float64)
    w_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] v = v_arr
    cdef double[::1] w = w_arr
    _uniform_start(v)

    cdef double lam = 0.0, resid = 0.0, best = -1.0, nw, d
    cdef long double racc
    cdef Py_ssize_t i, idx
    cdef long long u
    cdef long it = 0, stall = 0
    while it < max_iter:
        it += 1
        for i in range(n):
            w[i] = v[i]
        if neckbottle:
            for idx in range(1, n):          # root-path sums, roots first
                u = bfs[idx]
                w[u] += w[par[u]]
            for idx in range(n - 1, 0, -1):  # subtree sums, leaves first
                u = bfs[idx]
                w[par[u]] += w[u]
        else:
            for idx in range(n - 1, 0, -1):
                u = bfs[idx]
                w[par[u]] += w[u]
            for idx in range(1, n):
                u = bfs[idx]
                w[u] += w[par[u]]
        lam = _dot(v, w)
        racc = 0.0
        for i in range(n):
            d = w[i] - lam * v[i]
            racc += <long double> d * d
        resid = sqrt(<double> racc)
        if resid <= tol * fabs(lam) or resid == 0.0:
            return lam, v_arr.copy(), int(it), resid, True
        if best < 0.0 or resid < best * STALL_FACTOR:
            best = resid
            stall = 0
        else:
            stall += 1
            if stall >= STALL_WINDOW:
                return lam, v_arr.copy(), int(it), resid, False
        nw = sqrt(_dot(w, w))
        if nw == 0.0:
            return lam, v_arr.copy(), int(it), resid, True
        for i in range(n):
            v[i] = w[i] / nw
    return lam, v_arr.copy(), int(max_iter), resid, False
