"""Iteration kernels with a compiled fast path.

``_fast`` is a Cython extension built by ``setup.py build_ext --inplace``
(or any normal install).  When it is absent the pure-numpy reference in
``_ref`` serves the same contracts, so a source checkout works without a
compiler; ``BACKEND`` records which one is active.
"""

from . import _ref

try:
    from . import _fast  # type: ignore[attr-defined]
    _impl = _fast
    BACKEND = "compiled"
except ImportError:
    _fast = None
    _impl = _ref
    BACKEND = "python"

power_iteration_dense = _impl.power_iteration_dense
power_iteration_tree = _impl.power_iteration_tree


def backends():
    """Importable kernel implementations, by name (for tests/benchmarks)."""
    out = {"python": _ref}
    if _fast is not None:
        out["compiled"] = _fast
    return out
