"""Backend parity: the compiled kernels must match the numpy reference."""

import numpy as np
import pytest

import perrontree as pt
from perrontree import _kernels

BACKENDS = _kernels.backends()
needs_compiled = pytest.mark.skipif(
    "compiled" not in BACKENDS,
    reason="compiled kernel not built (run setup.py build_ext --inplace)")


def tree_inputs(t):
    return t.parent, t.order, t.depth


class TestContracts:
    def test_dense_converges_with_certified_residual(self):
        m = pt.bottleneck_matrix(pt.random_tree(80, 1)).astype(float)
        for impl in BACKENDS.values():
            lam, v, it, res, ok = impl.power_iteration_dense(m, 0.0, 1e-12,
                                                             200000)
            assert ok and it >= 1
            assert res <= 1e-12 * lam
            assert abs(np.linalg.norm(v) - 1.0) < 1e-12
            assert np.all(v > 0)

    def test_unconverged_flag(self):
        m = pt.bottleneck_matrix(pt.path(60)).astype(float)
        for impl in BACKENDS.values():
            lam, v, it, res, ok = impl.power_iteration_dense(m, 0.0, 1e-12, 2)
            assert not ok and it == 2

    def test_tree_operator_matches_dense_matrix(self):
        for seed in range(6):
            t = pt.random_tree(200, seed)
            m = pt.bottleneck_matrix(t).astype(float)
            q = pt.neckbottle_matrix(t).astype(float)
            for impl in BACKENDS.values():
                lam_m, *_ = impl.power_iteration_dense(m, 0.0, 1e-12, 200000)
                lam_t, *_, ok = impl.power_iteration_tree(
                    *tree_inputs(t), False, 1e-12, 200000)
                assert ok
                assert lam_t == pytest.approx(lam_m, rel=1e-11)
                lam_q, *_, ok = impl.power_iteration_tree(
                    *tree_inputs(t), True, 1e-12, 200000)
                assert ok
                lam_qd, *_ = impl.power_iteration_dense(q, 0.0, 1e-12, 200000)
                assert lam_q == pytest.approx(lam_qd, rel=1e-11)

    def test_shift_moves_spectrum_only(self):
        m = pt.bottleneck_matrix(pt.star(5)).astype(float)
        for impl in BACKENDS.values():
            plain, *_ = impl.power_iteration_dense(m, 0.0, 1e-12, 200000)
            shifted, *_ = impl.power_iteration_dense(m, 3.0, 1e-12, 200000)
            assert shifted - 3.0 == pytest.approx(plain, rel=1e-11)


@needs_compiled
class TestBackendParity:
    def test_dense_values_agree(self):
        for seed in range(8):
            t = pt.random_tree(30 + 40 * seed, seed)
            m = pt.bottleneck_matrix(t).astype(float)
            lam_py, vp, *_ = BACKENDS["python"].power_iteration_dense(
                m, 0.0, 1e-12, 200000)
            lam_c, vc, *_ = BACKENDS["compiled"].power_iteration_dense(
                m, 0.0, 1e-12, 200000)
            assert lam_c == pytest.approx(lam_py, rel=1e-12)
            assert abs(float(vp @ vc)) == pytest.approx(1.0, abs=1e-9)

    def test_shifted_values_agree(self):
        m = np.array([[0.5, 0.5], [0.5, 1.5]])
        out = {name: impl.power_iteration_dense(m, 2.0, 1e-13, 200000)[0]
               for name, impl in BACKENDS.items()}
        assert out["compiled"] == pytest.approx(out["python"], rel=1e-12)

    def test_tree_values_agree(self):
        for t in (pt.bethe(5, 3), pt.rooted_power(pt.path(2), 10),
                  pt.random_tree(3000, 9)):
            for neckbottle in (False, True):
                lam_py, *_ = BACKENDS["python"].power_iteration_tree(
                    *tree_inputs(t), neckbottle, 1e-12, 200000)
                lam_c, *_ = BACKENDS["compiled"].power_iteration_tree(
                    *tree_inputs(t), neckbottle, 1e-12, 200000)
                assert lam_c == pytest.approx(lam_py, rel=1e-11)

    def test_active_backend_reported(self):
        assert pt.KERNEL_BACKEND in BACKENDS
