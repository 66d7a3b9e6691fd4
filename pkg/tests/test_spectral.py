"""Dominant eigenpairs, entropy, closed forms, Rayleigh bound."""

import math

import numpy as np
import pytest

import perrontree as pt
from perrontree.errors import PowerIterationError

RHO_S3 = 2.0 + math.sqrt(3.0)
RHO_P2 = (3.0 + math.sqrt(5.0)) / 2.0


def fuzz_trees(count, max_n, seed, min_n=1):
    rng = pt.Splitmix64(seed)
    return [pt.random_tree(min_n + rng.below(max_n - min_n + 1),
                           rng.next_u64()) for _ in range(count)]


def eig_oracle(m):
    return float(np.linalg.eigvalsh(np.asarray(m, dtype=float))[-1])


class TestPerron:
    def test_known_values(self):
        r = pt.perron(pt.bottleneck_matrix(pt.star(3)))
        assert r.rho == pytest.approx(RHO_S3, rel=1e-12)
        assert np.all(r.vector > 0)
        assert abs(np.linalg.norm(r.vector) - 1.0) < 1e-12
        assert r.residual <= 1e-12 * r.rho

        assert pt.perron(np.array([[1]])).rho == 1.0
        assert pt.perron(pt.bottleneck_matrix(pt.path(2))).rho \
            == pytest.approx(RHO_P2, rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            pt.perron(np.ones((2, 3)))
        with pytest.raises(ValueError):
            pt.perron(np.array([[1.0, 2.0], [2.0 + 1e-15, 1.0]]))
        with pytest.raises(ValueError):
            pt.perron(np.array([[1.0, -0.5], [-0.5, 1.0]]))

    def test_iteration_limit_carries_best(self):
        m = pt.bottleneck_matrix(pt.path(60)).astype(float)
        with pytest.raises(PowerIterationError) as info:
            pt.perron(m, max_iter=2)
        best = info.value.best
        assert best is not None and best.iterations == 2
        assert best.rho == pytest.approx(eig_oracle(m), rel=1e-2)

    def test_matches_dense_oracle_fuzz(self):
        for t in fuzz_trees(25, 200, seed=41):
            m = pt.bottleneck_matrix(t)
            assert pt.perron_value(t).rho == pytest.approx(
                eig_oracle(m), rel=1e-10)

    def test_neckbottle_route_agrees(self):
        for t in fuzz_trees(15, 300, seed=42, min_n=2):
            a = pt.perron_value(t).rho
            b = pt.perron_value(t, use_neckbottle=True).rho
            assert b == pytest.approx(a, rel=1e-9)

    def test_trivial_tree(self):
        r = pt.perron_value(pt.star(1))
        assert r.rho == 1.0 and r.vector.tolist() == [1.0]


class TestSymmetricMaxEig:
    def test_shifted_two_by_two(self):
        m = np.array([[0.5, 0.5], [0.5, 1.5]])
        assert pt.symmetric_max_eig(m) == pytest.approx(
            (2.0 + math.sqrt(2.0)) / 2.0, rel=1e-12)

    def test_identity(self):
        assert pt.symmetric_max_eig(np.eye(3)) == pytest.approx(1.0, abs=1e-12)

    def test_agrees_with_perron_on_nonnegative(self):
        m = pt.bottleneck_matrix(pt.star(3)).astype(float)
        assert pt.symmetric_max_eig(m) == pytest.approx(
            pt.perron(m).rho, rel=1e-11)

    def test_negative_definite_via_fallback(self):
        # -I shifts to the zero matrix: both starts are kernel vectors
        assert pt.symmetric_max_eig(-np.eye(4)) == pytest.approx(-1.0)

    def test_indefinite_fuzz_against_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            n = int(rng.integers(2, 40))
            m = rng.normal(size=(n, n))
            m = (m + m.T) / 2
            assert pt.symmetric_max_eig(m) == pytest.approx(
                eig_oracle(m), rel=1e-9, abs=1e-9)

    def test_validation(self):
        with pytest.raises(ValueError):
            pt.symmetric_max_eig(np.array([[0.0, 1.0], [0.5, 0.0]]))


class TestClosedForms:
    def test_base_cases(self):
        assert pt.rho_star_closed(1) == pytest.approx(1.0)
        assert pt.rho_path_closed(1) == pytest.approx(1.0)
        assert pt.entropy_path_closed(1) == pytest.approx(1.0)
        assert pt.entropy_star_closed(1) == 1.0

    def test_invalid_order(self):
        for fn in (pt.rho_star_closed, pt.rho_path_closed,
                   pt.entropy_path_closed, pt.entropy_star_closed,
                   pt.perron_vector_path_closed):
            with pytest.raises(ValueError):
                fn(0)

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 10, 25, 60])
    def test_star_and_path_eigenvalues(self, n):
        assert pt.perron_value(pt.star(n)).rho == pytest.approx(
            pt.rho_star_closed(n), rel=1e-10)
        assert pt.perron_value(pt.path(n)).rho == pytest.approx(
            pt.rho_path_closed(n), rel=1e-10)

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 10, 25, 60])
    def test_star_and_path_entropies(self, n):
        assert pt.perron_entropy(pt.star(n)).h == pytest.approx(
            pt.entropy_star_closed(n), rel=1e-9)
        assert pt.perron_entropy(pt.path(n)).h == pytest.approx(
            pt.entropy_path_closed(n), rel=1e-9)

    def test_path_eigenvector_direction(self):
        w = pt.perron_vector_path_closed(3)
        computed = pt.perron_value(pt.path(3)).vector
        assert np.allclose(w / np.linalg.norm(w), computed, atol=1e-9)

    def test_star_eigenvector_structure(self):
        # eigenvector of the star is rho on every leaf slot, rho - 1 at root
        r = pt.perron_value(pt.star(5))
        v = r.vector / r.vector[1]
        assert v[0] == pytest.approx(1.0 - 1.0 / r.rho, rel=1e-10)
        assert np.allclose(v[1:], 1.0, atol=1e-10)


class TestEntropy:
    def test_trivial_tree_exact(self):
        assert pt.perron_entropy(pt.star(1)).h == 1.0

    def test_known_star_value(self):
        assert pt.perron_entropy(pt.star(2)).h == pytest.approx(
            1.8944271910, abs=1e-9)

    def test_range_fuzz(self):
        for t in fuzz_trees(30, 120, seed=43):
            h = pt.perron_entropy(t).h
            assert 1.0 - 1e-9 <= h <= t.n + 1e-9

    def test_longer_path_beats_near_path(self):
        # entropy usually sinks as diameter grows at fixed order, but the
        # 9-vertex path beats the path-with-one-pendant tree
        h_path = pt.perron_entropy(pt.path(9)).h
        h_mod = pt.perron_entropy(pt.RootedTree([-1, 0, 1, 2, 3, 4, 5, 6, 1])).h
        assert h_path == pytest.approx(7.665, abs=5e-3)
        assert h_mod == pytest.approx(7.660, abs=5e-3)
        assert h_path > h_mod


class TestRayleighBound:
    def test_known_values(self):
        assert pt.rayleigh_lower_bound(pt.star(1)) == pytest.approx(1.0)
        assert pt.rayleigh_lower_bound(pt.star(3)) == pytest.approx(11.0 / 3.0)
        assert pt.rayleigh_lower_bound(pt.path(2)) == pytest.approx(2.5)

    def test_matches_matrix_total(self):
        for t in fuzz_trees(20, 100, seed=44):
            assert pt.rayleigh_lower_bound(t) == pytest.approx(
                int(pt.bottleneck_matrix(t).sum()) / t.n, rel=1e-12)

    def test_below_dominant_eigenvalue(self):
        for t in fuzz_trees(30, 120, seed=45):
            rho = pt.perron_value(t).rho
            assert pt.rayleigh_lower_bound(t) <= rho + 1e-9 * rho
