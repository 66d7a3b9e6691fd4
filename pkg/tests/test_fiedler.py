"""Branch decomposition, type I/II classification, symmetric-family bounds."""

import math

import numpy as np
import pytest

import perrontree as pt
from perrontree.errors import ClassificationAmbiguityError
from perrontree.fiedler import TYPE_I, TYPE_II
from perrontree.matrices import bottleneck_matrix
from perrontree.spectral import symmetric_max_eig


def fuzz_graphs(count, max_n, seed, min_n=3):
    rng = pt.Splitmix64(seed)
    return [pt.unroot(pt.random_tree(min_n + rng.below(max_n - min_n + 1),
                                     rng.next_u64())) for _ in range(count)]


class TestBranches:
    def test_path_center(self):
        g = pt.unroot(pt.path(3))
        branches = pt.branches_at(g, 1)
        assert [b.tree.n for b in branches] == [1, 1]

    def test_star_center(self):
        g = pt.unroot(pt.star(5))
        branches = pt.branches_at(g, 0)
        assert [b.tree.n for b in branches] == [1, 1, 1, 1]

    def test_path_interior(self):
        g = pt.unroot(pt.path(5))
        branches = pt.branches_at(g, 1)
        assert sorted(b.tree.n for b in branches) == [1, 3]
        big = max(branches, key=lambda b: b.tree.n)
        assert pt.is_path(big.tree)
        # local root is the neighbor of the removed vertex
        assert int(big.vertices[big.tree.root]) == 2
        assert sorted(int(v) for b in branches for v in b.vertices) \
            == [0, 2, 3, 4]

    def test_invalid_vertex(self):
        with pytest.raises(ValueError):
            pt.branches_at(pt.unroot(pt.path(3)), 5)


class TestClassify:
    def test_odd_path_is_type_one(self):
        c = pt.classify(pt.unroot(pt.path(3)))
        assert c.kind == TYPE_I
        assert c.characteristic == (1,)
        assert c.algebraic_connectivity == pytest.approx(1.0, rel=1e-12)
        assert c.beta is None

    def test_star_is_type_one_at_center(self):
        c = pt.classify(pt.unroot(pt.star(6)))
        assert c.kind == TYPE_I and c.characteristic == (0,)
        assert c.algebraic_connectivity == pytest.approx(1.0, rel=1e-12)
        assert len(c.perron_branch_roots) == 5

    def test_even_path_is_type_two(self):
        c = pt.classify(pt.unroot(pt.path(4)))
        assert c.kind == TYPE_II
        assert c.characteristic == (1, 2)
        assert c.beta == pytest.approx(0.5, abs=1e-9)
        assert c.algebraic_connectivity == pytest.approx(
            2.0 - math.sqrt(2.0), abs=1e-9)

    def test_edge_tree(self):
        c = pt.classify(pt.unroot(pt.path(2)))
        assert c.kind == TYPE_II and c.characteristic == (0, 1)
        assert c.algebraic_connectivity == pytest.approx(2.0, rel=1e-9)
        assert c.beta == pytest.approx(0.5, abs=1e-9)

    def test_single_vertex_rejected(self):
        with pytest.raises(ValueError):
            pt.classify(pt.UnrootedTree(1, []))

    @pytest.mark.parametrize("n", [4, 6, 8, 10])
    def test_mirror_symmetric_beta_is_half(self, n):
        c = pt.classify(pt.unroot(pt.path(n)))
        assert c.kind == TYPE_II
        assert c.beta == pytest.approx(0.5, abs=1e-9)

    def test_loose_tolerance_raises_ambiguity(self):
        with pytest.raises(ClassificationAmbiguityError):
            pt.classify(pt.unroot(pt.path(4)), tol=0.99)

    def test_oracle_agreement_fuzz(self):
        for g in fuzz_graphs(30, 200, seed=51):
            c = pt.classify(g)
            oracle = pt.algebraic_connectivity_oracle(g)
            assert c.kind in (TYPE_I, TYPE_II)
            assert c.algebraic_connectivity == pytest.approx(oracle, rel=1e-7)

    def test_type_two_balance_invariant(self):
        # at the returned split parameter the two shifted eigenvalues agree
        checked = 0
        for g in fuzz_graphs(24, 80, seed=52):
            c = pt.classify(g)
            if c.kind != TYPE_II:
                continue
            p, q = c.characteristic
            assert 0.0 < c.beta < 1.0
            bp = next(b for b in pt.branches_at(g, p)
                      if int(b.vertices[0]) == q)
            bq = next(b for b in pt.branches_at(g, q)
                      if int(b.vertices[0]) == p)
            mp = bottleneck_matrix(bp.tree).astype(float)
            mq = bottleneck_matrix(bq.tree).astype(float)
            lp = symmetric_max_eig(mp - c.beta * np.ones_like(mp))
            lq = symmetric_max_eig(mq - (1 - c.beta) * np.ones_like(mq))
            assert abs(lp - lq) <= 1e-9 * max(1.0, abs(lp))
            assert c.algebraic_connectivity == pytest.approx(1.0 / lp,
                                                             rel=1e-9)
            checked += 1
        assert checked >= 5


class TestOracle:
    def test_known_spectra(self):
        assert pt.algebraic_connectivity_oracle(
            pt.unroot(pt.path(2))) == pytest.approx(2.0)
        assert pt.algebraic_connectivity_oracle(
            pt.unroot(pt.path(3))) == pytest.approx(1.0)
        assert pt.algebraic_connectivity_oracle(
            pt.unroot(pt.star(4))) == pytest.approx(1.0)

    def test_single_vertex_rejected(self):
        with pytest.raises(ValueError):
            pt.algebraic_connectivity_oracle(pt.UnrootedTree(1, []))


class TestBetheBounds:
    def test_base_equalities(self):
        assert pt.bethe_alg_conn_lower(2, 2) == pytest.approx(1.0)
        assert pt.bethe_alg_conn_exact(2, 2) == pytest.approx(1.0)
        assert pt.bethe_rho_upper(1, 3) == pytest.approx(1.0)

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            pt.bethe_alg_conn_lower(1, 3)
        with pytest.raises(ValueError):
            pt.bethe_rho_upper(0, 3)
        with pytest.raises(ValueError):
            pt.bethe_rho_upper(2, 1)

    def test_connectivity_bound_below_exact(self):
        for p in range(2, 7):
            for k in range(2, 7):
                exact = pt.bethe_alg_conn_exact(p, k)
                assert pt.bethe_alg_conn_lower(p, k) <= exact + 1e-9 * exact

    def test_eigenvalue_bound_above_computed(self):
        for p in range(1, 7):
            for k in range(2, 7):
                order = pt.bethe_order(p, k)
                rho = pt.perron_value(pt.bethe(p, k, max_vertices=order)).rho
                assert rho <= pt.bethe_rho_upper(p, k) + 1e-9 * rho

    def test_exact_connectivity_matches_classifier(self):
        # the classifier agrees with the symmetry shortcut on a small case
        c = pt.classify(pt.unroot(pt.bethe(3, 2)))
        assert c.kind == TYPE_I
        assert c.algebraic_connectivity == pytest.approx(
            pt.bethe_alg_conn_exact(3, 2), rel=1e-10)
