"""
Tests for the F_d, C5 and P* constructions and the minimum-degree pipeline.
"""

import unittest
from collections import Counter
from fractions import Fraction

from hypothesis import given, strategies as st
from parameterized import parameterized

from common.seed import make_rng
from halves.construction import (
    PSTAR_UNIFORMITY,
    FdWeighting,
    best_sparse_half_fd,
    c5_balance_inequality,
    c5_uniform_distribution,
    close_approximation_constants,
    construct_fd_halves,
    pstar_half_families,
    pstar_uniform_distribution,
    run_min_degree_pipeline,
    sparse_half_min_degree,
    uniform_transfer_eps,
)
from halves.errors import HypothesisViolationError, InvalidArgumentError
from halves.fd_family import make_fd, make_petersen, make_pstar
from halves.graph import blowup, complete_bipartite, induced_edge_count
from halves.sampling import sample_balanced_c5, sample_balanced_pstar, sample_fd_weighting
from halves.weighted import SPARSE_BOUND, WeightFunction, certify, edge_mass, expected_edge_mass


class TestFdHalves(unittest.TestCase):
    @parameterized.expand(
        [
            (1, Fraction(0)),
            (2, Fraction(1, 50)),
            (3, Fraction(5, 256)),
            (4, Fraction(33, 1936)),
            (5, Fraction(3, 196)),
        ]
    )
    def test_uniform_weighting(self, d, mass):
        self.assertEqual(edge_mass(best_sparse_half_fd(FdWeighting.uniform(d))), mass)

    @given(st.integers(1, 4), st.integers(0, 10_000))
    def test_sampled_weightings(self, d, seed):
        fw = sample_fd_weighting(d, make_rng(seed))
        self.assertGreaterEqual(fw.min_degree, Fraction(5, 14))
        self.assertEqual(sum(fw.w), 1)
        half = best_sparse_half_fd(fw)
        self.assertLessEqual(edge_mass(half), SPARSE_BOUND)

    def test_every_constructed_half_is_valid(self):
        fw = sample_fd_weighting(3, make_rng(7))
        for half in construct_fd_halves(fw):
            self.assertEqual(sum(half.s), Fraction(1, 2))

    def test_rejects_large_d(self):
        with self.assertRaises(InvalidArgumentError):
            construct_fd_halves(FdWeighting.uniform(6))

    def test_rejects_low_min_degree(self):
        w = (Fraction(1, 2), Fraction(1, 2)) + (Fraction(0),) * 6
        with self.assertRaises(HypothesisViolationError):
            construct_fd_halves(FdWeighting(3, w))

    @parameterized.expand(
        [
            ("shifted", (Fraction(9, 100), Fraction(37, 700)) + (Fraction(1, 14),) * 12),
            ("half_on_seven", (Fraction(1, 7),) * 7 + (Fraction(0),) * 7),
        ]
    )
    def test_f5_needs_uniform_weighting(self, _, w):
        with self.assertRaises(HypothesisViolationError):
            construct_fd_halves(FdWeighting(5, w))

    def test_rejects_wrong_length(self):
        with self.assertRaises(InvalidArgumentError):
            FdWeighting(3, (Fraction(1, 7),) * 7)


class TestC5Distribution(unittest.TestCase):
    def test_uniform(self):
        dist = c5_uniform_distribution(WeightFunction.uniform(make_fd(2)))
        self.assertEqual(len(dist.halves), 5)
        self.assertEqual(expected_edge_mass(dist), Fraction(1, 50))

    @given(st.integers(0, 10_000))
    def test_balanced_samples(self, seed):
        dist = c5_uniform_distribution(sample_balanced_c5(make_rng(seed)))
        self.assertLessEqual(expected_edge_mass(dist), SPARSE_BOUND)

    def test_rejects_unbalanced(self):
        fifth = Fraction(1, 5)
        w = (fifth + Fraction(1, 25), fifth - Fraction(1, 25), fifth, fifth, fifth)
        with self.assertRaises(HypothesisViolationError):
            c5_uniform_distribution(WeightFunction(make_fd(2), w))

    def test_rejects_other_graph(self):
        with self.assertRaises(InvalidArgumentError):
            c5_uniform_distribution(WeightFunction.uniform(make_petersen()))

    def test_balance_inequality(self):
        self.assertTrue(c5_balance_inequality(Fraction(1, 50)))
        self.assertFalse(c5_balance_inequality(Fraction(1, 10)))


class TestPStar(unittest.TestCase):
    def test_families(self):
        families = pstar_half_families()
        self.assertEqual(len(families), 20)
        self.assertEqual(Counter(f.star for f in families), {i: 4 for i in range(10, 15)})
        petersen = make_petersen()
        for family in families:
            self.assertEqual(induced_edge_count(petersen, family.triple), 0)
            self.assertNotEqual(family.star, family.partner)

    def test_uniform_base(self):
        star = make_pstar()
        w = (Fraction(1, 10),) * 10 + (Fraction(0),) * 5
        dist = pstar_uniform_distribution(WeightFunction(star.extension, w))
        self.assertEqual(expected_edge_mass(dist), Fraction(1, 50))

    @given(st.integers(0, 10_000))
    def test_balanced_samples(self, seed):
        dist = pstar_uniform_distribution(sample_balanced_pstar(make_rng(seed)))
        self.assertTrue(certify(dist, PSTAR_UNIFORMITY).passed)


class TestPipeline(unittest.TestCase):
    @parameterized.expand(
        [
            ("c5", blowup(make_fd(2), [2] * 5)[0]),
            ("kbip", complete_bipartite(3, 3)),
            ("f3", blowup(make_fd(3), [2] * 8)[0]),
        ]
    )
    def test_blowups(self, _, g):
        result = run_min_degree_pipeline(g)
        self.assertIn(result.d, range(1, 6))
        self.assertEqual(len(result.vertices), g.n // 2)
        self.assertEqual(result.edges, induced_edge_count(g, result.vertices))
        self.assertLessEqual(50 * result.edges, g.n**2)

    def test_f5(self):
        g = make_fd(5)
        vertices = sparse_half_min_degree(g)
        self.assertEqual(len(vertices), 7)
        self.assertLessEqual(induced_edge_count(g, vertices), 3)

    def test_bipartite_is_fd1_type(self):
        self.assertEqual(run_min_degree_pipeline(complete_bipartite(3, 3)).d, 1)

    def test_any_solution(self):
        g, _ = blowup(make_fd(4), [2] * 11)
        result = run_min_degree_pipeline(g, any_solution=True)
        self.assertLessEqual(50 * result.edges, g.n**2)

    def test_rejects_low_min_degree(self):
        with self.assertRaises(HypothesisViolationError):
            run_min_degree_pipeline(make_petersen())


class TestConstants(unittest.TestCase):
    def test_uniform_transfer_eps(self):
        self.assertEqual(uniform_transfer_eps(Fraction(1, 30)), Fraction(1, 1860))

    def test_close_approximation_constants(self):
        self.assertEqual(close_approximation_constants(5, Fraction(1, 30)), (Fraction(1, 1860), Fraction(1, 30)))


if __name__ == "__main__":
    unittest.main()
