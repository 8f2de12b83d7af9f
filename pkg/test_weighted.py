"""
Tests for weight functions, halves, pushforwards, lifts and rounding.
"""

import unittest
from fractions import Fraction

from hypothesis import given, strategies as st

from halves.construction import FdWeighting, construct_fd_halves
from halves.errors import DegenerateFiberError, InvalidArgumentError, InvalidHalfError
from halves.fd_family import make_fd
from halves.graph import blowup, empty, induced_edge_count
from halves.homomorphism import Homomorphism
from halves.rational import (
    above_sqrt_multiple,
    at_least_sqrt_multiple,
    format_fraction,
    parse_fraction,
    sqrt_lower,
    sqrt_upper,
)
from halves.weighted import (
    Half,
    HalfDistribution,
    WeightFunction,
    certify,
    edge_mass,
    fiber_sums,
    half_from_set,
    is_sparse_half,
    lift_half,
    pushforward,
    round_half_to_set,
    weighted_min_degree,
)

C5 = make_fd(2)
FIFTH = Fraction(1, 5)


def c5_half(start: int = 0) -> Half:
    uniform = WeightFunction.uniform(C5)
    return Half.from_mapping(uniform, {start: FIFTH, (start + 1) % 5: FIFTH, (start + 2) % 5: FIFTH / 2})


class TestWeightFunction(unittest.TestCase):
    def test_rejects_bad_sum(self):
        with self.assertRaises(InvalidArgumentError):
            WeightFunction(C5, (FIFTH,) * 4 + (Fraction(1, 10),))

    def test_rejects_negative(self):
        with self.assertRaises(InvalidArgumentError):
            WeightFunction(C5, (Fraction(2, 5), Fraction(2, 5), FIFTH, FIFTH, -FIFTH))

    def test_rejects_wrong_length(self):
        with self.assertRaises(InvalidArgumentError):
            WeightFunction(C5, (Fraction(1, 4),) * 4)

    def test_zero_weights_allowed(self):
        wf = WeightFunction(C5, (Fraction(1, 2), 0, Fraction(1, 2), 0, 0))
        self.assertEqual(wf.degree(0), Fraction(1, 2))
        self.assertFalse(wf.is_uniform)

    def test_min_degree_of_uniform_f5(self):
        self.assertEqual(weighted_min_degree(FdWeighting.uniform(5).weights), Fraction(5, 14))


class TestHalf(unittest.TestCase):
    def test_rejects_value_above_weight(self):
        with self.assertRaises(InvalidHalfError):
            Half.from_mapping(WeightFunction.uniform(C5), {0: Fraction(1, 4), 1: Fraction(1, 4)})

    def test_rejects_wrong_total(self):
        with self.assertRaises(InvalidHalfError):
            Half.from_mapping(WeightFunction.uniform(C5), {0: FIFTH, 1: FIFTH})

    def test_edge_mass(self):
        half = c5_half()
        self.assertEqual(edge_mass(half), Fraction(1, 50))
        self.assertTrue(is_sparse_half(half))
        self.assertEqual(half.support, (0, 1, 2))

    def test_half_from_set(self):
        wf = WeightFunction(C5, (Fraction(1, 4), Fraction(1, 4), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8)))
        self.assertEqual(edge_mass(half_from_set(wf, [0, 1])), 0)
        with self.assertRaises(InvalidHalfError):
            half_from_set(wf, [0])


class TestDistribution(unittest.TestCase):
    def test_c5_certificate(self):
        dist = HalfDistribution.uniform([c5_half(i) for i in range(5)])
        certificate = certify(dist, Fraction(1, 30))
        self.assertEqual(certificate.expected_edge_mass, Fraction(1, 50))
        self.assertEqual(certificate.uniformity_constant, Fraction(1, 10))
        self.assertTrue(certificate.passed)

    def test_edgeless_certificate_is_vacuous(self):
        wf = WeightFunction.uniform(empty(2))
        dist = HalfDistribution.uniform([half_from_set(wf, [0])])
        certificate = certify(dist, Fraction(1, 2))
        self.assertIsNone(certificate.uniformity_constant)
        self.assertEqual(certificate.expected_edge_mass, 0)
        self.assertTrue(certificate.uniform)

    def test_rejects_bad_probabilities(self):
        with self.assertRaises(InvalidArgumentError):
            HalfDistribution(((c5_half(0), Fraction(1, 2)), (c5_half(1), Fraction(1, 3))))

    def test_rejects_mixed_graphs(self):
        other = Half.from_mapping(WeightFunction.uniform(make_fd(1)), {0: Fraction(1, 2)})
        with self.assertRaises(InvalidArgumentError):
            HalfDistribution.uniform([c5_half(), other])


class TestLift(unittest.TestCase):
    def setUp(self):
        self.g, self.partition = blowup(C5, [2] * 5)
        self.phi = Homomorphism.projection(self.g, C5, self.partition)
        self.uniform = WeightFunction.uniform(self.g)

    def test_pushforward_of_balanced_blowup_is_uniform(self):
        self.assertTrue(pushforward(self.uniform, self.phi).is_uniform)

    def test_lift_keeps_edge_mass(self):
        half = c5_half()
        lifted = lift_half(half, self.phi, self.uniform)
        self.assertEqual(edge_mass(lifted), edge_mass(half))
        self.assertEqual(fiber_sums(lifted, self.phi), list(half.s))

    def test_rounding(self):
        lifted = lift_half(c5_half(), self.phi, self.uniform)
        vertices = round_half_to_set(lifted)
        self.assertEqual(len(vertices), 5)
        self.assertLessEqual(50 * induced_edge_count(self.g, vertices), self.g.n**2)

    def test_degenerate_fiber(self):
        wf = WeightFunction(C5, (Fraction(1, 2), 0, Fraction(1, 2), 0, 0))
        identity = Homomorphism(C5, C5, tuple(range(5)))
        with self.assertRaises(DegenerateFiberError):
            lift_half(c5_half(), identity, wf)

    def test_rounding_rejects_dense_half(self):
        dense = Half.from_mapping(WeightFunction.uniform(C5), {0: FIFTH, 2: FIFTH, 4: FIFTH / 2})
        self.assertFalse(is_sparse_half(dense))
        with self.assertRaises(InvalidHalfError):
            round_half_to_set(dense)

    def test_rounding_rejects_weighted_half(self):
        wf = WeightFunction(C5, (Fraction(1, 4), Fraction(1, 4), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8)))
        with self.assertRaises(InvalidHalfError):
            round_half_to_set(half_from_set(wf, [0, 1]))

    @given(st.lists(st.integers(1, 4), min_size=5, max_size=5))
    def test_rounding_on_uneven_blowups(self, sizes):
        g, partition = blowup(C5, sizes)
        phi = Homomorphism.projection(g, C5, partition)
        uniform = WeightFunction.uniform(g)
        pushed = pushforward(uniform, phi)
        for half in construct_fd_halves(FdWeighting(2, pushed.w)):
            if edge_mass(half) > Fraction(1, 50):
                continue
            vertices = round_half_to_set(lift_half(half, phi, uniform))
            self.assertEqual(len(vertices), g.n // 2)
            self.assertLessEqual(50 * induced_edge_count(g, vertices), g.n**2)


class TestRational(unittest.TestCase):
    def test_sqrt_comparisons(self):
        self.assertTrue(at_least_sqrt_multiple(1, Fraction(1, 4), 2))
        self.assertFalse(above_sqrt_multiple(1, Fraction(1, 4), 2))
        self.assertTrue(above_sqrt_multiple(Fraction(3, 2), 2))
        self.assertFalse(at_least_sqrt_multiple(-1, 0))

    @given(st.fractions(min_value=0, max_value=100, max_denominator=1000))
    def test_sqrt_bounds(self, q):
        self.assertLessEqual(sqrt_lower(q) ** 2, q)
        self.assertGreaterEqual(sqrt_upper(q) ** 2, q)
        self.assertLessEqual(sqrt_upper(q) - sqrt_lower(q), Fraction(1, 10**9))

    def test_parse_and_format(self):
        self.assertEqual(parse_fraction("3/6"), Fraction(1, 2))
        self.assertEqual(parse_fraction("0.25"), Fraction(1, 4))
        self.assertEqual(format_fraction(Fraction(4, 2)), "2")
        self.assertIsNone(format_fraction(None))
        with self.assertRaises(InvalidArgumentError):
            parse_fraction("1/0")


if __name__ == "__main__":
    unittest.main()
