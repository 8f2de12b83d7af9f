"""
Tests for homomorphism search, F_d reduction, strong maps and disturbed pairs.
"""

import unittest
from dataclasses import replace
from fractions import Fraction

from hypothesis import given, strategies as st
from parameterized import parameterized

from common.seed import make_rng
from halves.errors import (
    HypothesisViolationError,
    InconsistentInputError,
    InvalidArgumentError,
    NotApplicableError,
    PreconditionViolationError,
    ResourceLimitError,
)
from halves.fd_family import fd_order, make_fd, make_petersen
from halves.graph import (
    Graph,
    Partition,
    blowup,
    complete,
    complete_bipartite,
    cycle,
    empty,
    path,
    random_triangle_free_flips,
)
from halves.homomorphism import (
    Homomorphism,
    build_disturbed_pair,
    desurject_reduce,
    disturbed_eps,
    disturbed_parameters,
    find_homomorphism,
    first_strong_violation,
    is_strong_homomorphism,
    surjective_homomorphism_to_fd,
    verify_disturbed,
)


class TestFindHomomorphism(unittest.TestCase):
    def test_odd_cycle_is_not_bipartite(self):
        self.assertIsNone(find_homomorphism(cycle(5), make_fd(1)))

    def test_lexicographically_first(self):
        phi = find_homomorphism(cycle(6), make_fd(1))
        self.assertEqual(phi.map, (0, 1, 0, 1, 0, 1))

    def test_components_are_solved_separately(self):
        g = cycle(6).disjoint_union(make_fd(2))
        phi = find_homomorphism(g, make_fd(2))
        self.assertTrue(phi.is_edge_preserving())

    @given(st.lists(st.integers(1, 3), min_size=5, max_size=5), st.booleans())
    def test_blowups_map_to_their_template(self, sizes, any_solution):
        g, _ = blowup(make_fd(2), sizes)
        phi = find_homomorphism(g, make_fd(2), any_solution)
        self.assertIsNotNone(phi)
        self.assertTrue(phi.is_edge_preserving())
        self.assertTrue(phi.is_surjective())

    def test_guard(self):
        with self.assertRaises(ResourceLimitError):
            find_homomorphism(empty(201), make_fd(1))

    def test_rejects_bad_map(self):
        with self.assertRaises(InvalidArgumentError):
            Homomorphism(cycle(5), make_fd(2), (0, 1, 2))
        with self.assertRaises(InvalidArgumentError):
            Homomorphism(make_fd(1), make_fd(1), (0, 2))


class TestReduction(unittest.TestCase):
    @parameterized.expand([(d, r) for d in range(2, 6) for r in range(fd_order(d))])
    def test_inclusion_of_punctured_fd(self, d, removed):
        sub, labels = make_fd(d).induced_subgraph(v for v in range(fd_order(d)) if v != removed)
        reduced = desurject_reduce(Homomorphism(sub, make_fd(d), tuple(labels)))
        self.assertEqual(reduced.target, make_fd(d - 1))
        self.assertTrue(reduced.is_edge_preserving())

    def test_surjective_map_is_not_reduced(self):
        with self.assertRaises(NotApplicableError):
            desurject_reduce(Homomorphism(make_fd(2), make_fd(2), tuple(range(5))))

    def test_f1_cannot_be_reduced(self):
        with self.assertRaises(InvalidArgumentError):
            desurject_reduce(Homomorphism(empty(1), make_fd(1), (0,)))

    def test_target_must_be_fd(self):
        with self.assertRaises(InvalidArgumentError):
            desurject_reduce(Homomorphism(empty(1), cycle(6), (0,)))

    @parameterized.expand(
        [
            ("c5", make_fd(2), 2),
            ("kbip", complete_bipartite(3, 3), 1),
            ("edgeless", empty(3), 1),
        ]
    )
    def test_fd_type(self, _, g, d):
        result = surjective_homomorphism_to_fd(g, 5)
        self.assertEqual(result.d, d)
        self.assertTrue(result.phi.is_surjective())
        self.assertTrue(result.phi.is_edge_preserving())

    def test_fd_type_needs_triangle_free(self):
        with self.assertRaises(PreconditionViolationError):
            surjective_homomorphism_to_fd(complete(3), 5)


class TestStrong(unittest.TestCase):
    def test_blowup_projection_is_strong(self):
        g, partition = blowup(make_petersen(), [2] * 10)
        self.assertTrue(is_strong_homomorphism(Homomorphism.projection(g, make_petersen(), partition)))

    def test_folded_cycle_is_not_strong(self):
        phi = find_homomorphism(cycle(6), make_fd(1))
        self.assertEqual(first_strong_violation(phi), (0, 3))


class TestDisturbedPair(unittest.TestCase):
    def setUp(self):
        self.petersen = make_petersen()
        self.g, self.partition = blowup(self.petersen, [30] * 10)
        self.eps = Fraction(1, 10)
        self.delta = disturbed_parameters(self.eps, 10)

    def test_parameters_give_eps_below_one(self):
        self.assertEqual(self.delta, Fraction(1, 14400))
        self.assertLessEqual(self.eps, disturbed_eps(self.delta, 10))
        self.assertLess(disturbed_eps(self.delta, 10), 1)

    def test_exact_blowup(self):
        pair = build_disturbed_pair(self.g, self.petersen, self.partition, self.delta)
        self.assertEqual(pair.j_set, ())
        self.assertEqual(pair.g_prime, self.g)
        report = verify_disturbed(pair, self.eps)
        self.assertTrue(report.passed)
        self.assertEqual(report.max_deviation, 0)
        self.assertIsNone(report.broken_bound)

    @parameterized.expand([(seed,) for seed in range(3)])
    def test_perturbed_blowup(self, seed):
        flips = int(self.delta * self.g.n**2)
        g, _ = random_triangle_free_flips(self.g, flips, make_rng(seed))
        pair = build_disturbed_pair(g, self.petersen, self.partition, self.delta)
        self.assertTrue(pair.phi.is_edge_preserving())
        report = verify_disturbed(pair, self.eps)
        self.assertTrue(report.passed, report)
        self.assertLessEqual(report.disturbed.max_extra_neighbors, self.eps * self.g.n)

    def test_vertex_losing_three_edges_joins_j(self):
        # Vertex 210 sits in block 7, whose neighbourhood is {2, 5, 9}.
        lost = {(60, 210), (61, 210), (150, 210)}
        g = Graph(self.g.n, self.g.edges - lost)
        pair = build_disturbed_pair(g, self.petersen, self.partition, self.delta)
        self.assertEqual(pair.j_set, (210,))
        self.assertEqual(pair.choices, ((210, (2, 5, 9), (2, 5, 9)),))
        self.assertEqual(pair.phi.map[210], 7)
        self.assertEqual(pair.g_prime, self.g)
        self.assertTrue(verify_disturbed(pair, self.eps).passed)

    @parameterized.expand([("tight", Fraction(1, 5)), ("loose", Fraction(2))])
    def test_collapsed_pair_fails(self, _, eps):
        c5 = make_fd(2)
        g, partition = blowup(c5, [2] * 5)
        pair = build_disturbed_pair(g, c5, partition, disturbed_parameters(Fraction(1, 5), 5))
        collapsed = replace(pair, g_prime=empty(10), phi=Homomorphism(empty(10), pair.star.extension, (0,) * 10))
        report = verify_disturbed(collapsed, eps)
        self.assertTrue(report.strong)
        self.assertEqual(report.broken_bound, "j-cover")
        self.assertFalse(report.passed)

    def test_maximal_set_that_is_neither_maximum_nor_a_neighbourhood(self):
        # Petersen plus one vertex on each of the maximum sets {0, 2, 8, 9} and {1, 3, 5, 9}.
        # The maximum set {2, 4, 5, 6} of Petersen stays maximal but drops below α = 5.
        template = Graph.from_edges(
            12, sorted(self.petersen.edges) + [(i, 10) for i in (0, 2, 8, 9)] + [(i, 11) for i in (1, 3, 5, 9)]
        )
        g, partition = blowup(template, [5] * 12)
        v = partition.blocks[7][0]
        rewired = {(u, w) for u, w in g.edges if v not in (u, w)}
        rewired |= {(u, v) if u < v else (v, u) for i in (2, 4, 5, 6) for u in partition.blocks[i]}
        with self.assertRaises(InconsistentInputError) as ctx:
            build_disturbed_pair(Graph.from_edges(g.n, rewired), template, partition, Fraction(1, 196))
        self.assertEqual(ctx.exception.witness["vertex"], v)
        self.assertEqual(ctx.exception.witness["independent"], [2, 4, 5, 6])

    def test_rejects_non_maximal_template(self):
        g, partition = blowup(path(4), [2] * 4)
        with self.assertRaises(PreconditionViolationError):
            build_disturbed_pair(g, path(4), partition, self.delta)

    def test_rejects_far_graph(self):
        with self.assertRaises(HypothesisViolationError):
            build_disturbed_pair(empty(10), self.petersen, Partition.from_assignment(range(10)), self.delta)

    def test_rejects_non_positive_delta(self):
        with self.assertRaises(InvalidArgumentError):
            build_disturbed_pair(self.g, self.petersen, self.partition, 0)

    def test_parameters(self):
        self.assertEqual(disturbed_parameters(Fraction(1, 10), 10), Fraction(1, 14400))
        self.assertEqual(disturbed_eps(Fraction(1, 100), 3), Fraction(1, 2))
        with self.assertRaises(InvalidArgumentError):
            disturbed_parameters(0, 3)


if __name__ == "__main__":
    unittest.main()
