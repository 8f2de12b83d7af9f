"""
Tests for graph primitives and the F_d family, cross-checked against networkx.
"""

import unittest
from fractions import Fraction
from itertools import combinations

import networkx as nx
from hypothesis import given, strategies as st
from parameterized import parameterized

from common.seed import make_rng
from halves.errors import InvalidArgumentError, PreconditionViolationError, ResourceLimitError
from halves.fd_family import (
    fd_fact_check,
    fd_window,
    is_entwined,
    make_fd,
    make_petersen,
    make_pstar,
    petersen_figure_half,
    star_extension,
)
from halves.graph import (
    Graph,
    blowup,
    chromatic_at_most,
    common_neighbors,
    complete,
    complete_bipartite,
    connected_components,
    cycle,
    degree_profile,
    empty,
    find_triangle,
    independence_number,
    induced_edge_count,
    is_bipartite,
    is_triangle_free,
    maximality_class,
    maximum_independent_sets,
    path,
    perturb,
    random_triangle_free_flips,
)


@st.composite
def graphs(draw, max_vertices=9):
    n = draw(st.integers(1, max_vertices))
    pairs = list(combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [pair for pair, k in zip(pairs, keep) if k])


class TestGraph(unittest.TestCase):
    def test_rejects_self_loop(self):
        with self.assertRaises(InvalidArgumentError):
            Graph.from_edges(3, [(1, 1)])

    def test_rejects_parallel_edge(self):
        with self.assertRaises(InvalidArgumentError):
            Graph.from_edges(3, [(0, 1), (1, 0)])

    def test_rejects_out_of_range(self):
        with self.assertRaises(InvalidArgumentError):
            Graph.from_edges(3, [(0, 3)])

    def test_triangle(self):
        self.assertEqual(find_triangle(complete(3)), (0, 1, 2))
        self.assertTrue(is_triangle_free(cycle(5)))

    def test_common_neighbors(self):
        self.assertEqual(common_neighbors(complete_bipartite(2, 3), 0, 1), (2, 3, 4))
        self.assertEqual(common_neighbors(make_fd(2), 0, 1), (3,))
        with self.assertRaises(InvalidArgumentError):
            common_neighbors(cycle(5), 1, 1)

    @parameterized.expand(
        [
            ("c5", make_fd(2), True, Fraction(1, 5)),
            ("path", path(4), False, Fraction(0)),
            ("kbip", complete_bipartite(2, 3), True, Fraction(2, 5)),
            ("k2", make_fd(1), True, None),
        ]
    )
    def test_maximality_class(self, _, g, maximal, c_star):
        result = maximality_class(g)
        self.assertEqual(result.is_maximal, maximal)
        self.assertEqual(result.c_star, c_star)

    def test_maximality_needs_triangle_free(self):
        with self.assertRaises(PreconditionViolationError):
            maximality_class(complete(3))

    def test_blowup(self):
        g, partition = blowup(make_fd(2), [2] * 5)
        self.assertEqual((g.n, g.m), (10, 20))
        self.assertEqual(partition.sizes, (2,) * 5)
        self.assertTrue(is_triangle_free(g))

    @parameterized.expand([([2] * 4,), ([2, 2, 0, 2, 2],), ([],)])
    def test_blowup_rejects_sizes(self, sizes):
        with self.assertRaises(InvalidArgumentError):
            blowup(make_fd(2), sizes)

    def test_perturb(self):
        c5 = make_fd(2)
        result = perturb(c5, add=[(0, 1)])
        self.assertEqual(result.graph.m, 6)
        self.assertFalse(result.triangle_free)
        with self.assertRaises(InvalidArgumentError):
            perturb(c5, add=[(0, 2)])
        with self.assertRaises(InvalidArgumentError):
            perturb(c5, remove=[(0, 1)])

    def test_degree_profile(self):
        self.assertEqual(tuple(degree_profile(make_petersen())), (3, 3, 30, 90))
        self.assertEqual(tuple(degree_profile(empty(0))), (0, 0, 0, 0))

    def test_bipartite(self):
        self.assertEqual(is_bipartite(cycle(5)), (False, None))
        ok, sides = is_bipartite(complete_bipartite(2, 3))
        self.assertTrue(ok)
        self.assertEqual(sides, [0, 0, 1, 1, 1])

    def test_bipartite_sides_start_at_smallest_vertex(self):
        g = complete_bipartite(1, 2).disjoint_union(path(2)).disjoint_union(empty(1))
        self.assertEqual(is_bipartite(g), (True, [0, 1, 1, 0, 1, 0]))

    @given(graphs())
    def test_bipartite_matches_networkx(self, g):
        ok, sides = is_bipartite(g)
        self.assertEqual(ok, nx.is_bipartite(g.to_networkx()))
        if ok:
            self.assertTrue(all(sides[u] != sides[v] for u, v in g.edges))

    def test_from_networkx(self):
        graph = nx.Graph([("b", "c"), ("a", "c")])
        self.assertEqual(Graph.from_networkx(graph).sorted_edges(), [(0, 2), (1, 2)])
        with self.assertRaises(InvalidArgumentError):
            Graph.from_networkx(nx.Graph([(0, 0)]))

    @given(graphs())
    def test_networkx_round_trip(self, g):
        self.assertEqual(Graph.from_networkx(g.to_networkx()), g)

    @parameterized.expand([(0,), (1,), (4,)])
    def test_generators(self, n):
        self.assertEqual(complete(n).m, n * (n - 1) // 2)
        self.assertEqual(path(n).m, max(n - 1, 0))
        self.assertEqual(empty(n).n, n)

    def test_chromatic(self):
        self.assertIsNone(chromatic_at_most(cycle(5), 2))
        colors = chromatic_at_most(cycle(5), 3)
        self.assertTrue(all(colors[u] != colors[v] for u, v in cycle(5).edges))

    def test_relabel(self):
        g = make_petersen()
        self.assertEqual(g.relabel(list(reversed(range(10)))).m, 15)
        with self.assertRaises(InvalidArgumentError):
            g.relabel([0] * 10)

    def test_components(self):
        g = make_fd(2).disjoint_union(make_fd(1))
        self.assertEqual(connected_components(g), [[0, 1, 2, 3, 4], [5, 6]])

    @given(graphs())
    def test_independence_number_matches_networkx(self, g):
        complement = nx.complement(g.to_networkx())
        expected = max(len(clique) for clique in nx.find_cliques(complement))
        self.assertEqual(independence_number(g), expected)

    @given(graphs())
    def test_maximum_sets_are_independent_and_sorted(self, g):
        sets = maximum_independent_sets(g)
        self.assertEqual(sets, sorted(sets))
        alpha = independence_number(g)
        for members in sets:
            self.assertEqual(len(members), alpha)
            self.assertEqual(induced_edge_count(g, members), 0)

    @given(graphs())
    def test_components_match_networkx(self, g):
        expected = sorted(sorted(c) for c in nx.connected_components(g.to_networkx()))
        self.assertEqual(connected_components(g), expected)

    @given(st.integers(0, 1000), st.integers(0, 60))
    def test_flips_stay_triangle_free(self, seed, count):
        g, _ = blowup(make_petersen(), [2] * 10)
        flipped, flips = random_triangle_free_flips(g, count, make_rng(seed))
        self.assertTrue(is_triangle_free(flipped))
        self.assertLessEqual(len(flips), count)

    def test_independence_guard(self):
        with self.assertRaises(ResourceLimitError):
            independence_number(empty(65))


class TestFdFamily(unittest.TestCase):
    @parameterized.expand([(d,) for d in range(1, 7)])
    def test_fd_is_regular(self, d):
        g = make_fd(d)
        self.assertEqual(g.n, 3 * d - 1)
        self.assertTrue(all(g.degree(v) == d for v in g.vertices))
        self.assertEqual(g.m, d * (3 * d - 1) // 2)

    @parameterized.expand([(d,) for d in range(1, 6)])
    def test_fact_check(self, d):
        report = fd_fact_check(d)
        self.assertTrue(report.passed)
        self.assertEqual(report.alpha, d)
        self.assertEqual(report.maximum_set_count, 3 * d - 1)

    def test_fact_check_guard(self):
        with self.assertRaises(ResourceLimitError):
            fd_fact_check(10)

    def test_fd_window(self):
        self.assertEqual(fd_window(2, 3, 3), [3, 4, 0])
        self.assertEqual(induced_edge_count(make_fd(3), fd_window(3, 5, 3)), 0)

    def test_make_fd_rejects_zero(self):
        with self.assertRaises(InvalidArgumentError):
            make_fd(0)

    def test_small_members(self):
        self.assertTrue(nx.is_isomorphic(make_fd(2).to_networkx(), nx.cycle_graph(5)))
        self.assertEqual(make_fd(1).sorted_edges(), [(0, 1)])

    def test_petersen(self):
        g = make_petersen()
        self.assertEqual(set(g.edges), {tuple(sorted(e)) for e in nx.petersen_graph().edges()})
        self.assertEqual(induced_edge_count(g, petersen_figure_half()), 2)

    def test_pstar(self):
        star = make_pstar()
        self.assertEqual(star.extension.n, 15)
        self.assertEqual(star.extension.m, 35)
        self.assertEqual(len(star.added), 5)
        self.assertTrue(all(len(members) == 4 for members in star.added_sets))
        self.assertTrue(is_triangle_free(star.extension))
        self.assertTrue(is_entwined(make_petersen()))

    def test_c5_has_no_extra_sets(self):
        star = star_extension(make_fd(2))
        self.assertEqual(star.added, ())
        self.assertEqual(star.extension, make_fd(2))
        self.assertTrue(is_entwined(make_fd(2)))


if __name__ == "__main__":
    unittest.main()
