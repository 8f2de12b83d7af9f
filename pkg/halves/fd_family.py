"""
The F_d family, the Petersen graph, and star-extensions H*.

Labels: vertex v_j is index j-1 everywhere. F_d vertex v_j is adjacent to
v_{j+d}, ..., v_{j+2d-1}, indices taken modulo 3d-1 after the offset.
"""

from dataclasses import dataclass
from typing import List, Tuple

import networkx as nx

from common.cache import Cache
from common.partition import cyclic_window

from .errors import InvalidArgumentError, check_guard
from .graph import (
    MAX_ENUMERATION_VERTICES,
    Graph,
    VertexSet,
    chromatic_at_most,
    is_triangle_free,
    maximum_independent_sets,
)

MAX_FACT_CHECK_D = 9

# networkx labels: outer cycle 0..4, spokes i ~ i+5, inner pentagram on 5..9.
_PETERSEN_SPARSE_HALF = (0, 2, 3, 6, 9)

_cache = Cache().namespace("fd_family")


@dataclass(frozen=True)
class StarExtension:
    """
    H* = H plus one vertex per maximum independent set of H that is not a neighborhood.
    `added` lists (index in H*, represented set) in lexicographic order of the sets.
    """

    base: Graph
    extension: Graph
    added: Tuple[Tuple[int, VertexSet], ...]
    maximum_sets: Tuple[VertexSet, ...]

    @property
    def added_sets(self) -> Tuple[VertexSet, ...]:
        return tuple(members for _, members in self.added)


@dataclass(frozen=True)
class FdFactReport:
    d: int
    triangle_free: bool
    three_colorable: bool
    alpha: int
    alpha_equals_d: bool
    maximum_set_count: int
    maximum_sets_are_neighborhoods: bool

    @property
    def passed(self) -> bool:
        return (
            self.triangle_free
            and self.three_colorable
            and self.alpha_equals_d
            and self.maximum_sets_are_neighborhoods
        )


def fd_order(d: int) -> int:
    return 3 * d - 1


def fd_window(d: int, start: int, width: int) -> List[int]:
    """
    Consecutive vertices start, start+1, ..., start+width-1 of F_d, cyclically.
    """
    return cyclic_window(list(range(fd_order(d))), start, width)


def make_fd(d: int) -> Graph:
    if d < 1:
        raise InvalidArgumentError(f"F_d needs d >= 1, got {d}")

    def build():
        order = fd_order(d)
        edges = set()
        for j in range(order):
            for t in range(d, 2 * d):
                k = (j + t) % order
                edges.add((min(j, k), max(j, k)))
        return Graph(order, frozenset(edges))

    return _cache(f"fd.{d}", build)


def make_petersen() -> Graph:
    return _cache(
        "petersen",
        lambda: Graph.from_networkx(nx.petersen_graph()),
    )


def petersen_figure_half() -> VertexSet:
    """
    The five-vertex set {v1, v3, v4, v7, v10}, 0-based; it spans two edges.
    """
    return _PETERSEN_SPARSE_HALF


def star_extension(h: Graph, max_vertices: int = MAX_ENUMERATION_VERTICES) -> StarExtension:
    check_guard("star-extension base vertices", h.n, max_vertices)
    maximum_sets = maximum_independent_sets(h, max_vertices)
    neighborhoods = {tuple(sorted(h.neighbors(v))) for v in h.vertices}
    extra = [members for members in maximum_sets if members not in neighborhoods]

    added = tuple((h.n + t, members) for t, members in enumerate(extra))
    edges = set(h.edges)
    for w, members in added:
        edges.update((u, w) for u in members)
    return StarExtension(
        base=h,
        extension=Graph(h.n + len(added), frozenset(edges)),
        added=added,
        maximum_sets=tuple(maximum_sets),
    )


def make_pstar() -> StarExtension:
    return _cache("pstar", lambda: star_extension(make_petersen()))


def is_entwined(h: Graph, max_vertices: int = MAX_ENUMERATION_VERTICES) -> bool:
    sets = [frozenset(members) for members in star_extension(h, max_vertices).added_sets]
    return all(a & b for i, a in enumerate(sets) for b in sets[i + 1 :])


def fd_fact_check(d: int, max_d: int = MAX_FACT_CHECK_D) -> FdFactReport:
    check_guard("fact-check d", d, max_d)
    g = make_fd(d)
    maximum_sets = maximum_independent_sets(g)
    alpha = len(maximum_sets[0]) if maximum_sets else 0
    neighborhoods = {tuple(sorted(g.neighbors(v))) for v in g.vertices}
    return FdFactReport(
        d=d,
        triangle_free=is_triangle_free(g),
        three_colorable=chromatic_at_most(g, 3) is not None,
        alpha=alpha,
        alpha_equals_d=alpha == d,
        maximum_set_count=len(maximum_sets),
        maximum_sets_are_neighborhoods=set(maximum_sets) == neighborhoods,
    )
