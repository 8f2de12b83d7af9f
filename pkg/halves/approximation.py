"""
Closeness of a graph to a template blowup: ε-approximation, ε-covering sets,
ε-disturbed subgraphs and weighted c-maximality.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence

from common.logger import get_logger

from .errors import InvalidArgumentError, check_guard
from .graph import Edge, Graph, Partition, VertexSet, bits, normalize_edge, partition_blowup, require_triangle_free
from .weighted import Rational, WeightedGraph

logger = get_logger(__name__)

MAX_COVER_EDGES = 10_000


@dataclass(frozen=True)
class ApproximationWitness:
    partition: Partition
    template: Graph
    hv: Graph
    diff_edges: FrozenSet[Edge]
    eps_achieved: Fraction

    @property
    def size_deviation(self) -> Fraction:
        n, k = self.partition.n, self.template.n
        if n == 0:
            return Fraction(0)
        return max(abs(Fraction(size) - Fraction(n, k)) for size in self.partition.sizes) / n

    @property
    def edge_fraction(self) -> Fraction:
        n = self.partition.n
        return Fraction(len(self.diff_edges), n * n) if n else Fraction(0)

    def within(self, eps: Rational) -> bool:
        return self.eps_achieved <= eps

    def rebuild(self) -> Graph:
        """
        G recovered as H_𝒱 △ F.
        """
        return Graph(self.hv.n, self.hv.edges ^ self.diff_edges)


@dataclass(frozen=True)
class CoveringSet:
    d_set: VertexSet
    covered: FrozenSet[Edge]
    exact: bool = True

    @property
    def size(self) -> int:
        return len(self.d_set)


@dataclass(frozen=True)
class DisturbedCheck:
    """
    Outcome of the three ε-disturbed conditions. `violated` names the first failing
    one ("vertex-set", "covering" or "neighborhood"), None when all hold.
    """

    disturbed: bool
    violated: Optional[str]
    covering: Optional[CoveringSet]
    max_extra_neighbors: int
    worst_vertex: Optional[int]


def check_eps_approximation(g: Graph, h: Graph, partition: Partition) -> ApproximationWitness:
    if partition.n != g.n:
        raise InvalidArgumentError(f"Partition covers {partition.n} vertices, graph has {g.n}")
    hv = partition_blowup(h, partition)
    diff = g.edges ^ hv.edges
    n, k = g.n, h.n
    eps = Fraction(0)
    if n:
        deviation = max(abs(Fraction(size) - Fraction(n, k)) for size in partition.sizes) / n
        eps = max(deviation, Fraction(len(diff), n * n))
    logger.debug(f"Template on {k} vertices: |F| = {len(diff)}, eps = {eps}")
    return ApproximationWitness(partition=partition, template=h, hv=hv, diff_edges=diff, eps_achieved=eps)


def _edge_masks(edges: Iterable[Edge]) -> Dict[int, int]:
    adj: Dict[int, int] = {}
    for u, v in edges:
        adj[u] = adj.get(u, 0) | 1 << v
        adj[v] = adj.get(v, 0) | 1 << u
    return adj


def _remove_vertex(adj: Dict[int, int], v: int) -> Dict[int, int]:
    reduced = dict(adj)
    for u in bits(reduced.pop(v)):
        reduced[u] &= ~(1 << v)
        if not reduced[u]:
            del reduced[u]
    return reduced


def _matching_size(adj: Dict[int, int]) -> int:
    used = 0
    count = 0
    for u in sorted(adj):
        if used >> u & 1:
            continue
        free = adj[u] & ~used
        if free:
            used |= 1 << u | (free & -free)
            count += 1
    return count


def _greedy_cover(edges: Sequence[Edge]) -> List[int]:
    # Both ends of a maximal matching.
    chosen = set()
    for u, v in sorted(edges):
        if u not in chosen and v not in chosen:
            chosen.update((u, v))
    return sorted(chosen)


def _exact_cover(edges: Sequence[Edge]) -> List[int]:
    best = _greedy_cover(edges)
    best_size = len(best) + 1

    def solve(adj: Dict[int, int], chosen: List[int]):
        nonlocal best, best_size
        # A vertex of degree one is covered through its neighbour, or itself
        # when the edge is isolated and it is the lower end.
        reduced = True
        while reduced:
            reduced = False
            for u in sorted(adj):
                if adj[u].bit_count() == 1:
                    v = adj[u].bit_length() - 1
                    take = min(u, v) if adj[v].bit_count() == 1 else v
                    chosen = chosen + [take]
                    adj = _remove_vertex(adj, take)
                    reduced = True
                    break
        if not adj:
            if len(chosen) < best_size:
                best, best_size = sorted(chosen), len(chosen)
            return
        if len(chosen) + _matching_size(adj) >= best_size:
            return
        v = max(sorted(adj), key=lambda u: adj[u].bit_count())
        solve(_remove_vertex(adj, v), chosen + [v])
        neighbors = list(bits(adj[v]))
        without = adj
        for u in neighbors:
            without = _remove_vertex(without, u)
        solve(without, chosen + neighbors)

    solve(_edge_masks(edges), [])
    return best


def min_covering_set(
    g: Graph,
    f: Iterable[Sequence[int]],
    max_edges: int = MAX_COVER_EDGES,
    greedy: bool = False,
) -> CoveringSet:
    """
    Minimum vertex set touching every edge of f, by branch and bound.
    With greedy=True the matching 2-approximation is returned instead and no guard applies.
    """
    f = frozenset(normalize_edge(*edge) for edge in f)
    for u, v in f:
        if v >= g.n:
            raise InvalidArgumentError(f"Edge ({u}, {v}) outside a graph on {g.n} vertices")
    if greedy:
        return CoveringSet(tuple(_greedy_cover(list(f))), f, exact=False)
    check_guard("covering-set edges", len(f), max_edges)
    return CoveringSet(tuple(_exact_cover(sorted(f))), f)


def covers(d_set: Iterable[int], f: Iterable[Edge]) -> bool:
    members = set(d_set)
    return all(u in members or v in members for u, v in f)


def is_eps_disturbed(
    g: Graph,
    g_prime: Graph,
    eps: Rational,
    covering_hint: Optional[Iterable[int]] = None,
    max_edges: int = MAX_COVER_EDGES,
) -> DisturbedCheck:
    """
    Whether g is an ε-disturbed subgraph of g_prime. A covering hint that already
    meets the size bound is accepted without searching for a minimum cover.
    """
    eps = Fraction(eps)
    if g.n != g_prime.n:
        return DisturbedCheck(False, "vertex-set", None, 0, None)
    n = g.n
    extra = g.edges - g_prime.edges

    covering = None
    if covering_hint is not None:
        hint = tuple(sorted(set(covering_hint)))
        if covers(hint, extra) and len(hint) <= eps * n:
            covering = CoveringSet(hint, frozenset(extra), exact=False)
    if covering is None:
        covering = min_covering_set(g, extra, max_edges)

    extra_counts = [(g.masks[v] & ~g_prime.masks[v]).bit_count() for v in g.vertices]
    worst = max(g.vertices, key=lambda v: extra_counts[v]) if n else None
    worst_count = extra_counts[worst] if n else 0

    if covering.size > eps * n:
        return DisturbedCheck(False, "covering", covering, worst_count, worst)
    if worst_count > eps * n:
        return DisturbedCheck(False, "neighborhood", covering, worst_count, worst)
    return DisturbedCheck(True, None, covering, worst_count, worst)


def weighted_c_maximality(wg: WeightedGraph) -> Optional[Fraction]:
    """
    Least total weight of common neighbours over the non-edges; a new edge uv
    closes one triangle per common neighbour w, weighted by ω(w). None when there is no non-edge.
    """
    g = wg.graph
    require_triangle_free(g)
    least = None
    for u, v in g.non_edges():
        weight = wg.mass(bits(g.masks[u] & g.masks[v]))
        if least is None or weight < least:
            least = weight
    return least
