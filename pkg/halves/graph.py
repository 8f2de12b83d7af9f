"""
Simple undirected graphs on dense integer vertices, with the structural
predicates, generators and counting primitives the other modules build on.

Adjacency is kept twice: as frozensets for readable iteration and as integer
bitmasks for the exact searches (independent sets, homomorphisms, oracle).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .errors import InvalidArgumentError, PreconditionViolationError, check_guard

Edge = Tuple[int, int]
VertexSet = Tuple[int, ...]

MAX_ENUMERATION_VERTICES = 64


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def bits(mask: int) -> Iterator[int]:
    """
    Indices of the set bits of a mask, in increasing order.
    """
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class Graph:
    """
    Immutable simple graph on vertices 0..n-1. Edges are stored as (u, v) with u < v.
    """

    n: int
    edges: FrozenSet[Edge]

    def __post_init__(self):
        if self.n < 0:
            raise InvalidArgumentError(f"Vertex count must be non-negative, got {self.n}")
        for u, v in self.edges:
            if u == v:
                raise InvalidArgumentError(f"Self-loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise InvalidArgumentError(f"Edge ({u}, {v}) is not a normalized edge of a graph on {self.n} vertices")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        normalized = set()
        for u, v in edges:
            if u == v:
                raise InvalidArgumentError(f"Self-loop at vertex {u}")
            edge = normalize_edge(int(u), int(v))
            if edge in normalized:
                raise InvalidArgumentError(f"Parallel edge {edge}")
            normalized.add(edge)
        return cls(n, frozenset(normalized))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        """
        Convert a networkx graph. Nodes are relabelled 0..n-1 in sorted order.
        """
        if nx.number_of_selfloops(graph):
            raise InvalidArgumentError("Graph has self-loops")
        graph = nx.convert_node_labels_to_integers(graph, ordering="sorted")
        return cls.from_edges(graph.number_of_nodes(), graph.edges())

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        return graph

    @cached_property
    def masks(self) -> Tuple[int, ...]:
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def adjacency(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(frozenset(bits(mask)) for mask in self.masks)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return self.masks[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.masks[u] >> v & 1)

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def non_edges(self) -> Iterator[Edge]:
        for u in range(self.n):
            for v in range(u + 1, self.n):
                if not self.masks[u] >> v & 1:
                    yield (u, v)

    def induced_subgraph(self, vertices: Iterable[int]) -> Tuple["Graph", List[int]]:
        """
        Induced subgraph relabelled to 0..k-1, plus the original label of each new vertex.
        """
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = {(index[u], index[v]) for u, v in self.edges if u in index and v in index}
        return Graph(len(keep), frozenset(edges)), keep

    def relabel(self, permutation: Sequence[int]) -> "Graph":
        """
        Graph with vertex v renamed to permutation[v].
        """
        if sorted(permutation) != list(range(self.n)):
            raise InvalidArgumentError("Relabelling must be a permutation of the vertices")
        return Graph(self.n, frozenset(normalize_edge(permutation[u], permutation[v]) for u, v in self.edges))

    def disjoint_union(self, other: "Graph") -> "Graph":
        shifted = {(u + self.n, v + self.n) for u, v in other.edges}
        return Graph(self.n + other.n, self.edges | frozenset(shifted))


@dataclass(frozen=True)
class Partition:
    """
    Ordered blocks covering 0..n-1. Block i corresponds to template vertex i.
    """

    n: int
    blocks: Tuple[VertexSet, ...]

    def __post_init__(self):
        seen = set()
        for block in self.blocks:
            for v in block:
                if not 0 <= v < self.n:
                    raise InvalidArgumentError(f"Vertex {v} outside 0..{self.n - 1}")
                if v in seen:
                    raise InvalidArgumentError(f"Vertex {v} appears in two blocks")
                seen.add(v)
        if len(seen) != self.n:
            raise InvalidArgumentError(f"Blocks cover {len(seen)} of {self.n} vertices")

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        return cls(n, tuple(tuple(sorted(block)) for block in blocks))

    @classmethod
    def from_assignment(cls, assignment: Sequence[int], k: Optional[int] = None) -> "Partition":
        k = (max(assignment) + 1 if assignment else 0) if k is None else k
        blocks = [[] for _ in range(k)]
        for v, i in enumerate(assignment):
            if not 0 <= i < k:
                raise InvalidArgumentError(f"Block index {i} of vertex {v} outside 0..{k - 1}")
            blocks[i].append(v)
        return cls.from_blocks(len(assignment), blocks)

    @cached_property
    def assignment(self) -> Tuple[int, ...]:
        owner = [0] * self.n
        for i, block in enumerate(self.blocks):
            for v in block:
                owner[v] = i
        return tuple(owner)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(block) for block in self.blocks)


class MaximalityClass(NamedTuple):
    is_maximal: bool
    c_star: Optional[Fraction]


class DegreeProfile(NamedTuple):
    min_deg: int
    max_deg: int
    sum_deg: int
    sum_deg_sq: int


class Perturbation(NamedTuple):
    graph: Graph
    triangle_free: bool


def vertex_set(g: Graph, members: Iterable[int]) -> VertexSet:
    """
    Validate and sort a vertex subset of g.
    """
    members = tuple(sorted(set(members)))
    for v in members:
        if not 0 <= v < g.n:
            raise InvalidArgumentError(f"Vertex {v} outside 0..{g.n - 1}")
    return members


def find_triangle(g: Graph) -> Optional[Tuple[int, int, int]]:
    for u, v in g.sorted_edges():
        common = g.masks[u] & g.masks[v]
        if common:
            w = next(bits(common))
            return tuple(sorted((u, v, w)))
    return None


def is_triangle_free(g: Graph) -> bool:
    return find_triangle(g) is None


def require_triangle_free(g: Graph, what: str = "graph"):
    triangle = find_triangle(g)
    if triangle is not None:
        raise PreconditionViolationError(f"The {what} contains the triangle {triangle}")


def common_neighbors(g: Graph, u: int, v: int) -> VertexSet:
    if u == v:
        raise InvalidArgumentError("Common neighbors need two distinct vertices")
    return tuple(bits(g.masks[u] & g.masks[v]))


def maximality_class(g: Graph) -> MaximalityClass:
    """
    Whether every non-edge closes a triangle, and the least number of triangles a
    new edge closes, divided by n. Complete graphs have no non-edge and report c_star = None.
    """
    require_triangle_free(g)
    least = None
    for u, v in g.non_edges():
        count = (g.masks[u] & g.masks[v]).bit_count()
        least = count if least is None else min(least, count)
        if least == 0:
            break
    if least is None:
        return MaximalityClass(True, None)
    return MaximalityClass(least > 0, Fraction(least, g.n))


def blowup(h: Graph, sizes: Sequence[int]) -> Tuple[Graph, Partition]:
    """
    Replace vertex i of h by an independent set of sizes[i] vertices and every edge by a
    complete bipartite graph. Block i occupies consecutive labels.
    """
    if len(sizes) == 0:
        raise InvalidArgumentError("Blowup needs at least one part size")
    if len(sizes) != h.n:
        raise InvalidArgumentError(f"Expected {h.n} part sizes, got {len(sizes)}")
    if any(size <= 0 for size in sizes):
        raise InvalidArgumentError(f"Part sizes must be positive, got {list(sizes)}")

    blocks, start = [], 0
    for size in sizes:
        blocks.append(tuple(range(start, start + size)))
        start += size

    edges = {(u, v) for i, j in h.edges for u in blocks[i] for v in blocks[j]}
    return Graph(start, frozenset(edges)), Partition(start, tuple(blocks))


def perturb(g: Graph, add: Iterable[Sequence[int]] = (), remove: Iterable[Sequence[int]] = ()) -> Perturbation:
    add = {normalize_edge(*edge) for edge in add}
    remove = {normalize_edge(*edge) for edge in remove}
    if add & remove:
        raise InvalidArgumentError(f"Edges both added and removed: {sorted(add & remove)}")
    present = sorted(add & g.edges)
    if present:
        raise InvalidArgumentError(f"Edges to add already present: {present}")
    missing = sorted(remove - g.edges)
    if missing:
        raise InvalidArgumentError(f"Edges to remove not present: {missing}")
    result = Graph(g.n, (g.edges - remove) | frozenset(add))
    return Perturbation(result, is_triangle_free(result))


def induced_edge_count(g: Graph, s: Iterable[int]) -> int:
    mask = to_mask(vertex_set(g, s))
    return sum((g.masks[v] & mask).bit_count() for v in bits(mask)) // 2


def degree_profile(g: Graph) -> DegreeProfile:
    if g.n == 0:
        return DegreeProfile(0, 0, 0, 0)
    degrees = [mask.bit_count() for mask in g.masks]
    return DegreeProfile(min(degrees), max(degrees), sum(degrees), sum(d * d for d in degrees))


def is_bipartite(g: Graph) -> Tuple[bool, Optional[List[int]]]:
    """
    Two-colouring with the smallest vertex of every component on side 0; the side list
    is None for non-bipartite graphs.
    """
    graph = g.to_networkx()
    try:
        color = nx.bipartite.color(graph)
    except nx.NetworkXError:
        return False, None
    side = [0] * g.n
    for component in nx.connected_components(graph):
        root = min(component)
        for v in component:
            side[v] = color[v] ^ color[root]
    return True, side


def _clique_cover_size(masks: Sequence[int], candidates: int) -> int:
    # Greedy clique cover; an independent set meets every clique at most once.
    count = 0
    while candidates:
        low = candidates & -candidates
        candidates ^= low
        pool = candidates & masks[low.bit_length() - 1]
        while pool:
            u = pool & -pool
            candidates ^= u
            pool &= masks[u.bit_length() - 1]
        count += 1
    return count


def independence_number(g: Graph, max_vertices: int = MAX_ENUMERATION_VERTICES) -> int:
    check_guard("independent-set enumeration vertices", g.n, max_vertices)
    masks = g.masks
    best = 0

    def expand(size: int, candidates: int):
        nonlocal best
        if not candidates:
            best = max(best, size)
            return
        if size + _clique_cover_size(masks, candidates) <= best:
            return
        low = candidates & -candidates
        v = low.bit_length() - 1
        expand(size + 1, candidates & ~masks[v] & ~low)
        expand(size, candidates & ~low)

    expand(0, (1 << g.n) - 1)
    return best


def maximum_independent_sets(g: Graph, max_vertices: int = MAX_ENUMERATION_VERTICES) -> List[VertexSet]:
    """
    All independent sets of size α(g), in lexicographic order.
    """
    alpha = independence_number(g, max_vertices)
    masks = g.masks
    found: List[VertexSet] = []

    def expand(size: int, chosen: int, candidates: int):
        if size == alpha:
            found.append(tuple(bits(chosen)))
            return
        if not candidates or size + _clique_cover_size(masks, candidates) < alpha:
            return
        low = candidates & -candidates
        v = low.bit_length() - 1
        expand(size + 1, chosen | low, candidates & ~masks[v] & ~low)
        expand(size, chosen, candidates & ~low)

    expand(0, 0, (1 << g.n) - 1)
    return found


def chromatic_at_most(g: Graph, k: int) -> Optional[List[int]]:
    """
    A proper colouring with at most k colours, or None. Exact backtracking.
    """
    colors = [-1] * g.n
    order = sorted(g.vertices, key=lambda v: (-g.degree(v), v))

    def assign(position: int) -> bool:
        if position == len(order):
            return True
        v = order[position]
        used = {colors[u] for u in g.neighbors(v)}
        # Colours are interchangeable; never open more than one new colour.
        opened = max(colors, default=-1) + 1
        for c in range(min(k, opened + 1)):
            if c in used:
                continue
            colors[v] = c
            if assign(position + 1):
                return True
        colors[v] = -1
        return False

    return list(colors) if assign(0) else None


def random_triangle_free_flips(
    g: Graph, count: int, rng: np.random.Generator
) -> Tuple[Graph, List[Tuple[str, int, int]]]:
    """
    Try `count` random vertex pairs; remove the pair if it is an edge, add it if its ends
    have no common neighbour. Every intermediate graph stays triangle-free when g is.
    """
    if g.n < 2:
        return g, []
    masks = list(g.masks)
    touched = set()
    flips = []
    for _ in range(count):
        u, v = (int(x) for x in rng.choice(g.n, size=2, replace=False))
        u, v = normalize_edge(u, v)
        if (u, v) in touched:
            continue
        touched.add((u, v))
        if masks[u] >> v & 1:
            flips.append(("remove", u, v))
        elif not masks[u] & masks[v]:
            flips.append(("add", u, v))
        else:
            continue
        masks[u] ^= 1 << v
        masks[v] ^= 1 << u
    edges = {(u, v) for u in range(g.n) for v in bits(masks[u] >> (u + 1) << (u + 1))}
    return Graph(g.n, frozenset(edges)), flips


def empty(n: int) -> Graph:
    return Graph.from_networkx(nx.empty_graph(n))


def complete(n: int) -> Graph:
    return Graph.from_networkx(nx.complete_graph(n))


def cycle(n: int) -> Graph:
    """
    The cycle 0-1-...-(n-1)-0.
    """
    if n < 3:
        raise InvalidArgumentError(f"A cycle needs at least 3 vertices, got {n}")
    return Graph.from_networkx(nx.cycle_graph(n))


def path(n: int) -> Graph:
    return Graph.from_networkx(nx.path_graph(n))


def complete_bipartite(a: int, b: int) -> Graph:
    """
    Sides 0..a-1 and a..a+b-1.
    """
    return Graph.from_networkx(nx.complete_bipartite_graph(a, b))


def partition_blowup(h: Graph, partition: Partition) -> Graph:
    """
    H_𝒱: the blowup of h along the given blocks of an existing vertex set.
    """
    if len(partition.blocks) != h.n:
        raise InvalidArgumentError(f"Partition has {len(partition.blocks)} blocks, template has {h.n} vertices")
    edges = set()
    for i, j in h.edges:
        for u in partition.blocks[i]:
            for v in partition.blocks[j]:
                edges.add(normalize_edge(u, v))
    return Graph(partition.n, frozenset(edges))


def connected_components(g: Graph) -> List[List[int]]:
    """
    Components as sorted vertex lists, ordered by their smallest vertex.
    """
    return sorted(sorted(component) for component in nx.connected_components(g.to_networkx()))
