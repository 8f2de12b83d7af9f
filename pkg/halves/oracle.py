"""
Brute-force ground truth for sparse halves: the exact minimum number of edges
spanned by ⌊n/2⌋ vertices, and a descent heuristic over weighted halves.
"""

from fractions import Fraction
from itertools import combinations
from typing import List, NamedTuple, Optional, Tuple

from common.decorators import log_on_entry, log_runtime
from common.logger import get_logger
from common.parallel import map_ordered
from common.seed import make_rng

from .errors import InvalidArgumentError, check_guard
from .graph import Graph, VertexSet, bits, require_triangle_free, to_mask
from .types import OracleMode
from .weighted import HALF, Half, WeightedGraph, edge_mass

logger = get_logger(__name__)

MAX_EXHAUSTIVE_VERTICES = 30
MAX_ORACLE_VERTICES = 40
DESCENT_RESTARTS = 8
DESCENT_MAX_MOVES = 10_000


class OracleResult(NamedTuple):
    best_set: VertexSet
    count: int
    mode: OracleMode


class ConjectureReport(NamedTuple):
    n: int
    min_edges: int
    witness: VertexSet

    @property
    def bound(self) -> Fraction:
        return Fraction(self.n * self.n, 50)

    @property
    def holds(self) -> bool:
        return 50 * self.min_edges <= self.n * self.n

    @property
    def tight(self) -> bool:
        return 50 * self.min_edges == self.n * self.n


def _exhaustive(g: Graph, k: int) -> Tuple[VertexSet, int]:
    masks = g.masks
    best, best_count = None, None
    for subset in combinations(g.vertices, k):
        chosen = to_mask(subset)
        count = sum((masks[v] & chosen).bit_count() for v in subset) // 2
        if best_count is None or count < best_count:
            best, best_count = subset, count
            if count == 0:
                break
    return best, best_count


def _greedy(g: Graph, k: int) -> Tuple[VertexSet, int]:
    # Add the vertex with fewest neighbours in the set so far; ties to the lower index.
    masks = g.masks
    chosen, count, members = 0, 0, []
    for _ in range(k):
        v = min((u for u in g.vertices if not chosen >> u & 1), key=lambda u: (masks[u] & chosen).bit_count())
        count += (masks[v] & chosen).bit_count()
        chosen |= 1 << v
        members.append(v)
    return tuple(sorted(members)), count


def _branch(g: Graph, k: int, first: Optional[int], ceiling: int) -> Tuple[Optional[VertexSet], int]:
    """
    Include-first depth-first search, so optimal sets are met in lexicographic order.
    With `first` set, only sets whose least vertex is `first` are explored.
    Returns (None, ceiling) when nothing beats the ceiling.
    """
    n, masks = g.n, g.masks
    best, best_count = None, ceiling

    def search(i: int, chosen: int, count: int, need: int):
        nonlocal best, best_count
        if need == 0:
            if count < best_count:
                best, best_count = tuple(bits(chosen)), count
            return
        if n - i < need:
            return
        # Each remaining pick adds at least its edges into the current set.
        gains = sorted((masks[u] & chosen).bit_count() for u in range(i, n))
        if count + sum(gains[:need]) >= best_count:
            return
        search(i + 1, chosen | 1 << i, count + (masks[i] & chosen).bit_count(), need - 1)
        search(i + 1, chosen, count, need)

    if first is None:
        search(0, 0, 0, k)
    else:
        search(first + 1, 1 << first, 0, k - 1)
    return best, best_count


@log_runtime
@log_on_entry
def min_half_edges(
    g: Graph,
    mode: OracleMode = OracleMode.branch,
    threads: int = 1,
    max_exhaustive: int = MAX_EXHAUSTIVE_VERTICES,
    max_vertices: int = MAX_ORACLE_VERTICES,
) -> OracleResult:
    """
    Exact minimum of e(G[S]) over |S| = ⌊n/2⌋, with the lexicographically first optimal set.
    """
    mode = OracleMode(mode)
    n, k = g.n, g.n // 2
    if k == 0:
        return OracleResult((), 0, mode)
    if mode == OracleMode.exhaustive:
        check_guard("oracle exhaustive vertices", n, max_exhaustive)
        best, count = _exhaustive(g, k)
        return OracleResult(best, count, mode)

    check_guard("oracle vertices", n, max_vertices)
    greedy, greedy_count = _greedy(g, k)
    ceiling = greedy_count + 1
    if threads == 1:
        best, count = _branch(g, k, None, ceiling)
    else:
        # Split by least chosen vertex; earlier splits hold lexicographically smaller sets.
        results = map_ordered(lambda first: _branch(g, k, first, ceiling), range(n - k + 1), threads)
        best, count = None, ceiling
        for candidate, candidate_count in results:
            if candidate is not None and candidate_count < count:
                best, count = candidate, candidate_count
    if best is None:
        raise InvalidArgumentError("Branch and bound found no set below the greedy ceiling")
    logger.debug(f"Greedy {greedy_count}, optimum {count} on {n} vertices")
    return OracleResult(best, count, mode)


def conjecture_check(
    g: Graph,
    mode: OracleMode = OracleMode.branch,
    threads: int = 1,
    max_exhaustive: int = MAX_EXHAUSTIVE_VERTICES,
    max_vertices: int = MAX_ORACLE_VERTICES,
) -> ConjectureReport:
    require_triangle_free(g)
    result = min_half_edges(g, mode, threads, max_exhaustive, max_vertices)
    return ConjectureReport(g.n, result.count, result.best_set)


def _initial_half(wg: WeightedGraph, order: List[int]) -> List[Fraction]:
    s = [Fraction(0)] * wg.graph.n
    remaining = HALF
    for v in order:
        take = min(wg.w[v], remaining)
        s[v] = take
        remaining -= take
        if remaining == 0:
            break
    return s


def _best_transfer(wg: WeightedGraph, s: List[Fraction]) -> Optional[Tuple[int, int, Fraction, Fraction]]:
    """
    Steepest single transfer of mass from a donor u to a receiver v, as (u, v, δ, change).
    """
    g = wg.graph
    around = [sum((s[x] for x in bits(g.masks[v])), Fraction(0)) for v in g.vertices]
    donors = [u for u in g.vertices if s[u] > 0]
    receivers = [v for v in g.vertices if s[v] < wg.w[v]]
    best = None
    for u in donors:
        for v in receivers:
            if u == v:
                continue
            delta = min(s[u], wg.w[v] - s[v])
            change = delta * (around[v] - around[u])
            if g.masks[u] >> v & 1:
                change -= delta * delta
            if change < 0 and (best is None or change < best[3]):
                best = (u, v, delta, change)
    return best


def _descend(wg: WeightedGraph, s: List[Fraction], max_moves: int) -> Tuple[List[Fraction], int]:
    moves = 0
    while moves < max_moves:
        step = _best_transfer(wg, s)
        if step is None:
            break
        u, v, delta, _ = step
        s[u] -= delta
        s[v] += delta
        moves += 1
    return s, moves


@log_runtime
def fractional_descent(
    wg: WeightedGraph,
    restarts: int = DESCENT_RESTARTS,
    seed: int = 0,
    max_moves: int = DESCENT_MAX_MOVES,
) -> Half:
    """
    Pairwise mass-transfer descent on s(E(G)) from `restarts` random fill orders.
    Each move shifts as much mass as the donor and receiver allow; the best local
    minimum wins, ties to the earliest restart.
    """
    if restarts <= 0:
        raise InvalidArgumentError(f"Restarts must be positive, got {restarts}")
    best = None
    for restart in range(restarts):
        order = [int(v) for v in make_rng(seed, restart).permutation(wg.graph.n)]
        s, moves = _descend(wg, _initial_half(wg, order), max_moves)
        half = Half(wg, tuple(s))
        mass = edge_mass(half)
        logger.debug(f"Restart {restart}: edge mass {mass} after {moves} moves")
        if moves == max_moves:
            logger.warning(f"Restart {restart} stopped at the move cap {max_moves}")
        if best is None or mass < best[1]:
            best = (half, mass)
    return best[0]
