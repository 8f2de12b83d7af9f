"""
Homomorphism search and verification, the F_d -> F_{d-1} reduction, and the
extraction of a disturbed pair (G', φ: G' -> H*) from an approximated graph.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

from common.logger import get_logger

from .approximation import CoveringSet, DisturbedCheck, check_eps_approximation, covers, is_eps_disturbed
from .errors import (
    HypothesisViolationError,
    InconsistentInputError,
    InvalidArgumentError,
    NotApplicableError,
    PreconditionViolationError,
    StructureViolationError,
    TheoremViolationError,
    check_guard,
)
from .fd_family import StarExtension, fd_order, make_fd, star_extension
from .graph import (
    Edge,
    Graph,
    Partition,
    VertexSet,
    bits,
    connected_components,
    maximality_class,
    require_triangle_free,
    to_mask,
)
from .rational import Rational, above_sqrt_multiple, at_least_sqrt_multiple, at_most_sqrt_multiple, sqrt_upper
from .weighted import WeightFunction, pushforward

logger = get_logger(__name__)

MAX_SOURCE_VERTICES = 200
MAX_TARGET_VERTICES = 32


@dataclass(frozen=True)
class Homomorphism:
    """
    A vertex map source -> target. Construction only checks the map's shape; edge
    preservation is checked by `is_edge_preserving` so broken maps can be inspected.
    """

    source: Graph
    target: Graph
    map: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(t) for t in self.map))
        if len(self.map) != self.source.n:
            raise InvalidArgumentError(f"Map has {len(self.map)} entries for {self.source.n} source vertices")
        for v, t in enumerate(self.map):
            if not 0 <= t < self.target.n:
                raise InvalidArgumentError(f"Image {t} of vertex {v} outside 0..{self.target.n - 1}")

    def first_broken_edge(self) -> Optional[Edge]:
        for u, v in self.source.sorted_edges():
            if not self.target.has_edge(self.map[u], self.map[v]):
                return (u, v)
        return None

    def is_edge_preserving(self) -> bool:
        return self.first_broken_edge() is None

    @property
    def image(self) -> VertexSet:
        return tuple(sorted(set(self.map)))

    @property
    def missing(self) -> VertexSet:
        hit = set(self.map)
        return tuple(t for t in self.target.vertices if t not in hit)

    def is_surjective(self) -> bool:
        return not self.missing

    def fibers(self) -> List[VertexSet]:
        fibers: List[List[int]] = [[] for _ in range(self.target.n)]
        for v, t in enumerate(self.map):
            fibers[t].append(v)
        return [tuple(fiber) for fiber in fibers]

    @classmethod
    def projection(cls, source: Graph, target: Graph, partition: Partition) -> "Homomorphism":
        return cls(source, target, partition.assignment)


class FdTypeResult(NamedTuple):
    d: int
    phi: Homomorphism


@dataclass(frozen=True)
class DisturbedPair:
    g: Graph
    g_prime: Graph
    phi: Homomorphism
    j_set: VertexSet
    star: StarExtension
    partition: Partition
    delta: Fraction
    f_edges: FrozenSet[Edge]
    # (v, I_0(v), I(v)) for every v in J.
    choices: Tuple[Tuple[int, VertexSet, VertexSet], ...]


@dataclass(frozen=True)
class DisturbedReport:
    disturbed: DisturbedCheck
    balanced: bool
    max_deviation: Fraction
    strong: bool
    violating_non_edge: Optional[Edge]
    # Name of the first δ-bound of the extraction that fails, None when all hold.
    broken_bound: Optional[str] = None

    @property
    def covering(self) -> Optional[CoveringSet]:
        return self.disturbed.covering

    @property
    def passed(self) -> bool:
        return self.disturbed.disturbed and self.balanced and self.strong and self.broken_bound is None


def verify_homomorphism(phi: Homomorphism, what: str = "homomorphism"):
    """
    Re-scan every source edge; a constructed map that fails is a defect, not bad input.
    """
    broken = phi.first_broken_edge()
    if broken is not None:
        u, v = broken
        logger.critical(f"Constructed {what} breaks edge {broken}: images {phi.map[u]}, {phi.map[v]}")
        raise StructureViolationError(
            f"Constructed {what} is not edge-preserving",
            {"edge": list(broken), "map": list(phi.map)},
        )


def _solve_component(
    g: Graph,
    h: Graph,
    vertices: List[int],
    any_solution: bool,
    assigned: List[int],
) -> bool:
    order = sorted(vertices, key=lambda v: (-g.degree(v), v)) if any_solution else sorted(vertices)
    full = (1 << h.n) - 1
    domains = {v: full for v in vertices}

    def extend(position: int) -> bool:
        if position == len(order):
            return True
        v = order[position]
        for t in bits(domains[v]):
            trail = []
            feasible = True
            for u in g.neighbors(v):
                if assigned[u] >= 0:
                    continue
                narrowed = domains[u] & h.masks[t]
                if narrowed != domains[u]:
                    trail.append((u, domains[u]))
                    domains[u] = narrowed
                if not narrowed:
                    feasible = False
                    break
            if feasible:
                assigned[v] = t
                if extend(position + 1):
                    return True
                assigned[v] = -1
            for u, domain in reversed(trail):
                domains[u] = domain
        return False

    return extend(0)


def find_homomorphism(
    g: Graph,
    h: Graph,
    any_solution: bool = False,
    max_source: int = MAX_SOURCE_VERTICES,
    max_target: int = MAX_TARGET_VERTICES,
) -> Optional[Homomorphism]:
    """
    Backtracking with forward checking, one connected component at a time.

    By default vertices are assigned in index order and images tried in increasing
    order, so the result is the lexicographically first homomorphism. any_solution
    orders vertices by decreasing degree instead, which is usually faster.
    """
    check_guard("homomorphism source vertices", g.n, max_source)
    check_guard("homomorphism target vertices", h.n, max_target)
    if g.n and not h.n:
        return None
    assigned = [-1] * g.n
    for component in connected_components(g):
        if not _solve_component(g, h, component, any_solution, assigned):
            logger.debug(f"No homomorphism: component of vertex {component[0]} has no image")
            return None
    phi = Homomorphism(g, h, tuple(assigned))
    verify_homomorphism(phi)
    return phi


def first_strong_violation(phi: Homomorphism) -> Optional[Edge]:
    """
    The first source non-edge whose images are adjacent.
    """
    for u, v in phi.source.non_edges():
        if phi.target.has_edge(phi.map[u], phi.map[v]):
            return (u, v)
    return None


def is_strong_homomorphism(phi: Homomorphism) -> bool:
    return first_strong_violation(phi) is None


def _fd_degree(target: Graph) -> int:
    d = (target.n + 1) // 3
    if d < 1 or fd_order(d) != target.n or target != make_fd(d):
        raise InvalidArgumentError(f"Target on {target.n} vertices is not an F_d graph")
    return d


def _merged_index(i: int, d: int) -> int:
    # 1-based fibre index after rotation (fibre 1 is empty) to 1-based vertex of F_{d-1}.
    if 2 <= i <= d:
        return i - 1
    if i == d + 1:
        return d - 1
    if d + 2 <= i <= 2 * d:
        return i - 2
    if i == 2 * d + 1:
        return 2 * d - 2
    return i - 3


def desurject_reduce(phi: Homomorphism) -> Homomorphism:
    """
    Turn a non-surjective homomorphism into F_d into one into F_{d-1}.

    Labels are rotated so the first missing vertex becomes v_1. The fibre pairs
    {V_d, V_{d+1}} and {V_{2d}, V_{2d+1}} are merged; the rest shift down.
    """
    d = _fd_degree(phi.target)
    if d == 1:
        raise InvalidArgumentError("F_1 has no smaller member to reduce to")
    missing = phi.missing
    if not missing:
        raise NotApplicableError("Homomorphism is surjective")
    offset = missing[0]
    order = fd_order(d)
    reduced = tuple(_merged_index((t - offset) % order + 1, d) - 1 for t in phi.map)
    result = Homomorphism(phi.source, make_fd(d - 1), reduced)
    verify_homomorphism(result, f"reduction F_{d} -> F_{d - 1}")
    return result


def surjective_homomorphism_to_fd(
    g: Graph,
    d_max: int,
    any_solution: bool = False,
    max_source: int = MAX_SOURCE_VERTICES,
    max_target: int = MAX_TARGET_VERTICES,
) -> Optional[FdTypeResult]:
    """
    A homomorphism into F_{d_max}, reduced until it is surjective onto some F_d.
    """
    require_triangle_free(g)
    phi = find_homomorphism(g, make_fd(d_max), any_solution, max_source, max_target)
    if phi is None:
        return None
    d = d_max
    while d > 1 and not phi.is_surjective():
        phi = desurject_reduce(phi)
        d -= 1
    if d == 1 and not phi.is_surjective() and g.n >= 2:
        # Only an edgeless graph misses a vertex of K2.
        phi = Homomorphism(g, phi.target, (0,) + (1,) * (g.n - 1))
    logger.debug(f"Graph on {g.n} vertices is of F_{d}-type")
    return FdTypeResult(d, phi)


def disturbed_parameters(eps: Rational, k: int) -> Fraction:
    """
    δ = (min(ε, 1/k) / (k+2))², the largest δ with (k+2)√δ <= min(ε, 1/k).
    """
    eps = Fraction(eps)
    if eps <= 0 or k < 1:
        raise InvalidArgumentError(f"Need eps > 0 and k >= 1, got {eps}, {k}")
    return (min(eps, Fraction(1, k)) / (k + 2)) ** 2


def disturbed_eps(delta: Rational, k: int) -> Fraction:
    """
    A rational upper bound on max((k+2)√δ, δ + 2√δ).
    """
    delta = Fraction(delta)
    root = sqrt_upper(delta)
    return max((k + 2) * root, delta + 2 * root)


def _greedy_maximal(h: Graph, seed: Sequence[int]) -> VertexSet:
    chosen = to_mask(seed)
    for i in h.vertices:
        if not chosen >> i & 1 and not h.masks[i] & chosen:
            chosen |= 1 << i
    return tuple(bits(chosen))


def _exact_vertex(
    independent: VertexSet, neighborhood_owner: Dict[VertexSet, int], star: StarExtension
) -> Optional[int]:
    if independent in neighborhood_owner:
        return neighborhood_owner[independent]
    for index, added in star.added:
        if added == independent:
            return index
    return None


def build_disturbed_pair(g: Graph, h: Graph, partition: Partition, delta: Rational) -> DisturbedPair:
    """
    From G close to a blowup of h, build G' and a strong homomorphism G' -> H*.

    J collects vertices meeting at least √δ·n edges of F = E(G) △ E(H_𝒱). They keep
    their block unless they are in J; a vertex of J goes to the vertex of H* whose
    neighbourhood is I(v), the lexicographically first maximal independent set
    containing I_0(v) = {i : |N(v) ∩ V_i| > √δ·n}. G' is the blowup of H* along φ.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise InvalidArgumentError(f"delta must be positive, got {delta}")
    require_triangle_free(g)
    if not maximality_class(h).is_maximal:
        raise PreconditionViolationError("Template is not maximal triangle-free")
    witness = check_eps_approximation(g, h, partition)
    if witness.eps_achieved > delta:
        raise HypothesisViolationError(f"Graph is only {witness.eps_achieved}-approximated, need {delta}")

    n, k = g.n, h.n
    f_degree = [0] * n
    for u, v in witness.diff_edges:
        f_degree[u] += 1
        f_degree[v] += 1
    j_set = tuple(v for v in g.vertices if at_least_sqrt_multiple(f_degree[v], delta, n))
    # |J|·√δn/2 <= |F| <= δn² gives |J| <= 2√δn.
    if len(j_set) ** 2 > 4 * delta * n * n:
        logger.critical(f"|J| = {len(j_set)} exceeds 2√δn with δ = {delta}, n = {n}")
        raise TheoremViolationError("Covering set J is too large", {"j": list(j_set), "delta": str(delta)})

    star = star_extension(h)
    neighborhood_owner: Dict[VertexSet, int] = {}
    for i in reversed(range(k)):
        neighborhood_owner[tuple(sorted(h.neighbors(i)))] = i
    block_masks = [to_mask(block) for block in partition.blocks]

    phi = list(partition.assignment)
    choices = []
    for v in j_set:
        seed = tuple(
            i for i in h.vertices if above_sqrt_multiple((g.masks[v] & block_masks[i]).bit_count(), delta, n)
        )
        if to_mask(seed) & _union_neighbors(h, seed):
            raise InconsistentInputError(f"I_0({v}) = {seed} is not independent in the template")
        independent = _greedy_maximal(h, seed)
        target = _exact_vertex(independent, neighborhood_owner, star)
        if target is None:
            # A neighbourhood is independent, so one containing the maximal I(v) equals it.
            logger.error(f"I({v}) = {independent} is maximal but neither maximum nor a neighbourhood")
            raise InconsistentInputError(
                f"No vertex of H* has neighbourhood I({v}) = {independent}",
                {"vertex": v, "seed": list(seed), "independent": list(independent)},
            )
        phi[v] = target
        choices.append((v, seed, independent))

    extension = star.extension
    fibers: List[List[int]] = [[] for _ in range(extension.n)]
    for v, t in enumerate(phi):
        fibers[t].append(v)
    g_prime_edges = set()
    for a, b in extension.edges:
        for u in fibers[a]:
            for w in fibers[b]:
                g_prime_edges.add((u, w) if u < w else (w, u))
    g_prime = Graph(n, frozenset(g_prime_edges))
    hom = Homomorphism(g_prime, extension, tuple(phi))
    verify_homomorphism(hom, "disturbed-pair map")

    logger.info(f"Disturbed pair: |F| = {len(witness.diff_edges)}, |J| = {len(j_set)}")
    return DisturbedPair(
        g=g,
        g_prime=g_prime,
        phi=hom,
        j_set=j_set,
        star=star,
        partition=partition,
        delta=delta,
        f_edges=witness.diff_edges,
        choices=tuple(choices),
    )


def _union_neighbors(h: Graph, vertices: Sequence[int]) -> int:
    mask = 0
    for i in vertices:
        mask |= h.masks[i]
    return mask


def balance_deviation(wf: WeightFunction, base_vertices: int) -> Fraction:
    """
    Largest distance from ε-balance: |ω(v) - 1/k| on base vertices, ω(I) on added ones.
    """
    share = Fraction(1, base_vertices)
    deviations = [abs(wf.w[v] - share) for v in range(base_vertices)]
    deviations += list(wf.w[base_vertices:])
    return max(deviations, default=Fraction(0))


def delta_bound_violation(
    dp: DisturbedPair, max_extra_neighbors: int, weights: Optional[WeightFunction]
) -> Optional[str]:
    """
    The first bound of the extraction, stated in δ alone, that the pair breaks.

    J must cover E(G) minus E(G') with |J| <= 2√δn, no vertex may keep more than
    (k+2)√δn extra neighbours, base shares stay within δ + 2√δ of 1/k and added
    shares at most 2√δ. These hold whatever ε the pair is checked against.
    """
    n, k, delta = dp.g.n, dp.star.base.n, dp.delta
    extra = dp.g.edges - dp.g_prime.edges
    if not covers(dp.j_set, extra) or not at_most_sqrt_multiple(len(dp.j_set), delta, 2 * n):
        return "j-cover"
    if not at_most_sqrt_multiple(max_extra_neighbors, delta, (k + 2) * n):
        return "extra-neighbors"
    if weights is None:
        return None
    share = Fraction(1, k)
    if any(not at_most_sqrt_multiple(abs(weights.w[i] - share) - delta, delta, 2) for i in range(k)):
        return "base-share"
    if any(not at_most_sqrt_multiple(w, delta, 2) for w in weights.w[k:]):
        return "added-share"
    return None


def verify_disturbed(dp: DisturbedPair, eps: Rational) -> DisturbedReport:
    eps = Fraction(eps)
    disturbed = is_eps_disturbed(dp.g, dp.g_prime, eps, covering_hint=dp.j_set)

    deviation = Fraction(0)
    weights = None
    if dp.phi.is_edge_preserving():
        weights = pushforward(WeightFunction.uniform(dp.g_prime), dp.phi)
        deviation = balance_deviation(weights, dp.star.base.n)
        balanced = deviation <= eps
    else:
        balanced = False

    violation = first_strong_violation(dp.phi)
    report = DisturbedReport(
        disturbed=disturbed,
        balanced=balanced,
        max_deviation=deviation,
        strong=violation is None,
        violating_non_edge=violation,
        broken_bound=delta_bound_violation(dp, disturbed.max_extra_neighbors, weights),
    )
    if not report.passed:
        logger.warning(
            f"Disturbed pair fails at eps = {eps}: disturbed={disturbed.disturbed} ({disturbed.violated}), "
            f"balanced={balanced}, strong={violation is None}, broken bound={report.broken_bound}"
        )
    return report
