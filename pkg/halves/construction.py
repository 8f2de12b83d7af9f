"""
Explicit sparse-half constructions.

- halves of (F_d, ω) for d <= 5 under weighted minimum degree 5/14
- the five-half distribution on a balanced C5
- the twenty-half distribution on a balanced P*
- the end-to-end minimum-degree pipeline on plain graphs
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Sequence, Tuple

from common.cache import Cache
from common.decorators import log_runtime
from common.logger import get_logger

from .errors import (
    HypothesisViolationError,
    InvalidArgumentError,
    InvalidHalfError,
    LemmaViolationError,
    PipelineFailureError,
    StructureViolationError,
    TheoremViolationError,
)
from .fd_family import fd_order, fd_window, make_fd, make_pstar
from .graph import Graph, VertexSet, degree_profile, induced_edge_count, require_triangle_free, to_mask
from .homomorphism import MAX_SOURCE_VERTICES, surjective_homomorphism_to_fd
from .rational import Rational
from .weighted import (
    HALF,
    SPARSE_BOUND,
    Half,
    HalfDistribution,
    WeightFunction,
    certify,
    edge_mass,
    lift_half,
    pushforward,
    round_half_to_set,
    weighted_min_degree,
)

logger = get_logger(__name__)

MIN_DEGREE = Fraction(5, 14)
C5_BALANCE = Fraction(1, 50)
C5_UNIFORMITY = Fraction(1, 30)
PSTAR_BALANCE = Fraction(1, 500)
PSTAR_UNIFORMITY = Fraction(1, 80)
PSTAR_HALF_COUNT = 20

_cache = Cache().namespace("construction")


@dataclass(frozen=True)
class FdWeighting:
    d: int
    w: Tuple[Fraction, ...]

    def __post_init__(self):
        if not 1 <= self.d:
            raise InvalidArgumentError(f"F_d needs d >= 1, got {self.d}")
        object.__setattr__(self, "w", tuple(Fraction(x) for x in self.w))
        if len(self.w) != fd_order(self.d):
            raise InvalidArgumentError(f"F_{self.d} has {fd_order(self.d)} vertices, got {len(self.w)} weights")

    @classmethod
    def uniform(cls, d: int) -> "FdWeighting":
        return cls(d, (Fraction(1, fd_order(d)),) * fd_order(d))

    @property
    def graph(self) -> Graph:
        return make_fd(self.d)

    @property
    def weights(self) -> WeightFunction:
        return WeightFunction(self.graph, self.w)

    @property
    def min_degree(self) -> Fraction:
        return weighted_min_degree(self.weights)


class PStarFamily(NamedTuple):
    """
    One half of P*: star vertex `star` in full, `partner` at a quarter, the independent
    triple in full and the complementary triple at the common residual value.
    """

    star: int
    partner: int
    triple: VertexSet
    complement: VertexSet


class PipelineResult(NamedTuple):
    vertices: VertexSet
    edges: int
    d: int
    fd_half_mass: Fraction
    lifted_mass: Fraction


def _heavy_window_half(fw: FdWeighting, wf: WeightFunction) -> List[Half]:
    # A window of d consecutive vertices is independent in F_d.
    order = fd_order(fw.d)
    for start in range(order):
        window = fd_window(fw.d, start, fw.d)
        if wf.mass(window) < HALF:
            continue
        s = [Fraction(0)] * order
        remaining = HALF
        for v in window:
            s[v] = min(fw.w[v], remaining)
            remaining -= s[v]
        logger.debug(f"F_{fw.d}: window starting at {start} carries weight >= 1/2")
        return [Half(wf, tuple(s))]
    return []


def _fd1_half(fw: FdWeighting, wf: WeightFunction) -> Half:
    heavy = 0 if fw.w[0] >= fw.w[1] else 1
    return Half.from_mapping(wf, {heavy: HALF})


def _fd2_halves(fw: FdWeighting, wf: WeightFunction) -> List[Half]:
    halves = []
    for i in range(5):
        a, b, c = fd_window(2, i, 3)
        values = {a: fw.w[a], b: fw.w[b], c: HALF - fw.w[a] - fw.w[b]}
        halves.append(Half.from_mapping(wf, values))
    return halves


def _window_halves(fw: FdWeighting, wf: WeightFunction) -> List[Half]:
    # d = 3, 4: ω on v_{i+1..i+d}, half the leftover on v_i and v_{i+d+1}.
    d, order = fw.d, fd_order(fw.d)
    halves = []
    for i in range(order):
        window = fd_window(d, i + 1, d)
        residual = (HALF - wf.mass(window)) / 2
        values = {v: fw.w[v] for v in window}
        values[i] = residual
        values[(i + d + 1) % order] = residual
        halves.append(Half.from_mapping(wf, values))
    return halves


def construct_fd_halves(fw: FdWeighting) -> List[Half]:
    if not 1 <= fw.d <= 5:
        raise InvalidArgumentError(f"Constructions exist for 1 <= d <= 5, got {fw.d}")
    wf = fw.weights
    if fw.d >= 3 and fw.min_degree < MIN_DEGREE:
        raise HypothesisViolationError(f"Weighted minimum degree {fw.min_degree} < 5/14 on F_{fw.d}")

    if fw.d == 1:
        return [_fd1_half(fw, wf)]
    if fw.d == 5:
        # Degrees average exactly 5/14 on F_5, so only the uniform weighting reaches it.
        if not wf.is_uniform:
            raise HypothesisViolationError(f"F_5 needs the uniform weighting, got {[str(x) for x in fw.w]}")
        return [Half.from_mapping(wf, {v: fw.w[v] for v in range(7)})]
    heavy = _heavy_window_half(fw, wf)
    if heavy:
        return heavy
    if fw.d == 2:
        return _fd2_halves(fw, wf)
    return _window_halves(fw, wf)


def best_sparse_half_fd(fw: FdWeighting) -> Half:
    """
    The construction's half of least edge mass, ties to the lowest index.
    """
    halves = construct_fd_halves(fw)
    masses = [edge_mass(half) for half in halves]
    best = min(range(len(halves)), key=lambda t: (masses[t], t))
    if masses[best] > SPARSE_BOUND:
        logger.critical(f"No sparse half on F_{fw.d} with weights {[str(x) for x in fw.w]}")
        raise TheoremViolationError(
            f"No constructed half of F_{fw.d} is sparse",
            {"d": fw.d, "weights": [str(x) for x in fw.w], "masses": [str(m) for m in masses]},
        )
    return halves[best]


def _require_balanced(wf: WeightFunction, base: int, eps: Fraction):
    share = Fraction(1, base)
    for v in range(base):
        if abs(wf.w[v] - share) > eps:
            raise HypothesisViolationError(f"ω({v}) = {wf.w[v]} is not within {eps} of {share}")
    for v in range(base, wf.graph.n):
        if wf.w[v] > eps:
            raise HypothesisViolationError(f"Added vertex {v} has weight {wf.w[v]} > {eps}")


def _certified(dist: HalfDistribution, c: Fraction, what: str) -> HalfDistribution:
    certificate = certify(dist, c)
    if not certificate.passed:
        logger.critical(
            f"{what} distribution fails: E[s(E)] = {certificate.expected_edge_mass}, "
            f"uniformity {certificate.uniformity_constant} < {c}"
        )
        raise TheoremViolationError(
            f"{what} distribution is not a {c}-uniform sparse half",
            {"weights": [str(x) for x in dist.bound.w]},
        )
    return dist


def c5_uniform_distribution(wf: WeightFunction) -> HalfDistribution:
    if wf.graph != make_fd(2):
        raise InvalidArgumentError("Weights must live on C5")
    _require_balanced(wf, 5, C5_BALANCE)
    dist = HalfDistribution.uniform(_fd2_halves(FdWeighting(2, wf.w), wf))
    return _certified(dist, C5_UNIFORMITY, "C5")


def pstar_half_families() -> Tuple[PStarFamily, ...]:
    """
    For each star vertex w: M = V(P) minus N(w) induces three disjoint edges; every way
    of picking one end per edge whose other ends lie in the neighbourhood of exactly
    one other star vertex gives a family. Four per star vertex, twenty in all.
    """

    def build():
        star = make_pstar()
        petersen = star.base
        base_mask = (1 << petersen.n) - 1
        families = []
        for index, members in star.added:
            rest = base_mask & ~to_mask(members)
            matching = sorted(
                (u, v) for u, v in petersen.edges if rest >> u & 1 and rest >> v & 1
            )
            degrees = [(petersen.masks[v] & rest).bit_count() for v in range(petersen.n) if rest >> v & 1]
            if len(matching) != 3 or any(degree != 1 for degree in degrees):
                raise StructureViolationError(
                    f"Non-neighbourhood of star vertex {index} is not a 3-edge matching",
                    {"star": index, "edges": [list(e) for e in matching]},
                )
            found = []
            for choice in range(8):
                triple = tuple(sorted(edge[choice >> t & 1] for t, edge in enumerate(matching)))
                complement = tuple(sorted(edge[1 - (choice >> t & 1)] for t, edge in enumerate(matching)))
                if to_mask(triple) & _neighbor_union(petersen, triple):
                    continue
                partners = [
                    other for other, other_members in star.added
                    if other != index and set(complement) <= set(other_members)
                ]
                if len(partners) == 1:
                    found.append(PStarFamily(index, partners[0], triple, complement))
            if len(found) != 4:
                logger.critical(f"Star vertex {index} has {len(found)} admissible triples")
                raise StructureViolationError(
                    f"Star vertex {index} has {len(found)} admissible triples, expected 4",
                    {"star": index, "triples": [list(f.triple) for f in found]},
                )
            families.extend(found)
        return tuple(families)

    return _cache("pstar_families", build)


def _neighbor_union(g: Graph, vertices: Sequence[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= g.masks[v]
    return mask


def pstar_half(wf: WeightFunction, family: PStarFamily) -> Half:
    w = wf.w
    quarter = w[family.partner] / 4
    taken = wf.mass(family.triple) + w[family.star] + quarter
    residual = (HALF - taken) / 3
    for v in family.complement:
        if residual < w[v] / 3:
            logger.critical(f"Residual {residual} below ω({v})/3 for family {family}")
            raise LemmaViolationError(
                "Residual value falls below a third of a complement weight",
                {"family": family._asdict(), "weights": [str(x) for x in w]},
            )
    values = {v: w[v] for v in family.triple}
    values.update({v: residual for v in family.complement})
    values[family.star] = w[family.star]
    values[family.partner] = quarter
    return Half.from_mapping(wf, values)


def pstar_uniform_distribution(wf: WeightFunction) -> HalfDistribution:
    star = make_pstar()
    if wf.graph != star.extension:
        raise InvalidArgumentError("Weights must live on P*")
    _require_balanced(wf, star.base.n, PSTAR_BALANCE)
    families = pstar_half_families()
    if len(families) != PSTAR_HALF_COUNT:
        raise StructureViolationError(f"Expected {PSTAR_HALF_COUNT} halves, built {len(families)}")
    dist = HalfDistribution.uniform([pstar_half(wf, family) for family in families])
    return _certified(dist, PSTAR_UNIFORMITY, "P*")


def c5_balance_inequality(delta: Rational) -> bool:
    """
    (1/5)(1/5 - δ)(1/10 - 2δ) >= (1/30)(1/5 + δ)²: every C5 edge keeps its share
    under δ-balanced weights.
    """
    delta = Fraction(delta)
    fifth = Fraction(1, 5)
    return fifth * (fifth - delta) * (Fraction(1, 10) - 2 * delta) >= C5_UNIFORMITY * (fifth + delta) ** 2


def uniform_transfer_eps(c: Rational) -> Fraction:
    c = Fraction(c)
    return c * c / (2 * (1 + c))


def close_approximation_constants(v_h: int, alpha: Rational) -> Tuple[Fraction, Fraction]:
    """
    (δ, c) for templates with an α-uniform sparse half: δ = min(1/(3v²), α²/(2(1+α))),
    c = min(α, 1/(2v)).
    """
    alpha = Fraction(alpha)
    delta = min(Fraction(1, 3 * v_h * v_h), uniform_transfer_eps(alpha))
    return delta, min(alpha, Fraction(1, 2 * v_h))


@log_runtime
def run_min_degree_pipeline(
    g: Graph, any_solution: bool = False, max_source: int = MAX_SOURCE_VERTICES
) -> PipelineResult:
    """
    Homomorphism onto some F_d (d <= 5), pushed-forward weights, a sparse half of
    (F_d, ω_φ), its lift to (G, ω_u), and the rounded vertex set.
    """
    require_triangle_free(g)
    n = g.n
    profile = degree_profile(g)
    if 14 * profile.min_deg < 5 * n:
        raise HypothesisViolationError(f"Minimum degree {profile.min_deg} < 5n/14 with n = {n}")
    if n < 2:
        return PipelineResult((), 0, 1, Fraction(0), Fraction(0))

    report = {"n": n, "min_degree": profile.min_deg}
    found = surjective_homomorphism_to_fd(g, 5, any_solution, max_source)
    if found is None:
        raise PipelineFailureError("No homomorphism into F_5", stage="homomorphism", report=report)
    report["d"] = found.d

    uniform = WeightFunction.uniform(g)
    pushed = pushforward(uniform, found.phi)
    fd_half = best_sparse_half_fd(FdWeighting(found.d, pushed.w))
    report["fd_half_mass"] = str(edge_mass(fd_half))
    lifted = lift_half(fd_half, found.phi, uniform)
    try:
        vertices = round_half_to_set(lifted)
    except InvalidHalfError as e:
        raise PipelineFailureError(str(e), stage="rounding", report=report) from e

    edges = induced_edge_count(g, vertices)
    if len(vertices) != n // 2 or 50 * edges > n * n:
        logger.critical(f"Pipeline returned {len(vertices)} vertices spanning {edges} edges on n = {n}")
        raise TheoremViolationError("Pipeline output is not a sparse half", {"set": list(vertices), "edges": edges})
    logger.info(f"Sparse half via F_{found.d}: {len(vertices)} vertices, {edges} edges, bound {Fraction(n * n, 50)}")
    return PipelineResult(vertices, edges, found.d, edge_mass(fd_half), edge_mass(lifted))


def sparse_half_min_degree(g: Graph) -> VertexSet:
    return run_min_degree_pipeline(g).vertices
