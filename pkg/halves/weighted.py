"""
Weight functions, halves and half distributions.

All arithmetic here is exact (fractions.Fraction). Extremal instances meet the
1/50 threshold with equality, so no tolerance is ever applied.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from common.logger import get_logger

from .errors import DegenerateFiberError, InvalidArgumentError, InvalidHalfError, LemmaViolationError
from .graph import Graph, VertexSet, bits, induced_edge_count

if TYPE_CHECKING:
    from .homomorphism import Homomorphism

logger = get_logger(__name__)

SPARSE_BOUND = Fraction(1, 50)
HALF = Fraction(1, 2)

Rational = Union[Fraction, int]


def _as_fractions(values: Iterable[Rational]) -> Tuple[Fraction, ...]:
    return tuple(Fraction(value) for value in values)


@dataclass(frozen=True)
class WeightFunction:
    """
    Non-negative vertex weights summing to exactly 1. Zero weights are allowed.
    """

    graph: Graph
    w: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "w", _as_fractions(self.w))
        if len(self.w) != self.graph.n:
            raise InvalidArgumentError(f"Expected {self.graph.n} weights, got {len(self.w)}")
        negative = [v for v, value in enumerate(self.w) if value < 0]
        if negative:
            raise InvalidArgumentError(f"Negative weight at vertices {negative}")
        if self.graph.n and sum(self.w) != 1:
            raise InvalidArgumentError(f"Weights sum to {sum(self.w)}, not 1")

    @classmethod
    def uniform(cls, g: Graph) -> "WeightFunction":
        return cls(g, (Fraction(1, g.n),) * g.n)

    @property
    def is_uniform(self) -> bool:
        return all(value == Fraction(1, self.graph.n) for value in self.w)

    def mass(self, vertices: Iterable[int]) -> Fraction:
        return sum((self.w[v] for v in vertices), Fraction(0))

    def degree(self, v: int) -> Fraction:
        return self.mass(bits(self.graph.masks[v]))

    def edge_weight(self, u: int, v: int) -> Fraction:
        return self.w[u] * self.w[v]


# A graph together with its weights.
WeightedGraph = WeightFunction


@dataclass(frozen=True)
class Half:
    """
    Vertex values s with 0 <= s(v) <= ω(v) summing to exactly 1/2.
    """

    bound: WeightFunction
    s: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "s", _as_fractions(self.s))
        if len(self.s) != self.graph.n:
            raise InvalidHalfError(f"Expected {self.graph.n} values, got {len(self.s)}")
        for v, (value, weight) in enumerate(zip(self.s, self.bound.w)):
            if value < 0 or value > weight:
                raise InvalidHalfError(f"s({v}) = {value} outside [0, {weight}]")
        if sum(self.s) != HALF:
            raise InvalidHalfError(f"Half sums to {sum(self.s)}, not 1/2")

    @classmethod
    def from_mapping(cls, bound: WeightFunction, values: Mapping[int, Rational]) -> "Half":
        s = [Fraction(0)] * bound.graph.n
        for v, value in values.items():
            s[v] = Fraction(value)
        return cls(bound, tuple(s))

    @property
    def graph(self) -> Graph:
        return self.bound.graph

    @property
    def support(self) -> VertexSet:
        return tuple(v for v, value in enumerate(self.s) if value > 0)

    def neighborhood_mass(self, v: int) -> Fraction:
        return sum((self.s[u] for u in bits(self.graph.masks[v])), Fraction(0))


@dataclass(frozen=True)
class HalfDistribution:
    """
    Finitely many halves of one weighted graph with probabilities summing to 1.
    """

    halves: Tuple[Tuple[Half, Fraction], ...]

    def __post_init__(self):
        if not self.halves:
            raise InvalidArgumentError("A distribution needs at least one half")
        object.__setattr__(self, "halves", tuple((half, Fraction(p)) for half, p in self.halves))
        if any(p < 0 for _, p in self.halves):
            raise InvalidArgumentError("Negative probability")
        if sum(p for _, p in self.halves) != 1:
            raise InvalidArgumentError("Probabilities do not sum to 1")
        bound = self.halves[0][0].bound
        if any(half.bound != bound for half, _ in self.halves[1:]):
            raise InvalidArgumentError("All halves must share one weighted graph")

    @classmethod
    def uniform(cls, halves: Sequence[Half]) -> "HalfDistribution":
        p = Fraction(1, len(halves))
        return cls(tuple((half, p) for half in halves))

    @property
    def bound(self) -> WeightFunction:
        return self.halves[0][0].bound


@dataclass(frozen=True)
class UniformityCertificate:
    expected_edge_mass: Fraction
    uniformity_constant: Optional[Fraction]
    c: Fraction

    @property
    def sparse(self) -> bool:
        return self.expected_edge_mass <= SPARSE_BOUND

    @property
    def uniform(self) -> bool:
        # No weighted edge leaves the requirement vacuous.
        return self.uniformity_constant is None or self.uniformity_constant >= self.c

    @property
    def passed(self) -> bool:
        return self.sparse and self.uniform


def edge_mass(h: Half) -> Fraction:
    s = h.s
    return sum((s[u] * s[v] for u, v in h.graph.edges), Fraction(0))


def is_sparse_half(h: Half) -> bool:
    return edge_mass(h) <= SPARSE_BOUND


def weighted_min_degree(wf: WeightFunction) -> Fraction:
    if wf.graph.n == 0:
        return Fraction(0)
    return min(wf.degree(v) for v in wf.graph.vertices)


def round_half_to_set(h: Half) -> VertexSet:
    """
    Turn a sparse half of (G, uniform) into ⌊n/2⌋ vertices spanning at most n²/50 edges.

    Two fractional vertices at a time exchange mass: the one whose neighbourhood
    carries more s-mass gives δ = min(s(donor), 1/n - s(receiver)) to the other.
    Edge mass never increases; on ties the lower-indexed vertex receives.
    """
    g = h.graph
    n = g.n
    if not h.bound.is_uniform:
        raise InvalidHalfError("Rounding needs a half of the uniform weighting")
    mass = edge_mass(h)
    if mass > SPARSE_BOUND:
        raise InvalidHalfError(f"Half is not sparse: edge mass {mass} > {SPARSE_BOUND}")

    unit = Fraction(1, n)
    s = list(h.s)
    fractional = [v for v in g.vertices if 0 < s[v] < unit]
    steps = 0
    while len(fractional) >= 2:
        u, v = fractional[0], fractional[1]
        around_u = sum((s[x] for x in bits(g.masks[u])), Fraction(0))
        around_v = sum((s[x] for x in bits(g.masks[v])), Fraction(0))
        donor, receiver = (u, v) if around_u > around_v else (v, u)
        around_donor, around_receiver = (around_u, around_v) if donor == u else (around_v, around_u)

        delta = min(s[donor], unit - s[receiver])
        change = delta * (around_receiver - around_donor)
        if g.has_edge(donor, receiver):
            change -= delta * delta
        if change > 0:
            logger.critical(f"Mass transfer {donor}->{receiver} raised edge mass by {change}")
            raise LemmaViolationError(
                "Rounding step increased edge mass",
                {"donor": donor, "receiver": receiver, "delta": str(delta), "values": [str(x) for x in s]},
            )
        s[donor] -= delta
        s[receiver] += delta
        mass += change
        steps += 1
        fractional = [x for x in fractional if 0 < s[x] < unit]

    full = tuple(v for v in g.vertices if s[v] == unit)
    if len(full) != n // 2:
        raise LemmaViolationError("Rounding left the wrong number of full vertices", {"full": list(full)})
    edges = induced_edge_count(g, full)
    if 50 * edges > n * n:
        logger.critical(f"Rounded set {full} spans {edges} edges on {n} vertices")
        raise LemmaViolationError("Rounded set is not sparse", {"set": list(full), "edges": edges})
    logger.debug(f"Rounded half in {steps} transfers to a set spanning {edges} edges")
    return full


def pushforward(wf: WeightFunction, phi: "Homomorphism") -> WeightFunction:
    """
    ω_φ(v) = ω(φ⁻¹(v)). Target vertices outside the image get weight 0.
    """
    if phi.source != wf.graph:
        raise InvalidArgumentError("Homomorphism source differs from the weighted graph")
    if not phi.is_edge_preserving():
        raise InvalidArgumentError("Map is not a homomorphism")
    w = [Fraction(0)] * phi.target.n
    for v, image in enumerate(phi.map):
        w[image] += wf.w[v]
    return WeightFunction(phi.target, tuple(w))


def lift_half(s_h: Half, phi: "Homomorphism", wf: WeightFunction) -> Half:
    """
    s_G(v) = ω(v) / ω_φ(φ(v)) · s_H(φ(v)).
    """
    fiber_weight = pushforward(wf, phi).w
    for t, value in enumerate(s_h.s):
        if value > 0 and fiber_weight[t] == 0:
            raise DegenerateFiberError(f"Target vertex {t} carries s = {value} but its fiber has weight 0")
    if s_h.bound.w != fiber_weight or s_h.graph != phi.target:
        raise InvalidArgumentError("Half is not a half of the pushforward weighting")

    s = []
    for v, image in enumerate(phi.map):
        s.append(Fraction(0) if fiber_weight[image] == 0 else wf.w[v] / fiber_weight[image] * s_h.s[image])
    lifted = Half(wf, tuple(s))
    if edge_mass(lifted) > edge_mass(s_h):
        raise LemmaViolationError("Lifted half is denser than the original")
    return lifted


def edge_expectation(dist: HalfDistribution, u: int, v: int) -> Fraction:
    return sum((p * half.s[u] * half.s[v] for half, p in dist.halves), Fraction(0))


def expected_edge_mass(dist: HalfDistribution) -> Fraction:
    return sum((p * edge_mass(half) for half, p in dist.halves), Fraction(0))


def uniformity_constant(dist: HalfDistribution) -> Optional[Fraction]:
    """
    min over edges of E[s(e)] / ω(e); edges of zero weight are skipped, None if none remain.
    """
    bound = dist.bound
    ratios = [
        edge_expectation(dist, u, v) / bound.edge_weight(u, v)
        for u, v in bound.graph.sorted_edges()
        if bound.edge_weight(u, v) > 0
    ]
    return min(ratios) if ratios else None


def certify(dist: HalfDistribution, c: Rational) -> UniformityCertificate:
    return UniformityCertificate(
        expected_edge_mass=expected_edge_mass(dist),
        uniformity_constant=uniformity_constant(dist),
        c=Fraction(c),
    )


def fiber_sums(h: Half, phi: "Homomorphism") -> List[Fraction]:
    """
    Pushforward of the half's own values along phi.
    """
    sums = [Fraction(0)] * phi.target.n
    for v, image in enumerate(phi.map):
        sums[image] += h.s[v]
    return sums


def half_from_set(wf: WeightFunction, members: Iterable[int]) -> Half:
    """
    The half equal to ω on `members`; their weight must be exactly 1/2.
    """
    members = list(members)
    values: Dict[int, Fraction] = {v: wf.w[v] for v in members}
    return Half.from_mapping(wf, values)
