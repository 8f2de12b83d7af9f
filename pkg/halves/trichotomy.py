"""
Dense triangle-free graphs near e = n²/5: the degree dichotomy, the C5 trichotomy,
and the degree conditions of the imported stability theorem.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, List, NamedTuple, Optional

from common.logger import get_logger

from .approximation import ApproximationWitness, check_eps_approximation
from .errors import (
    HypothesisViolationError,
    InvalidArgumentError,
    LemmaViolationError,
    PipelineFailureError,
)
from .fd_family import make_fd
from .graph import Edge, Graph, Partition, VertexSet, degree_profile, is_bipartite, require_triangle_free, to_mask
from .homomorphism import MAX_SOURCE_VERTICES, Homomorphism, find_homomorphism
from .rational import Rational, at_least_sqrt_multiple, at_most_sqrt_multiple
from .types import DichotomyCase, Outcome

logger = get_logger(__name__)

DELTA_DIVISOR = 40
TWO_FIFTHS = Fraction(2, 5)


class DichotomyResult(NamedTuple):
    case: DichotomyCase
    high: VertexSet
    low: VertexSet


class KeevashSudakovReport(NamedTuple):
    mean_square_degree_ok: bool
    max_degree_high: bool
    average_degree_ok: bool
    condition_a: bool
    condition_b: bool

    @property
    def applies(self) -> bool:
        return self.condition_a or self.condition_b


@dataclass(frozen=True)
class TrichotomyReport:
    outcome: Outcome
    eps: Fraction
    delta: Fraction
    applicable: List[Outcome]
    high: VertexSet = ()
    low: VertexSet = ()
    removed_edges: FrozenSet[Edge] = frozenset()
    bipartite_sides: Optional[List[int]] = None
    witness: Optional[ApproximationWitness] = None
    phi: Optional[Homomorphism] = field(default=None, repr=False)


def _edge_hypothesis(g: Graph, slack: Fraction) -> bool:
    # e(G) >= (1/5 - slack)·n²
    return g.m >= (Fraction(1, 5) - slack) * g.n * g.n


def low_degree_vertices(g: Graph, delta: Rational) -> VertexSet:
    """
    Vertices of degree at most (2/5 - 2√δ)n.
    """
    n = g.n
    return tuple(v for v in g.vertices if at_least_sqrt_multiple(TWO_FIFTHS * n - g.degree(v), delta, 2 * n))


def degree_dichotomy(g: Graph, delta: Rational) -> DichotomyResult:
    """
    Either (1) at least δn vertices have degree at least (2/5 + δ)n, or (2) at most
    2√δn vertices have degree at most (2/5 - 2√δ)n. Case (1) is reported first.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise InvalidArgumentError(f"delta must be positive, got {delta}")
    if not _edge_hypothesis(g, delta):
        raise HypothesisViolationError(f"{g.m} edges < (1/5 - {delta})n² with n = {g.n}")
    n = g.n
    high = tuple(v for v in g.vertices if g.degree(v) >= (TWO_FIFTHS + delta) * n)
    low = low_degree_vertices(g, delta)
    if len(high) >= delta * n:
        return DichotomyResult(DichotomyCase.many_high, high, low)
    if at_most_sqrt_multiple(len(low), delta, 2 * n):
        return DichotomyResult(DichotomyCase.few_low, high, low)
    logger.critical(f"Degree dichotomy fails: |high| = {len(high)}, |low| = {len(low)}, δ = {delta}, n = {n}")
    raise LemmaViolationError(
        "Neither outcome of the degree dichotomy holds",
        {"edges": g.sorted_edges(), "n": n, "delta": str(delta)},
    )


def default_delta(eps: Rational, divisor: int = DELTA_DIVISOR) -> Fraction:
    return (Fraction(eps) / divisor) ** 2


def classify_trichotomy(
    g: Graph,
    eps: Rational,
    delta: Optional[Rational] = None,
    divisor: int = DELTA_DIVISOR,
    any_solution: bool = False,
    max_source: int = MAX_SOURCE_VERTICES,
) -> TrichotomyReport:
    """
    Follow the constructive proof: many high-degree vertices give (ii); otherwise the
    low-degree set S is removed and G - S is mapped to C5. A non-surjective map makes
    G minus the edges at S bipartite (iii); a surjective one yields the partition
    (V_1 ∪ S, V_2, ..., V_5) for (i).
    """
    eps = Fraction(eps)
    delta = default_delta(eps, divisor) if delta is None else Fraction(delta)
    if eps <= 0 or delta <= 0:
        raise InvalidArgumentError(f"eps and delta must be positive, got {eps}, {delta}")
    require_triangle_free(g)
    n = g.n
    dichotomy = degree_dichotomy(g, delta)
    applicable = []
    if dichotomy.case == DichotomyCase.many_high:
        applicable.append(Outcome.high_degree)

    low = dichotomy.low
    low_mask = to_mask(low)
    removed = frozenset((u, v) for u, v in g.edges if low_mask >> u & 1 or low_mask >> v & 1)
    stripped, labels = g.induced_subgraph(v for v in g.vertices if not low_mask >> v & 1)

    c5 = make_fd(2)
    sub_phi = find_homomorphism(stripped, c5, any_solution, max_source)
    if sub_phi is None:
        if applicable:
            return TrichotomyReport(applicable[0], eps, delta, applicable, dichotomy.high, low, removed)
        raise PipelineFailureError(
            "G - S has no homomorphism into C5",
            stage="homomorphism",
            report={"n": n, "low": list(low), "delta": str(delta)},
        )

    sides = None
    if not sub_phi.is_surjective():
        bipartite, sides = is_bipartite(Graph(n, g.edges - removed))
        if bipartite and len(removed) <= eps * n * n:
            applicable.append(Outcome.near_bipartite)

    # Block 0 absorbs S.
    assignment = [0] * n
    for index, v in enumerate(labels):
        assignment[v] = sub_phi.map[index]
    witness = check_eps_approximation(g, c5, Partition.from_assignment(assignment, 5))
    if sub_phi.is_surjective() and witness.within(eps):
        applicable.append(Outcome.approximated)

    if not applicable:
        logger.warning(
            f"No trichotomy outcome certified at eps = {eps}, delta = {delta} (eps achieved {witness.eps_achieved})"
        )
        raise PipelineFailureError(
            "No outcome could be certified",
            stage="certificate",
            report={
                "eps_achieved": str(witness.eps_achieved),
                "removed": len(removed),
                "surjective": sub_phi.is_surjective(),
            },
        )
    outcome = applicable[0]
    logger.info(f"Trichotomy outcome ({outcome.value}); certified: {[o.value for o in applicable]}")
    return TrichotomyReport(
        outcome=outcome,
        eps=eps,
        delta=delta,
        applicable=applicable,
        high=dichotomy.high,
        low=low,
        removed_edges=removed,
        bipartite_sides=sides,
        witness=witness,
        phi=sub_phi,
    )


def fiber_bounds_check(phi: Homomorphism, delta: Rational) -> bool:
    """
    (1/5 - 3δ)n <= |φ⁻¹(v)| <= (1/5 + 2δ)n for every vertex v of C5.
    """
    delta = Fraction(delta)
    if phi.target != make_fd(2):
        raise InvalidArgumentError("Fibre bounds are stated for maps onto C5")
    n = phi.source.n
    profile = degree_profile(phi.source)
    if not phi.is_surjective() or profile.min_deg < (TWO_FIFTHS - delta) * n:
        logger.warning("Fibre bounds checked outside their hypothesis (surjective map, min degree (2/5 - δ)n)")
    lower, upper = (Fraction(1, 5) - 3 * delta) * n, (Fraction(1, 5) + 2 * delta) * n
    return all(lower <= len(fiber) <= upper for fiber in phi.fibers())


def sum_sq_degree_condition(g: Graph, delta: Rational, gamma: Optional[Rational] = None) -> bool:
    """
    Whether (1/n)Σd² >= (2n/5)². γ defaults to (25/16)δ⁵; with e(G) >= (1/5 - γ)n² and
    at least δn vertices of degree (2/5 + δ)n the inequality must hold.
    """
    delta = Fraction(delta)
    gamma = Fraction(25, 16) * delta**5 if gamma is None else Fraction(gamma)
    if not _edge_hypothesis(g, gamma):
        raise HypothesisViolationError(f"{g.m} edges < (1/5 - {gamma})n² with n = {g.n}")
    n = g.n
    profile = degree_profile(g)
    conclusion = 25 * profile.sum_deg_sq >= 4 * n**3
    high = sum(1 for v in g.vertices if g.degree(v) >= (TWO_FIFTHS + delta) * n)
    if high >= delta * n and not conclusion:
        logger.critical(f"Square-degree bound fails: Σd² = {profile.sum_deg_sq}, n = {n}, δ = {delta}")
        raise LemmaViolationError(
            "Mean square degree below (2n/5)²",
            {"edges": g.sorted_edges(), "n": n, "delta": str(delta), "gamma": str(gamma)},
        )
    return conclusion


def keevash_sudakov_conditions(g: Graph) -> KeevashSudakovReport:
    """
    (a) (1/n)Σd² >= (2n/5)² and Δ < (2/5 + 1/135)n, or (b) Δ >= (2/5 + 1/135)n and
    average degree >= (2/5 - 1/125)n.
    """
    n = g.n
    profile = degree_profile(g)
    mean_square = 25 * profile.sum_deg_sq >= 4 * n**3
    max_high = 27 * profile.max_deg >= 11 * n
    average = 125 * profile.sum_deg >= 49 * n * n
    return KeevashSudakovReport(
        mean_square_degree_ok=mean_square,
        max_degree_high=max_high,
        average_degree_ok=average,
        condition_a=mean_square and not max_high,
        condition_b=max_high and average,
    )
