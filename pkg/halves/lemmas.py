"""
Exact evaluation and randomized falsification of the technical inequalities behind
the F_3, F_4 and P* constructions.

Every target is phrased as an excess: a feasible point with excess > 0 violates the
inequality. The search runs in double precision; anything above the margin is
converted to rationals, repaired onto the constraint set and re-evaluated exactly
before it is reported.
"""

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import qmc

from common.config import select
from common.decorators import log_on_entry, log_runtime
from common.logger import get_logger
from common.parallel import map_ordered
from common.partition import split_budget
from common.seed import make_rng

from .construction import pstar_half_families
from .errors import ConstraintViolationError, InvalidArgumentError
from .rational import format_fraction
from .types import LemmaTarget
from .weighted import HALF

logger = get_logger(__name__)

WINDOW_BOUND = Fraction(5, 14)
BOX_FLOOR = Fraction(1, 14)
PETERSEN_DELTA_MAX = Fraction(1, 90)
WINDOW_CLAIM = Fraction(394, 1000)
PAIR_CLAIM = Fraction(106, 1000)


@dataclass(frozen=True)
class VerifierSettings:
    margin: float = 1e-9
    projection_iterations: int = 100
    projection_tolerance: float = 1e-12
    ascent_steps: int = 20
    ascent_step_size: float = 2e-3
    finite_difference: float = 1e-7
    chunk_size: int = 4096
    denominator_limit: int = 10**12
    counterexample_dir: Optional[str] = None

    @classmethod
    def from_config(cls, config) -> "VerifierSettings":
        defaults = cls()
        return cls(**{
            name: select(config, f"verifier.{name}", getattr(defaults, name))
            for name in cls.__dataclass_fields__
        })


@dataclass(frozen=True)
class ConstraintBox:
    """
    lower <= x <= upper, Σx = total, and Σ over each cyclic window of `window_width`
    consecutive variables among the first `cycle` ones at least `window_bound`.
    """

    lower: Tuple[Fraction, ...]
    upper: Tuple[Fraction, ...]
    total: Fraction = Fraction(1)
    cycle: int = 0
    window_width: int = 0
    window_bound: Fraction = WINDOW_BOUND

    @property
    def variables(self) -> int:
        return len(self.lower)

    @property
    def windows(self) -> List[Tuple[int, ...]]:
        if not self.window_width:
            return []
        return [tuple((i + t) % self.cycle for t in range(self.window_width)) for i in range(self.cycle)]

    def violations(self, x: Sequence[Fraction]) -> List[str]:
        if len(x) != self.variables:
            return [f"expected {self.variables} values, got {len(x)}"]
        found = []
        for i, (value, lo, hi) in enumerate(zip(x, self.lower, self.upper)):
            if not lo <= value <= hi:
                found.append(f"x[{i}] = {value} outside [{lo}, {hi}]")
        if sum(x) != self.total:
            found.append(f"sum {sum(x)} != {self.total}")
        for window in self.windows:
            if sum(x[i] for i in window) < self.window_bound:
                found.append(f"window {window} below {self.window_bound}")
        return found

    def require(self, x: Sequence[Fraction]):
        found = self.violations(x)
        if found:
            raise ConstraintViolationError("; ".join(found))

    def window_matrix(self) -> np.ndarray:
        rows = np.zeros((len(self.windows), self.variables))
        for r, window in enumerate(self.windows):
            rows[r, list(window)] = 1.0
        return rows

    def project(self, points: np.ndarray, iterations: int, tolerance: float) -> Tuple[np.ndarray, float]:
        """
        Alternating projections onto the box, the window halfspaces and the sum hyperplane.
        Returns the points and the largest remaining constraint violation.
        """
        lo = np.array([float(v) for v in self.lower])
        hi = np.array([float(v) for v in self.upper])
        rows = self.window_matrix()
        bound = float(self.window_bound)
        total = float(self.total)
        x = points.copy()
        residual = math.inf
        for _ in range(iterations):
            x = np.clip(x, lo, hi)
            for row in rows:
                deficit = np.maximum(bound - x @ row, 0.0)
                x += deficit[:, None] * row / row.sum()
            x += ((total - x.sum(axis=1)) / self.variables)[:, None]
            residual = self.residual(x, lo, hi, rows, bound, total)
            if residual <= tolerance:
                break
        return x, residual

    def residual(self, x, lo, hi, rows, bound, total) -> float:
        worst = np.maximum(np.maximum(lo - x, x - hi).max(axis=1), np.abs(x.sum(axis=1) - total))
        if len(rows):
            worst = np.maximum(worst, np.maximum(bound - x @ rows.T, 0.0).max(axis=1))
        return float(worst.max()) if len(worst) else 0.0

    def repair(self, x: Sequence[Fraction]) -> List[Fraction]:
        """
        Clip to the box and move the sum defect onto the variables with room for it.
        """
        x = [min(max(value, lo), hi) for value, lo, hi in zip(x, self.lower, self.upper)]
        defect = self.total - sum(x)
        order = sorted(range(self.variables), key=lambda i: -x[i] if defect < 0 else x[i])
        for i in order:
            if defect == 0:
                break
            room = (self.upper[i] - x[i]) if defect > 0 else (self.lower[i] - x[i])
            step = min(defect, room) if defect > 0 else max(defect, room)
            x[i] += step
            defect -= step
        return x


class LemmaProblem(NamedTuple):
    target: LemmaTarget
    box: ConstraintBox
    excess: Callable[[np.ndarray], np.ndarray]
    exact_excess: Callable[[Sequence[Fraction]], Fraction]
    reference: Tuple[Fraction, ...]
    statement: str


@dataclass(frozen=True)
class Counterexample:
    target: LemmaTarget
    point: Tuple[Fraction, ...]
    excess: Fraction
    seed: int
    path: Optional[str] = None


@dataclass(frozen=True)
class SearchResult:
    target: LemmaTarget
    budget: int
    seed: int
    worst_excess: float
    worst_point: Tuple[float, ...]
    projection_residual: float
    counterexample: Optional[Counterexample]

    @property
    def passed(self) -> bool:
        return self.counterexample is None


def cycle_box(length: int, width: int) -> ConstraintBox:
    return ConstraintBox(
        lower=(BOX_FLOOR,) * length,
        upper=(Fraction(1),) * length,
        cycle=length,
        window_width=width,
    )


def petersen_box(delta: Fraction = PETERSEN_DELTA_MAX) -> ConstraintBox:
    return ConstraintBox(
        lower=(Fraction(1, 10) - delta,) * 10 + (Fraction(0),) * 5,
        upper=(Fraction(1),) * 15,
    )


def _window_terms(x: Sequence[Fraction], width: int) -> List[Fraction]:
    # ½(½ - W)(first + last) + ¼(½ - W)² over every cyclic window.
    length = len(x)
    terms = []
    for i in range(length):
        window = [x[(i + t) % length] for t in range(width)]
        rest = HALF - sum(window)
        terms.append(rest * (window[0] + window[-1]) / 2 + rest * rest / 4)
    return terms


def _window_terms_float(x: np.ndarray, width: int) -> np.ndarray:
    window = sum(np.roll(x, -t, axis=1) for t in range(width))
    rest = 0.5 - window
    ends = x + np.roll(x, -(width - 1), axis=1)
    return 0.5 * rest * ends + 0.25 * rest * rest


def lemma8_min_lhs(x: Sequence[Fraction]) -> Fraction:
    x = [Fraction(value) for value in x]
    cycle_box(8, 3).require(x)
    return min(_window_terms(x, 3))


def lemma11_min_lhs(x: Sequence[Fraction]) -> Fraction:
    x = [Fraction(value) for value in x]
    cycle_box(11, 4).require(x)
    return min(_window_terms(x, 4))


def _petersen_terms(x: Sequence[Fraction], y: Sequence[Fraction]) -> List[Fraction]:
    terms = []
    for family in pstar_half_families():
        triple = sum(x[v] for v in family.triple)
        own, partner = y[family.star - 10], y[family.partner - 10]
        terms.append((HALF - triple - own - partner / 4) * (partner / 4 + triple / 3))
    return terms


def petersen_sum(x: Sequence[Fraction], y: Sequence[Fraction], delta: Fraction) -> Fraction:
    """
    Sum over the twenty P* families of (½ - x(T) - y_i - ¼y_j)(¼y_j + ⅓x(T)); at most 2/5.
    """
    delta = Fraction(delta)
    if not 0 < delta <= PETERSEN_DELTA_MAX:
        raise ConstraintViolationError(f"delta = {delta} outside (0, 1/90]")
    if len(x) != 10 or len(y) != 5:
        raise ConstraintViolationError(f"Expected 10 + 5 values, got {len(x)} + {len(y)}")
    x = [Fraction(value) for value in x]
    y = [Fraction(value) for value in y]
    petersen_box(delta).require(x + y)
    return sum(_petersen_terms(x, y), Fraction(0))


def c5_jensen_sum(w: Sequence[Fraction]) -> Tuple[Fraction, Fraction]:
    """
    Σ_i ω_i(½ - ω_i - ω_{i+1}) summed directly, and its closed form ½ - ½Σ(ω_i + ω_{i+1})².
    """
    w = [Fraction(value) for value in w]
    direct = sum((w[i] * (HALF - w[i] - w[(i + 1) % 5]) for i in range(5)), Fraction(0))
    closed = HALF - sum(((w[i] + w[(i + 1) % 5]) ** 2 for i in range(5)), Fraction(0)) / 2
    return direct, closed


def _petersen_excess_float() -> Callable[[np.ndarray], np.ndarray]:
    families = pstar_half_families()
    triples = np.array([family.triple for family in families])
    stars = np.array([family.star for family in families])
    partners = np.array([family.partner for family in families])

    def excess(points: np.ndarray) -> np.ndarray:
        triple = points[:, triples].sum(axis=2)
        own, partner = points[:, stars], points[:, partners]
        return ((0.5 - triple - own - partner / 4) * (partner / 4 + triple / 3)).sum(axis=1) - 0.4

    return excess


def _c5_excess_float(points: np.ndarray) -> np.ndarray:
    return (points * (0.5 - points - np.roll(points, -1, axis=1))).sum(axis=1) - 0.1


def _window_claim_float(points: np.ndarray) -> np.ndarray:
    # Violating window (term > 1/50) whose own weight reaches 0.394.
    terms = _window_terms_float(points, 3) - 0.02
    weight = sum(np.roll(points, -t, axis=1) for t in range(3)) - float(WINDOW_CLAIM)
    return np.minimum(terms, weight).max(axis=1)


def _window_claim_exact(x: Sequence[Fraction]) -> Fraction:
    terms = _window_terms(x, 3)
    return max(
        min(terms[i] - Fraction(1, 50), sum(x[(i + t) % 8] for t in range(3)) - WINDOW_CLAIM) for i in range(8)
    )


def _pair_claim_float(points: np.ndarray) -> np.ndarray:
    # Every term above 1/50 while some z_i = (x_i + x_{i+4})/2 stays at or below 0.106.
    terms = (_window_terms_float(points, 3) - 0.02).min(axis=1)
    pairs = (points[:, :4] + points[:, 4:]) / 2
    return np.minimum(terms, (float(PAIR_CLAIM) - pairs).max(axis=1))


def _pair_claim_exact(x: Sequence[Fraction]) -> Fraction:
    terms = min(_window_terms(x, 3)) - Fraction(1, 50)
    return min(terms, max(PAIR_CLAIM - (x[i] + x[i + 4]) / 2 for i in range(4)))


def lemma_problem(target: LemmaTarget) -> LemmaProblem:
    target = LemmaTarget(target)
    fiftieth = Fraction(1, 50)
    if target == LemmaTarget.cycle8:
        return LemmaProblem(
            target,
            cycle_box(8, 3),
            lambda p: _window_terms_float(p, 3).min(axis=1) - 0.02,
            lambda x: min(_window_terms(x, 3)) - fiftieth,
            (Fraction(1, 8),) * 8,
            "some 3-window term is at most 1/50",
        )
    if target == LemmaTarget.cycle11:
        return LemmaProblem(
            target,
            cycle_box(11, 4),
            lambda p: _window_terms_float(p, 4).min(axis=1) - 0.02,
            lambda x: min(_window_terms(x, 4)) - fiftieth,
            (Fraction(1, 11),) * 11,
            "some 4-window term is at most 1/50",
        )
    if target == LemmaTarget.petersen:
        return LemmaProblem(
            target,
            petersen_box(),
            _petersen_excess_float(),
            lambda x: sum(_petersen_terms(x[:10], x[10:]), Fraction(0)) - Fraction(2, 5),
            (Fraction(1, 10),) * 10 + (Fraction(0),) * 5,
            "the twenty-term P* sum is at most 2/5",
        )
    if target == LemmaTarget.c5jensen:
        return LemmaProblem(
            target,
            ConstraintBox(lower=(Fraction(0),) * 5, upper=(Fraction(1),) * 5),
            _c5_excess_float,
            lambda x: c5_jensen_sum(x)[0] - Fraction(1, 10),
            (Fraction(1, 5),) * 5,
            "the five C5 halves have total edge mass at most 1/10",
        )
    if target == LemmaTarget.cycle8_window:
        return LemmaProblem(
            target,
            cycle_box(8, 3),
            _window_claim_float,
            _window_claim_exact,
            (Fraction(1, 8),) * 8,
            "a 3-window with term above 1/50 weighs less than 0.394",
        )
    if target == LemmaTarget.cycle8_pairs:
        return LemmaProblem(
            target,
            cycle_box(8, 3),
            _pair_claim_float,
            _pair_claim_exact,
            (Fraction(1, 8),) * 8,
            "if every term exceeds 1/50 then every z_i exceeds 0.106",
        )
    raise InvalidArgumentError(f"Unknown lemma target {target}")


def _initial_points(problem: LemmaProblem, count: int, rng: np.random.Generator) -> np.ndarray:
    # Dirichlet samples, jitter around the reference point and scrambled Sobol points.
    size = problem.box.variables
    thirds = split_budget(count, max(1, math.ceil(count / 3)))
    dirichlet = rng.dirichlet(np.ones(size), size=thirds[0]) * float(problem.box.total)
    reference = np.array([float(v) for v in problem.reference])
    jitter_count = thirds[1] if len(thirds) > 1 else 0
    jitter = reference + rng.normal(scale=0.01, size=(jitter_count, size))
    sobol_count = thirds[2] if len(thirds) > 2 else 0
    if sobol_count:
        sampler = qmc.Sobol(d=size, scramble=True, seed=rng)
        sobol = sampler.random_base2(math.ceil(math.log2(sobol_count)))[:sobol_count]
        sobol = sobol / sobol.sum(axis=1, keepdims=True) * float(problem.box.total)
    else:
        sobol = np.zeros((0, size))
    return np.vstack([dirichlet, jitter, sobol])


def _search_chunk(problem: LemmaProblem, count: int, seed: int, chunk: int, settings: VerifierSettings):
    rng = make_rng(seed, chunk)
    points, residual = problem.box.project(
        _initial_points(problem, count, rng), settings.projection_iterations, settings.projection_tolerance
    )
    values = problem.excess(points)
    best_points, best_values = points.copy(), values.copy()
    h = settings.finite_difference
    for _ in range(settings.ascent_steps):
        gradient = np.empty_like(points)
        for j in range(points.shape[1]):
            shifted = points.copy()
            shifted[:, j] += h
            gradient[:, j] = (problem.excess(shifted) - values) / h
        points, step_residual = problem.box.project(
            points + settings.ascent_step_size * gradient,
            settings.projection_iterations,
            settings.projection_tolerance,
        )
        residual = max(residual, step_residual)
        values = problem.excess(points)
        improved = values > best_values
        best_points[improved], best_values[improved] = points[improved], values[improved]
    index = int(np.argmax(best_values))
    return float(best_values[index]), best_points[index], residual


def confirm(
    problem: LemmaProblem, point: Sequence[float], denominator_limit: int
) -> Optional[Tuple[Tuple[Fraction, ...], Fraction]]:
    """
    Exact re-check of a float candidate. None unless a feasible rational point violates.
    """
    exact = [Fraction(float(v)).limit_denominator(denominator_limit) for v in point]
    exact = problem.box.repair(exact)
    if problem.box.violations(exact):
        return None
    excess = problem.exact_excess(exact)
    return (tuple(exact), excess) if excess > 0 else None


def save_counterexample(counterexample: Counterexample, directory: str) -> str:
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"{counterexample.target.value}-seed{counterexample.seed}.json")
    with open(path, "w") as f:
        json.dump(
            {
                "target": counterexample.target.value,
                "seed": counterexample.seed,
                "excess": format_fraction(counterexample.excess),
                "point": [format_fraction(v) for v in counterexample.point],
            },
            f,
            indent=2,
        )
    return path


@log_runtime
@log_on_entry
def search_worst(
    target: LemmaTarget,
    budget: int,
    seed: int,
    threads: int = 1,
    settings: VerifierSettings = VerifierSettings(),
) -> SearchResult:
    """
    Run `budget` projected-ascent searches split into seed-derived chunks. The merged
    result depends on the seed and chunk size only.
    """
    if budget <= 0:
        raise InvalidArgumentError(f"Budget must be positive, got {budget}")
    problem = lemma_problem(target)
    reference_violations = problem.box.violations(problem.reference)
    if reference_violations:
        raise ConstraintViolationError(f"Reference point infeasible: {reference_violations}")

    chunks = list(enumerate(split_budget(budget, settings.chunk_size)))
    results = map_ordered(lambda item: _search_chunk(problem, item[1], seed, item[0], settings), chunks, threads)

    worst_value, worst_point, residual = -math.inf, None, 0.0
    counterexample = None
    for value, point, chunk_residual in results:
        residual = max(residual, chunk_residual)
        if value > worst_value:
            worst_value, worst_point = value, point
        if counterexample is None and value > settings.margin:
            confirmed = confirm(problem, point, settings.denominator_limit)
            if confirmed is not None:
                counterexample = Counterexample(problem.target, confirmed[0], confirmed[1], seed)
            else:
                logger.warning(f"{problem.target.value}: float excess {value:.3e} not confirmed in exact arithmetic")

    if counterexample is not None:
        logger.critical(f"{problem.target.value}: counterexample with excess {counterexample.excess}")
        if settings.counterexample_dir:
            path = save_counterexample(counterexample, settings.counterexample_dir)
            counterexample = Counterexample(
                counterexample.target, counterexample.point, counterexample.excess, seed, path
            )
    logger.info(f"{problem.target.value}: worst excess {worst_value:.3e} over {budget} starts ({problem.statement})")
    return SearchResult(
        target=problem.target,
        budget=budget,
        seed=seed,
        worst_excess=worst_value,
        worst_point=tuple(float(v) for v in worst_point),
        projection_residual=residual,
        counterexample=counterexample,
    )


def falsify(
    target: LemmaTarget,
    budget: int,
    seed: int,
    threads: int = 1,
    settings: VerifierSettings = VerifierSettings(),
) -> Optional[Counterexample]:
    return search_worst(target, budget, seed, threads, settings).counterexample


def reference_values() -> Dict[LemmaTarget, Fraction]:
    """
    Exact left-hand sides at the uniform points.
    """
    return {
        LemmaTarget.cycle8: lemma8_min_lhs((Fraction(1, 8),) * 8),
        LemmaTarget.cycle11: lemma11_min_lhs((Fraction(1, 11),) * 11),
        LemmaTarget.petersen: petersen_sum((Fraction(1, 10),) * 10, (Fraction(0),) * 5, PETERSEN_DELTA_MAX),
        LemmaTarget.c5jensen: c5_jensen_sum((Fraction(1, 5),) * 5)[0],
    }
