"""
Tests for the exact inequality evaluators and the randomized falsification search.
"""

import json
import os
import tempfile
import unittest
from fractions import Fraction

from hypothesis import given, strategies as st
from parameterized import parameterized

from common.config import load_config
from halves.errors import ConstraintViolationError, InvalidArgumentError
from halves.lemmas import (
    Counterexample,
    VerifierSettings,
    c5_jensen_sum,
    confirm,
    falsify,
    cycle_box,
    lemma8_min_lhs,
    lemma11_min_lhs,
    lemma_problem,
    petersen_sum,
    reference_values,
    save_counterexample,
    search_worst,
)
from halves.types import LemmaTarget

EIGHTH = Fraction(1, 8)
SMALL = VerifierSettings(chunk_size=32, ascent_steps=2)


class TestExactValues(unittest.TestCase):
    def test_reference_values(self):
        self.assertEqual(
            reference_values(),
            {
                LemmaTarget.cycle8: Fraction(5, 256),
                LemmaTarget.cycle11: Fraction(33, 1936),
                LemmaTarget.petersen: Fraction(2, 5),
                LemmaTarget.c5jensen: Fraction(1, 10),
            },
        )

    def test_infeasible_cycle_point(self):
        with self.assertRaises(ConstraintViolationError):
            lemma8_min_lhs((Fraction(0), Fraction(1, 7)) + (Fraction(1, 7),) * 6)
        with self.assertRaises(ConstraintViolationError):
            lemma11_min_lhs((EIGHTH,) * 8)

    def test_petersen_delta_range(self):
        with self.assertRaises(ConstraintViolationError):
            petersen_sum((Fraction(1, 10),) * 10, (Fraction(0),) * 5, Fraction(1, 50))

    @given(st.lists(st.integers(1, 100), min_size=5, max_size=5))
    def test_c5_closed_form(self, raw):
        total = sum(raw)
        w = [Fraction(value, total) for value in raw]
        direct, closed = c5_jensen_sum(w)
        self.assertEqual(direct, closed)
        self.assertLessEqual(direct, Fraction(1, 10))

    @given(
        st.lists(
            st.fractions(min_value=-Fraction(1, 200), max_value=Fraction(1, 200), max_denominator=1000),
            min_size=4,
            max_size=4,
        ),
    )
    def test_cycle8_near_uniform(self, shifts):
        x = [EIGHTH + s for s in shifts] + [EIGHTH - s for s in shifts]
        self.assertLessEqual(lemma8_min_lhs(x), Fraction(1, 50))


class TestConstraintBox(unittest.TestCase):
    def test_repair(self):
        box = cycle_box(8, 3)
        repaired = box.repair([Fraction(1, 4)] * 8)
        self.assertEqual(sum(repaired), 1)
        self.assertTrue(all(Fraction(1, 14) <= value <= 1 for value in repaired))

    def test_windows(self):
        box = cycle_box(8, 3)
        self.assertEqual(len(box.windows), 8)
        self.assertEqual(box.windows[7], (7, 0, 1))

    @parameterized.expand([(target,) for target in LemmaTarget])
    def test_reference_is_feasible(self, target):
        problem = lemma_problem(target)
        self.assertEqual(problem.box.violations(problem.reference), [])
        self.assertLessEqual(problem.exact_excess(problem.reference), 0)


class TestSearch(unittest.TestCase):
    @parameterized.expand([(LemmaTarget.c5jensen,), (LemmaTarget.cycle8,)])
    def test_small_search_passes(self, target):
        result = search_worst(target, 64, seed=0, settings=SMALL)
        self.assertTrue(result.passed)
        self.assertEqual(result.budget, 64)

    def test_threads_do_not_change_result(self):
        single = search_worst(LemmaTarget.c5jensen, 64, seed=3, threads=1, settings=SMALL)
        double = search_worst(LemmaTarget.c5jensen, 64, seed=3, threads=2, settings=SMALL)
        self.assertEqual(single.worst_excess, double.worst_excess)
        self.assertEqual(single.worst_point, double.worst_point)

    def test_falsify_returns_nothing_on_pass(self):
        self.assertIsNone(falsify(LemmaTarget.c5jensen, 32, seed=1, settings=SMALL))

    def test_rejects_empty_budget(self):
        with self.assertRaises(InvalidArgumentError):
            search_worst(LemmaTarget.cycle8, 0, seed=0)

    def test_confirm_reference(self):
        problem = lemma_problem(LemmaTarget.cycle8)
        self.assertIsNone(confirm(problem, [0.125] * 8, 10**12))

    def test_save_counterexample(self):
        counterexample = Counterexample(LemmaTarget.cycle8, (EIGHTH,) * 8, Fraction(1, 100), 3)
        with tempfile.TemporaryDirectory() as directory:
            path = save_counterexample(counterexample, os.path.join(directory, "found"))
            self.assertEqual(os.path.basename(path), "8cycle-seed3.json")
            with open(path) as f:
                saved = json.load(f)
        self.assertEqual(saved["excess"], "1/100")
        self.assertEqual(saved["point"], ["1/8"] * 8)

    def test_settings_from_config(self):
        settings = VerifierSettings.from_config(load_config(argv=["verifier.chunk_size=16"]))
        self.assertEqual(settings.chunk_size, 16)
        self.assertEqual(settings.ascent_steps, 20)


if __name__ == "__main__":
    unittest.main()
