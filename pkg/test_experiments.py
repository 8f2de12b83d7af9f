"""
Small runs of every acceptance suite.
"""

import unittest
from fractions import Fraction
from unittest import mock

from parameterized import parameterized

from common.config import load_config
from halves.errors import InvalidArgumentError
from halves.experiments import SUITES, run_suites
from halves.trichotomy import DichotomyResult
from halves.types import DichotomyCase
from halves.weighted import UniformityCertificate

SMALL = [
    "acceptance.tightness.c5_part_sizes=[2]",
    "acceptance.theorem12.graphs=5",
    "acceptance.theorem12.max_vertices=16",
    "acceptance.fd_halves.samples_per_d=3",
    "acceptance.c5.samples=3",
    "acceptance.pstar.samples=2",
    "acceptance.lemmas.targets=[c5jensen]",
    "acceptance.lemmas.budget=64",
    "verifier.chunk_size=32",
    "verifier.ascent_steps=2",
    "acceptance.disturbed.instances=1",
    "acceptance.dichotomy.graphs=5",
]


class TestSuites(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.config = load_config(argv=SMALL)

    @parameterized.expand(
        [
            ("tightness", 3),
            ("theorem12", 5),
            ("fd-halves", 10),
            ("c5", 4),
            ("pstar", 2),
            ("lemmas", 1),
            ("disturbed", 1),
            ("dichotomy", 10),
        ]
    )
    def test_suite(self, name, rows):
        (result,) = run_suites([name], self.config, seed=0)
        self.assertEqual(result.name, name)
        self.assertTrue(result.passed, result.rows)
        self.assertEqual(len(result.rows), rows)

    def test_every_suite_is_listed(self):
        self.assertEqual(len(SUITES), 8)

    def test_unknown_suite(self):
        with self.assertRaises(InvalidArgumentError):
            run_suites(["nope"], self.config, seed=0)


class TestRowChecks(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.config = load_config(argv=SMALL)

    def test_dense_half_fails_fd_halves(self):
        with mock.patch("halves.experiments.edge_mass", return_value=Fraction(1, 25)):
            (result,) = run_suites(["fd-halves"], self.config, seed=0)
        self.assertEqual(result.failures, len(result.rows))

    def test_failed_certificate_fails_c5(self):
        def dense(dist, c):
            return UniformityCertificate(Fraction(1, 25), Fraction(1, 10), Fraction(c))

        with mock.patch("halves.experiments.certify", side_effect=dense):
            (result,) = run_suites(["c5"], self.config, seed=0)
        self.assertEqual(result.failures, 4)
        self.assertFalse(any(row["ok"] for row in result.rows))

    def test_misreported_dichotomy_case_fails(self):
        wrong = DichotomyResult(DichotomyCase.many_high, (), ())
        with mock.patch("halves.experiments.degree_dichotomy", return_value=wrong):
            (result,) = run_suites(["dichotomy"], self.config, seed=0)
        # Only the five sampled graphs go through the dichotomy.
        self.assertEqual(result.failures, 5)

    def test_disturbed_rows_record_bounds(self):
        (result,) = run_suites(["disturbed"], self.config, seed=0)
        (row,) = result.rows
        self.assertIsNone(row["broken_bound"])
        self.assertLessEqual(row["j_size"], 5)
        self.assertIn("delta = 1/14400", result.notes)


if __name__ == "__main__":
    unittest.main()
