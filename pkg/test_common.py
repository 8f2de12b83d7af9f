"""
Tests for the shared utilities: partitioning, ordered thread maps, seeded streams,
the keyed cache, the logging decorators and the config layer.
"""

import logging
import os
import tempfile
import unittest
from fractions import Fraction

import numpy as np
from hypothesis import given, strategies as st
from parameterized import parameterized

from common.cache import Cache
from common.config import load_config, select, select_fraction
from common.decorators import describe_argument, log_on_entry, log_runtime
from common.logger import get_logger, set_log_level
from common.parallel import map_ordered
from common.partition import cyclic_window, partition_by_groups, shift_list, split_budget
from common.seed import make_rng
from halves.fd_family import make_fd
from halves.types import LemmaTarget


class TestPartition(unittest.TestCase):
    def test_partition_by_groups(self):
        self.assertEqual(partition_by_groups([0, 1, 2, 3, 4], 2), [[0, 2, 4], [1, 3]])

    @parameterized.expand([(10, 4, [4, 4, 2]), (8, 4, [4, 4]), (0, 3, []), (3, 10, [3])])
    def test_split_budget(self, total, size, expected):
        self.assertEqual(split_budget(total, size), expected)

    @given(st.integers(0, 10_000), st.integers(1, 500))
    def test_split_budget_sums_to_total(self, total, size):
        chunks = split_budget(total, size)
        self.assertEqual(sum(chunks), total)
        self.assertTrue(all(0 < c <= size for c in chunks))

    def test_shift_list(self):
        self.assertEqual(shift_list([1, 2, 3, 4, 5], 3), [4, 5, 1, 2, 3])

    def test_cyclic_window_wraps(self):
        self.assertEqual(cyclic_window([1, 2, 3, 4, 5], 3, 4), [4, 5, 1, 2])


class TestParallel(unittest.TestCase):
    @parameterized.expand([(1,), (2,), (3,), (8,)])
    def test_map_ordered_keeps_order(self, threads):
        self.assertEqual(map_ordered(lambda x: x * x, list(range(20)), threads), [x * x for x in range(20)])

    def test_map_ordered_empty(self):
        self.assertEqual(map_ordered(lambda x: x, [], 4), [])


class TestSeed(unittest.TestCase):
    def test_same_stream_same_draws(self):
        a = make_rng(42, 3).integers(0, 1000, size=10)
        b = make_rng(42, 3).integers(0, 1000, size=10)
        np.testing.assert_array_equal(a, b)

    def test_streams_differ(self):
        a = make_rng(42, 0).integers(0, 1 << 30, size=10)
        b = make_rng(42, 1).integers(0, 1 << 30, size=10)
        self.assertFalse(np.array_equal(a, b))


class TestCache(unittest.TestCase):
    def test_computes_once(self):
        calls = []
        cache = Cache()
        for _ in range(3):
            self.assertEqual(cache("k", lambda: calls.append(1) or 7), 7)
        self.assertEqual(len(calls), 1)

    def test_namespaces_share_storage(self):
        cache = Cache()
        child = cache.namespace("a")
        child("x", lambda: 1)
        self.assertEqual(cache.get("a.x"), 1)
        child.clear()
        self.assertNotIn("a.x", cache.cache)

    def test_disabled(self):
        calls = []
        cache = Cache(disable=True)
        cache("k", lambda: calls.append(1))
        cache("k", lambda: calls.append(1))
        self.assertEqual(len(calls), 2)


class TestConfig(unittest.TestCase):
    def test_default(self):
        config = load_config()
        self.assertEqual(select(config, "threads"), 1)
        self.assertEqual(select(config, "guards.oracle_max_vertices"), 40)
        self.assertEqual(select_fraction(config, "acceptance.disturbed.eps", "1/2"), Fraction(1, 10))
        self.assertIsNone(select(config, "acceptance.disturbed.delta", "1/2"))

    def test_inheritance(self):
        config = load_config("configs/smoke.yaml")
        self.assertEqual(select(config, "acceptance.lemmas.budget"), 500)
        self.assertEqual(select(config, "acceptance.lemmas.targets"), ["8cycle", "11cycle", "petersen", "c5jensen"])
        self.assertEqual(select(config, "verifier.chunk_size"), 4096)

    def test_overrides(self):
        config = load_config(None, ["threads=4", "verifier.chunk_size=16"])
        self.assertEqual(select(config, "threads"), 4)
        self.assertEqual(select(config, "verifier.chunk_size"), 16)

    def test_missing_key_and_config(self):
        self.assertEqual(select(load_config(), "no.such.key", 3), 3)
        self.assertEqual(select(None, "threads", 5), 5)

    def test_override_beats_parent(self):
        config = load_config("configs/smoke.yaml", ["acceptance.lemmas.budget=7"])
        self.assertEqual(select(config, "acceptance.lemmas.budget"), 7)

    def test_inheritance_cycle(self):
        with tempfile.TemporaryDirectory() as directory:
            a, b = os.path.join(directory, "a.yaml"), os.path.join(directory, "b.yaml")
            with open(a, "w") as f:
                f.write(f"__inherit__: {b}\nthreads: 2\n")
            with open(b, "w") as f:
                f.write(f"__inherit__: {a}\n")
            with self.assertRaises(ValueError):
                load_config(a)


class TestLogger(unittest.TestCase):
    def tearDown(self):
        set_log_level("INFO")

    def test_level_applies_to_existing_and_new_loggers(self):
        before = get_logger("halves.test_logger_before")
        set_log_level("warning")
        after = get_logger("halves.test_logger_after")
        self.assertEqual(before.level, logging.WARNING)
        self.assertEqual(after.level, logging.WARNING)

    def test_single_handler(self):
        logger = get_logger("halves.test_logger_handler")
        get_logger("halves.test_logger_handler")
        self.assertEqual(len(logger.handlers), 1)
        self.assertFalse(logger.propagate)


class TestDecorators(unittest.TestCase):
    def test_describe_argument(self):
        self.assertEqual(describe_argument(make_fd(2)), "graph(n=5, m=5)")
        self.assertEqual(describe_argument(LemmaTarget.cycle8), "8cycle")
        self.assertEqual(describe_argument(3), "3")
        self.assertEqual(describe_argument([1]), "list")

    def test_log_on_entry(self):
        @log_on_entry
        def count_edges(g):
            return g.m

        with self.assertLogs("common.decorators", level="INFO") as logs:
            self.assertEqual(count_edges(make_fd(2)), 5)
        self.assertIn("Entering count_edges(graph(n=5, m=5))", logs.output[0])

    def test_log_runtime_on_failure(self):
        @log_runtime
        def broken():
            raise ValueError("boom")

        with self.assertLogs("common.decorators", level="WARNING") as logs:
            with self.assertRaises(ValueError):
                broken()
        self.assertIn("Failed broken after", logs.output[0])


if __name__ == "__main__":
    unittest.main()
