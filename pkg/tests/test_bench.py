import sys
sys.pycache_prefix = "/tmp/lccbench/"

import os
import unittest
from typing import Any, List

from src.api.io.fs import get_project_root
from src.bench import VERIFY_COLUMNS, LccBench
from src.core.base_suite import BaseSuite, SuiteResult
from src.core.exceptions import CatalogError, ConfigError, DependencyError
from src.core.experiment import VerifyConfig, load_config

SMALL_TRIALS = {"qfi_suite": 2, "povm_suite": 2, "lcc_suite": 2, "restricted_suite": 2}


class OrphanSuite(BaseSuite):
    version = "0.1"
    description = "depends on a suite that does not exist"
    dependencies: List[str] = ["missing_suite"]

    def validate_config(self, config: Any) -> bool:
        return True

    def execute(self, config: Any) -> SuiteResult:
        return SuiteResult(self.name)


class PickySuite(OrphanSuite):
    dependencies: List[str] = []

    def validate_config(self, config: Any) -> bool:
        return False


class TestLccBench(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.root = get_project_root()
        cls.bench = LccBench(str(cls.root / "src" / "plugins"), threads=2)

    def test_discovery(self):
        self.assertEqual(set(self.bench.suites),
                         {"qfi_suite", "povm_suite", "lcc_suite", "restricted_suite", "input_suite"})
        self.assertEqual(self.bench.threads, 2)
        self.assertEqual(self.bench.suites["lcc_suite"].dependencies, ["povm_suite"])

    def test_dependencies_run_first(self):
        config = VerifyConfig(trials=SMALL_TRIALS)
        results = self.bench.execute_suites(config, ["restricted_suite"])
        self.assertEqual([r.suite for r in results], ["qfi_suite", "povm_suite", "lcc_suite", "restricted_suite"])

    def test_workers_keep_order_and_results(self):
        config = VerifyConfig(suites=["restricted_suite"], trials=SMALL_TRIALS, seed=5)
        single = self.bench.verify(config, threads=1)
        pooled = self.bench.verify(config, threads=3)
        self.assertEqual(single.body(), pooled.body())
        self.assertEqual(list(pooled.metadata["suites"]),
                         ["qfi_suite", "povm_suite", "lcc_suite", "restricted_suite"])

    def test_unknown_and_unsatisfied_suites(self):
        bench = LccBench(str(self.root / "src" / "plugins"), threads=1)
        with self.assertRaises(CatalogError):
            bench.load_suite("nothing_suite")
        bench.register_suite("orphan_suite", OrphanSuite)
        with self.assertRaises(DependencyError):
            bench.load_suite("orphan_suite")
        bench.register_suite("picky_suite", PickySuite)
        with self.assertRaises(ConfigError):
            bench.execute_suites(VerifyConfig(), ["picky_suite"])

    def test_verify_table(self):
        config = load_config(os.path.join(self.root, "experiments", "verify.json"))
        config = config.model_copy(update={"trials": SMALL_TRIALS})
        table = self.bench.verify(config)
        self.assertEqual(table.columns, VERIFY_COLUMNS)
        self.assertTrue(table.metadata["passed"], table.body())
        self.assertEqual(set(table.metadata["suites"]), set(self.bench.suites))
        labels = table.column("label")
        self.assertIn("qfi_suite/outcome_additivity", labels)
        self.assertIn("input_suite/corrupted_povm", labels)
        self.assertEqual(table.failed_rows, 0)
        self.assertTrue(all(passed == 1 for passed in table.column("passed")))

    def test_catalog(self):
        catalog = self.bench.catalog()
        self.assertEqual(len(catalog["models"]), 8)
        self.assertEqual(len(catalog["channels"]), 9)
        self.assertEqual([suite["name"] for suite in catalog["suites"]][0], "qfi_suite")


if __name__ == '__main__':
    unittest.main()
