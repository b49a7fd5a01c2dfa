import sys
sys.pycache_prefix = "/tmp/lccbench/"

import unittest
from typing import Any

from src.core.base_suite import BaseSuite, CheckResult, SuiteResult
from src.core.exceptions import ModelError
from src.core.experiment import VerifyConfig


class SampleSuite(BaseSuite):

    def validate_config(self, config: Any) -> bool:
        return True

    def execute(self, config: Any) -> SuiteResult:
        return SuiteResult(self.name)


def failing_residual(case: float) -> float:
    if case > 2:
        raise ModelError("state is not normalized")
    return case


class TestBaseSuite(unittest.TestCase):

    def setUp(self):
        self.suite = SampleSuite.create("sample_suite", "1.0", "sample", None, priority=5)

    def test_info(self):
        info = self.suite.get_info()
        self.assertEqual(info["name"], "sample_suite")
        self.assertEqual(info["priority"], 5)
        self.assertEqual(info["dependencies"], [])
        self.assertFalse(info["initialized"])
        self.assertEqual(self.suite.logger.name, "lccbench.suites.sample_suite")

    def test_seeded_generators(self):
        config = VerifyConfig(seed=3)
        a = self.suite.rng(config, "check").random(4)
        b = self.suite.rng(config, "check").random(4)
        c = self.suite.rng(config, "other").random(4)
        self.assertEqual(list(a), list(b))
        self.assertNotEqual(list(a), list(c))
        self.assertEqual(self.suite.trials(config, 7), 7)
        self.assertEqual(self.suite.trials(VerifyConfig(trials={"sample_suite": 2}), 7), 2)

    def test_run_check(self):
        passed = self.suite.run_check("small", 0.5, [0.1, 0.3, 0.2], lambda case: case)
        self.assertEqual(passed, CheckResult("small", 3, 0.3, 0.5, True))
        failed = self.suite.run_check("large", 0.25, [0.1, 0.3], lambda case: case,
                                      lambda case: f"case {case}")
        self.assertFalse(failed.passed)
        self.assertEqual(failed.detail, "case 0.3")
        nan = self.suite.run_check("nan", 1.0, [0.1, float("nan")], lambda case: case)
        self.assertFalse(nan.passed)
        self.assertEqual(nan.max_residual, 0.0)

    def test_domain_errors_abort_the_check(self):
        result = self.suite.run_check("aborted", 1.0, [1.0, 2.0, 3.0], failing_residual)
        self.assertTrue(result.error)
        self.assertFalse(result.passed)
        self.assertEqual(result.trials, 2)
        self.assertIn("not normalized", result.detail)

    def test_suite_result(self):
        result = SuiteResult("sample_suite", [CheckResult("a", 1, 0.1, 1.0, True),
                                             CheckResult("b", 1, 0.4, 0.2, False)])
        self.assertFalse(result.passed)
        self.assertEqual(result.max_residual, 0.4)
        self.assertTrue(SuiteResult("empty").passed)
        self.assertEqual(SuiteResult("empty").max_residual, 0.0)


if __name__ == '__main__':
    unittest.main()
