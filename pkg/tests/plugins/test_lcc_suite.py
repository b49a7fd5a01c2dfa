import sys
sys.pycache_prefix = "/tmp/lccbench/"

import unittest

from src.core.experiment import VerifyConfig
from src.plugins.lcc_suite import plugin_class


class TestLccSuite(unittest.TestCase):

    def test_checks_pass(self):
        suite = plugin_class.create("lcc_suite", plugin_class.version, plugin_class.description, None,
                                    plugin_class.priority, plugin_class.dependencies)
        result = suite.execute(VerifyConfig(seed=2, trials={"lcc_suite": 8}))
        for check in result.checks:
            self.assertTrue(check.passed, f"{check.name}: {check.detail}")
            self.assertFalse(check.error)
        self.assertIn("postselected_sensitivity", [check.name for check in result.checks])
        self.assertEqual(result.checks[0].trials, 8)


if __name__ == '__main__':
    unittest.main()
