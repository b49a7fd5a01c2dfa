import sys
sys.pycache_prefix = "/tmp/lccbench/"

import unittest

from src.core.experiment import VerifyConfig
from src.plugins.restricted_suite import plugin_class


class TestRestrictedSuite(unittest.TestCase):

    def test_checks_pass(self):
        suite = plugin_class.create("restricted_suite", plugin_class.version, plugin_class.description, None,
                                    plugin_class.priority, plugin_class.dependencies)
        result = suite.execute(VerifyConfig(seed=3, trials={"restricted_suite": 4}))
        for check in result.checks:
            self.assertTrue(check.passed, f"{check.name}: {check.detail}")
        names = [check.name for check in result.checks]
        for name in ("picture_equivalence", "entangled_loss_formula", "loss_scaling_exponents",
                     "weak_entanglement", "wva_spin_postselection"):
            self.assertIn(name, names)


if __name__ == '__main__':
    unittest.main()
