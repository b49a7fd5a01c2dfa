import sys
sys.pycache_prefix = "/tmp/lccbench/"

import itertools
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.exceptions import GaugeError, NullRetainedOutcomeError, PovmValidationError
from src.core.lcc import GaugeKind, GaugeSpec, build_lcc, check_gauge, compression_report, gauge_complement, \
    general_gauge, postselected_sensitivity, retained_labels, sensitivity_finite_difference, two_level_lcc, \
    verify_theorem1
from src.core.models import TwoLevelFamily, random_family, random_state
from src.core.povm import PovmSet, validate
from src.core.qfi import rho_perp


def two_level_channel(x: float, Delta: float, lam: float) -> PovmSet:
    return PovmSet.complete_with_remainder({"keep": two_level_lcc(x, Delta, lam)})


class TestLccModule(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(5)

    def test_two_level_grid(self):
        for x, Delta, lam in itertools.product((-1.0, -0.3, 0.0, 0.3, 1.0), (0.5, 1.0, 2.0), (0.1, 0.25, 0.5)):
            with self.subTest(x=x, Delta=Delta, lam=lam):
                report = compression_report(TwoLevelFamily(Delta), x, two_level_channel(x, Delta, lam))
                self.assertLessEqual(abs(report.gamma), 1e-9)
                self.assertLessEqual(abs(report.capacity - 1.0 / lam), 1e-9 * report.capacity)
                self.assertLessEqual(abs(report.gain - 1.0 / lam), 1e-9 * report.gain)
                self.assertLessEqual(max(report.theorem1_residuals), 1e-9)
                self.assertTrue(report.efficient)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(min_value=-2.0, max_value=2.0), st.floats(min_value=0.01, max_value=0.99))
    def test_two_level_element_is_built_element(self, x, lam):
        family = TwoLevelFamily(1.0)
        built = build_lcc(family, x, GaugeSpec.scaled_rho([lam]))
        np.testing.assert_allclose(built.elements["keep"], two_level_lcc(x, 1.0, lam), atol=1e-10)

    def test_scaled_rho_construction(self):
        for _ in range(20):
            d = int(self.rng.integers(2, 7))
            L = int(self.rng.integers(1, 4))
            family = random_family(self.rng, d)
            x = float(self.rng.uniform(-1.0, 1.0))
            lam = self.rng.uniform(0.05, 1.0, size=L)
            lam = lam / lam.sum() * self.rng.uniform(0.1, 0.95)
            q = self.rng.dirichlet(np.ones(L))
            povm = build_lcc(family, x, GaugeSpec.scaled_rho(lam, q))
            self.assertEqual(povm.retained, retained_labels(L))
            self.assertTrue(validate(povm).passed)
            report = compression_report(family, x, povm)
            self.assertLess(abs(report.gamma), 1e-8)
            self.assertAlmostEqual(report.capacity * lam.sum(), 1.0, delta=1e-8)
            self.assertAlmostEqual(report.gain / float(np.sum(q / lam)), 1.0, delta=1e-8)
            self.assertLess(max(verify_theorem1(family, x, povm).as_tuple()), 1e-9)

    def test_jenne_gaeta_construction(self):
        family = random_family(self.rng, 4)
        povm = build_lcc(family, 0.3, GaugeSpec.jenne_gaeta(0.2))
        report = compression_report(family, 0.3, povm)
        self.assertLess(abs(report.gamma), 1e-9)
        self.assertAlmostEqual(report.capacity, 5.0, places=8)
        self.assertAlmostEqual(report.gain, 5.0, places=8)
        point = family.at(0.3)
        discarded = povm.elements["x"]
        np.testing.assert_allclose(discarded, 0.8 * point.rho, atol=1e-10)

    def test_general_gauge_with_coupling(self):
        family = random_family(self.rng, 4)
        point = family.at(-0.2)
        Q = gauge_complement(point)
        direction = Q @ random_state(self.rng, 4)
        coupling = 0.1 * direction / np.linalg.norm(direction)
        Lambda = general_gauge(point, None, 0.3, coupling=coupling, block=0.5 * np.eye(4))
        self.assertEqual(check_gauge(point, None, Lambda).violations(), {})
        povm = build_lcc(point, None, GaugeSpec.custom([Lambda]))
        report = compression_report(point, None, povm)
        self.assertLess(abs(report.gamma), 1e-9)
        self.assertAlmostEqual(report.capacity, 1.0 / 0.3, places=8)
        self.assertAlmostEqual(report.gain, 1.0 / 0.3, places=8)

    def test_two_dimensional_gauge_is_forced(self):
        family = TwoLevelFamily(1.0)
        point = family.at(0.4)
        np.testing.assert_allclose(gauge_complement(point), np.zeros((2, 2)), atol=1e-12)
        Lambda = general_gauge(point, None, 0.3, coupling=random_state(self.rng, 2),
                               block=np.array([[1.0, 0.2], [0.2, -1.0]]))
        np.testing.assert_allclose(Lambda, 0.3 * point.rho, atol=1e-12)

    def test_gauge_spec_validation(self):
        with self.assertRaises(GaugeError):
            GaugeSpec.scaled_rho([0.5], [0.5])
        with self.assertRaises(GaugeError):
            GaugeSpec.scaled_rho([1.0])
        with self.assertRaises(GaugeError):
            GaugeSpec.scaled_rho([0.2, 0.2], [1.0])
        with self.assertRaises(GaugeError):
            GaugeSpec(GaugeKind.JENNE_GAETA, (0.5, 0.5), (0.2, 0.2))
        with self.assertRaises(GaugeError):
            GaugeSpec.scaled_rho([], [])
        self.assertEqual(GaugeSpec.scaled_rho([0.1, 0.2, 0.3]).q, (1.0 / 3,) * 3)

    def test_gauge_construction_errors(self):
        family = random_family(self.rng, 3)
        with self.assertRaises(GaugeError) as context:
            build_lcc(family, 0.0, GaugeSpec.custom([0.1 * rho_perp(family, 0.0)]))
        self.assertIn("perp_perp", context.exception.residuals)
        with self.assertRaises(GaugeError) as context:
            build_lcc(family, 0.0, GaugeSpec.scaled_rho([0.6, 0.6]))
        self.assertIn("remainder", context.exception.residuals)
        point = family.at(0.0)
        direction = gauge_complement(point) @ random_state(self.rng, 3)
        Lambda = general_gauge(point, None, 0.1, coupling=2.0 * direction / np.linalg.norm(direction))
        with self.assertRaises(GaugeError):
            build_lcc(point, None, GaugeSpec.custom([Lambda]))

    def test_null_retained_outcome(self):
        family = TwoLevelFamily(1.0)
        povm = PovmSet.complete_with_remainder({"keep": rho_perp(family, 0.2)})
        with self.assertRaises(NullRetainedOutcomeError) as context:
            compression_report(family, 0.2, povm)
        self.assertEqual(context.exception.label, "keep")
        completeness, coherence = verify_theorem1(family, 0.2, povm).as_tuple()
        self.assertLess(completeness, 1e-12)

    def test_empty_retained_set(self):
        with self.assertRaises(PovmValidationError):
            compression_report(TwoLevelFamily(1.0), 0.0, PovmSet({"a": np.eye(2)}))

    def test_off_point_evaluation_is_lossy(self):
        lam = 0.25
        povm = two_level_channel(0.0, 1.0, lam)
        report = compression_report(TwoLevelFamily(1.0), 0.3, povm)
        c2, s2 = np.cos(0.15) ** 2, np.sin(0.15) ** 2
        self.assertAlmostEqual(report.gamma, 1.0 - lam / (lam * c2 + s2), places=10)
        self.assertGreater(report.theorem1.coherence, 1e-3)
        self.assertFalse(report.gamma < 1e-6)

    def test_postselected_sensitivity(self):
        for lam in (0.1, 0.25):
            family = random_family(self.rng, 3)
            gauge = GaugeSpec.scaled_rho([lam], [1.0])
            analytic = postselected_sensitivity(family, 0.4, gauge)
            numeric = sensitivity_finite_difference(family, 0.4, gauge)
            np.testing.assert_allclose(numeric, analytic, atol=1e-6)

    def test_sensitivity_requires_scaled_rho(self):
        with self.assertRaises(GaugeError):
            postselected_sensitivity(TwoLevelFamily(1.0), 0.0, GaugeSpec.jenne_gaeta(0.5))

    def test_report_record(self):
        report = compression_report(TwoLevelFamily(1.0), 0.0, two_level_channel(0.0, 1.0, 0.5))
        record = report.to_record()
        self.assertEqual(set(record), {"gamma", "c", "eta", "L", "I_rho", "p_check", "I_post", "efficient",
                                       "residual_completeness", "residual_coherence", "ledger"})
        self.assertEqual(record["L"], 1)
        self.assertAlmostEqual(record["p_check"], 0.5)
        self.assertEqual([row["label"] for row in record["ledger"]], ["keep", "x"])

    def test_identity_channel_is_not_efficient(self):
        report = compression_report(TwoLevelFamily(1.0), 0.0, PovmSet({"keep": np.eye(2)}, ("keep",)))
        self.assertAlmostEqual(report.capacity, 1.0)
        self.assertLess(abs(report.gamma), 1e-12)
        self.assertFalse(report.efficient)
        self.assertEqual(retained_labels(2), ("keep0", "keep1"))


if __name__ == '__main__':
    unittest.main()
