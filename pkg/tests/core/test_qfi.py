import sys
sys.pycache_prefix = "/tmp/lccbench/"

import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.exceptions import DerivativeQualityError, DimensionMismatchError, ModelError, NotPsdError, \
    StationaryPointError
from src.core.linalg import SIGMA_Z, ket, projector
from src.core.models import TwoLevelFamily, random_family, random_povm
from src.core.qfi import HamiltonianFamily, ParametricPureState, PointState, classical_fi, density_derivative, \
    evaluate, joint_outcome_qfi, null_limit_scan, outcome_qfi, outcome_scalars, perp_derivative, \
    postselected_state_qfi, psi_perp, qfi_ledger, qfi_pure, rho_perp, rho_perp_identities


def wiggly_family() -> ParametricPureState:
    """A real qubit rotation whose angle carries a tiny fast oscillation."""
    def psi(x):
        angle = x + 1e-6 * np.sin(1e6 * x)
        return np.array([np.cos(angle), np.sin(angle)], dtype=complex)
    return ParametricPureState(2, psi, name="wiggly")


class TestQfiModule(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(11)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(min_value=-3.0, max_value=3.0), st.floats(min_value=0.1, max_value=5.0))
    def test_two_level_qfi_is_delta_squared(self, x, Delta):
        family = TwoLevelFamily(Delta)
        self.assertAlmostEqual(qfi_pure(family, x), Delta ** 2, delta=1e-10 * Delta ** 2)

    def test_two_level_classical_fi(self):
        family = TwoLevelFamily(1.3)
        for x in (0.1, 0.5, 1.0, 2.0):
            expected = 1.3 ** 2 * np.sin(x * 1.3 / 2.0) ** 2
            self.assertAlmostEqual(classical_fi(family, x, projector(ket(0, 2))), expected, places=10)

    def test_outcome_qfi_adds_up(self):
        for d in (2, 3, 5):
            family = random_family(self.rng, d)
            povm = random_povm(self.rng, d, n=4)
            x = float(self.rng.uniform(-1.0, 1.0))
            total = sum(outcome_qfi(family, x, E) for E in povm.elements.values())
            self.assertAlmostEqual(total, qfi_pure(family, x), delta=1e-9 * max(1.0, total))

    def test_outcome_bounds(self):
        for d in (2, 4):
            family = random_family(self.rng, d)
            povm = random_povm(self.rng, d, n=3)
            x = float(self.rng.uniform(-1.0, 1.0))
            for E in povm.elements.values():
                I_outcome = outcome_qfi(family, x, E)
                I_cl = classical_fi(family, x, E)
                I_joint = joint_outcome_qfi(family, x, E)
                p = outcome_scalars(family, x, E).p
                tol = 1e-9 * max(1.0, I_outcome)
                self.assertLessEqual(I_cl, I_joint + tol)
                self.assertLessEqual(I_joint, I_outcome + tol)
                self.assertLessEqual(p * postselected_state_qfi(family, x, E), I_outcome + tol)
                self.assertAlmostEqual(I_joint, I_cl + p * postselected_state_qfi(family, x, E), delta=tol)

    def test_null_element(self):
        family = TwoLevelFamily(1.0)
        x = 0.4
        E = rho_perp(family, x)
        scalars = outcome_scalars(family, x, E)
        self.assertTrue(scalars.is_null)
        self.assertAlmostEqual(classical_fi(family, x, E), qfi_pure(family, x), places=12)
        self.assertEqual(postselected_state_qfi(family, x, E), 0.0)
        self.assertAlmostEqual(joint_outcome_qfi(family, x, E), outcome_qfi(family, x, E), places=12)

    def test_rho_perp_identities(self):
        family = random_family(self.rng, 4)
        point = family.at(0.3)
        perp, coherence = rho_perp_identities(point)
        np.testing.assert_allclose(perp, rho_perp(point), atol=1e-10)
        np.testing.assert_allclose(coherence, np.outer(point.dperp, point.psi.conj()), atol=1e-10)
        self.assertAlmostEqual(abs(np.vdot(point.psi, perp_derivative(point))), 0.0, places=12)
        self.assertAlmostEqual(np.linalg.norm(psi_perp(point)), 1.0, places=12)

    def test_density_derivative_trace_free(self):
        family = random_family(self.rng, 3)
        drho = density_derivative(family, 0.2)
        self.assertAlmostEqual(abs(np.trace(drho)), 0.0, places=12)
        np.testing.assert_allclose(drho, drho.conj().T, atol=1e-12)

    def test_finite_difference_agrees_with_analytic(self):
        family = random_family(self.rng, 4)
        numeric = family.with_finite_differences()
        for x in (-0.7, 0.0, 0.9):
            analytic = qfi_pure(family, x)
            self.assertAlmostEqual(qfi_pure(numeric, x), analytic, delta=1e-6 * analytic)

    def test_finite_difference_quality_error(self):
        with self.assertRaises(DerivativeQualityError) as context:
            qfi_pure(wiggly_family(), 0.0)
        self.assertGreater(context.exception.disagreement, 1e-6)

    def test_stationary_point(self):
        family = HamiltonianFamily(SIGMA_Z, ket(0, 2))
        self.assertEqual(qfi_pure(family, 0.5), 0.0)
        with self.assertRaises(StationaryPointError):
            psi_perp(family, 0.5)
        with self.assertRaises(StationaryPointError):
            rho_perp_identities(family, 0.5)

    def test_null_limit_scan_converges(self):
        family = TwoLevelFamily(1.0)
        scan = null_limit_scan(family, 0.2, [1e-1, 1e-2, 1e-3])
        gaps = [point.relative_gap for point in scan]
        self.assertTrue(all(a > b for a, b in zip(gaps, gaps[1:])))
        self.assertLess(gaps[-1], 1e-5)
        self.assertAlmostEqual(scan[0].target, 1.0, places=10)

    def test_ledger(self):
        family = random_family(self.rng, 3)
        povm = random_povm(self.rng, 3, n=3)
        ledger = qfi_ledger(family, 0.1, povm.elements)
        self.assertEqual([row.label for row in ledger.rows], ["e0", "e1", "e2"])
        self.assertAlmostEqual(ledger.total_probability, 1.0, places=10)
        self.assertAlmostEqual(ledger.total_outcome_qfi, qfi_pure(family, 0.1), places=8)
        self.assertEqual(ledger["e1"].label, "e1")
        with self.assertRaises(KeyError):
            ledger["missing"]
        records = ledger.to_records()
        self.assertEqual(set(records[0]), {"label", "p", "I_cl", "I_post", "I_joint", "I_outcome", "null"})

    def test_point_state_validation(self):
        with self.assertRaises(ModelError):
            PointState.from_vectors(np.array([1.0, 1.0]), np.zeros(2))
        with self.assertRaises(DimensionMismatchError):
            PointState.from_vectors(ket(0, 2), np.zeros(3))
        point = PointState.from_vectors(ket(0, 2), np.array([0.3j, 0.5]))
        np.testing.assert_allclose(point.dperp, [0.0, 0.5], atol=1e-15)
        self.assertAlmostEqual(point.g, 0.25)

    def test_family_validation(self):
        with self.assertRaises(ModelError):
            evaluate(TwoLevelFamily(1.0))
        with self.assertRaises(ModelError):
            HamiltonianFamily(SIGMA_Z, np.array([1.0, 1.0]))
        with self.assertRaises(DimensionMismatchError):
            outcome_qfi(TwoLevelFamily(1.0), 0.0, np.eye(3))
        with self.assertRaises(NotPsdError):
            outcome_qfi(TwoLevelFamily(1.0), 0.0, np.diag([1.0, -0.2]))


if __name__ == '__main__':
    unittest.main()
