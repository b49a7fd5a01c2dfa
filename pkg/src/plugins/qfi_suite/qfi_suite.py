"""
QFI Suite Module

Randomized checks of the QFI functionals: the density-matrix identities of
ρ^⊥, additivity of the outcome QFI over a complete POVM, the ordering
I_cl ≤ I_ω(σ) ≤ I_ω(ρ), analytic against finite-difference derivatives,
closed forms of the two-level family and the null-element limit.

Classes:
    QfiSuite: The suite plugin.
"""

# Python Imports
from typing import Any, List

# Library Imports
import numpy as np

# Local Imports
from src.core.base_suite import BaseSuite, SuiteResult
from src.core.models import TwoLevelFamily, random_family, random_povm
from src.core.qfi import classical_fi, null_limit_scan, outcome_qfi, outcome_scalars, qfi_pure, rho_perp, \
    rho_perp_identities

IDENTITY_DIMS = (2, 3, 4, 5, 6)
POVM_DIMS = (2, 3, 4, 8)
NULL_OFFSETS = (1e-2, 1e-3, 1e-4)


class QfiSuite(BaseSuite):
    """Verification of the qfi module."""

    version = "1.0"
    description = "QFI identities, additivity, bounds, derivatives and the null limit"
    priority = 10
    dependencies: List[str] = []

    def validate_config(self, config: Any) -> bool:
        return all(count > 0 for count in config.trials.values())

    def _families(self, config: Any, check: str, count: int, dims):
        rng = self.rng(config, check)
        for _ in range(count):
            d = int(rng.choice(dims))
            yield random_family(rng, d), float(rng.uniform(-1.0, 1.0)), rng

    def execute(self, config: Any) -> SuiteResult:
        result = SuiteResult(self.name)

        def identities(case) -> float:
            family, x, _ = case
            point = family.at(x)
            perp, coherence = rho_perp_identities(point)
            scale = max(1.0, point.g)
            return max(float(np.abs(perp - rho_perp(point)).max()),
                       float(np.abs(coherence - np.outer(point.dperp, point.psi.conj())).max()) / scale)

        result.checks.append(self.run_check(
            "rho_perp_identities", 1e-9,
            self._families(config, "rho_perp_identities", self.trials(config, 100), IDENTITY_DIMS), identities))

        def additivity(case) -> float:
            family, x, rng = case
            point = family.at(x)
            povm = random_povm(rng, point.dim, n=int(rng.integers(2, 5)))
            total = sum(outcome_qfi(point, None, E) for E in povm.elements.values())
            return abs(total - qfi_pure(point)) / qfi_pure(point)

        result.checks.append(self.run_check(
            "outcome_additivity", 1e-9,
            self._families(config, "outcome_additivity", self.trials(config, 100), POVM_DIMS), additivity))

        def bounds(case) -> float:
            family, x, rng = case
            point = family.at(x)
            I = qfi_pure(point)
            worst = 0.0
            for E in random_povm(rng, point.dim, n=3).elements.values():
                s = outcome_scalars(point, None, E)
                joint = s.joint_qfi()
                worst = max(worst,
                            s.classical_fi() - joint,
                            joint - s.outcome_qfi(),
                            s.p * s.postselected_qfi() - s.outcome_qfi(),
                            abs(joint - s.classical_fi() - s.p * s.postselected_qfi()))
            return max(worst, 0.0) / I

        result.checks.append(self.run_check(
            "outcome_bounds", 1e-10,
            self._families(config, "outcome_bounds", self.trials(config, 100), POVM_DIMS), bounds))

        def derivatives(case) -> float:
            family, x, _ = case
            exact = qfi_pure(family, x)
            return abs(qfi_pure(family.with_finite_differences(), x) - exact) / exact

        result.checks.append(self.run_check(
            "finite_difference_agreement", 1e-6,
            self._families(config, "finite_difference_agreement", self.trials(config, 50), (2, 3, 4)),
            derivatives))

        def two_level(case) -> float:
            Delta, x = case
            family = TwoLevelFamily(Delta)
            zero = np.diag([1.0, 0.0]).astype(complex)
            expected_cl = Delta ** 2 * np.sin(x * Delta / 2.0) ** 2
            return max(abs(qfi_pure(family, x) - Delta ** 2) / Delta ** 2,
                       abs(classical_fi(family, x, zero) - expected_cl) / Delta ** 2)

        grid = [(Delta, x) for Delta in (0.5, 1.0, 2.0) for x in (-1.0, -0.3, 0.3, 1.0)]
        result.checks.append(self.run_check("two_level_closed_forms", 1e-10, grid, two_level))

        def null_limit(case) -> float:
            family, x = case
            scan = null_limit_scan(family, x, NULL_OFFSETS)
            gaps = [point.relative_gap for point in scan]
            if any(later > earlier for earlier, later in zip(gaps, gaps[1:])):
                return 1.0
            return gaps[-1]

        result.checks.append(self.run_check(
            "null_limit", 1e-4, [(TwoLevelFamily(1.0), 0.3), (TwoLevelFamily(2.0), -0.7)], null_limit,
            lambda case: f"classical FI does not approach the outcome QFI for '{case[0].name}'"))

        return result
