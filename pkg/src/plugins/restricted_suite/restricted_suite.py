"""
Restricted Suite Module

Randomized checks of restricted postselection on factor A: agreement of the
reduced and full-space pictures, the Sum-model orthogonality ledger, the
entangled-construction loss and its scaling, the three-qubit retention and
both branches of the weak-entanglement channel.

Classes:
    RestrictedSuite: The suite plugin.
"""

# Python Imports
from functools import lru_cache
from typing import Any, List

# Library Imports
import numpy as np

# Local Imports
from src.core.base_suite import BaseSuite, SuiteResult
from src.core.lcc import compression_report
from src.core.models import ThreeQubitModel, VonNeumannModel, random_hermitian, random_povm, random_state, \
    random_sum_model
from src.core.restricted import BipartiteModel, entangled_lcc, entangled_loss_prediction, gauge_shift, \
    loss_scaling_report, orthogonality_ledger, restricted_report, verify_restricted, weak_entanglement_lcc

BLOCK_DIMS = ((2, 2), (3, 3), (2, 3), (2, 2, 2))
RATIO_X = 1e-5
RATIO_EPSILON = 1e-4
SCALING_RATIOS = tuple(np.geomspace(1e-2, 1.0, 7))
SCALING_EPSILONS = (1e-6, 1e-5, 1e-4, 1e-3)


def random_product_model(rng: np.random.Generator, d_A: int, d_B: int, centered: str = "") -> BipartiteModel:
    """
    Random Product model; `centered` in {'A', 'B', ''} shifts that factor's
    Hamiltonian to zero mean in its initial state.
    """
    H_A, H_B = random_hermitian(rng, d_A), random_hermitian(rng, d_B)
    phi_A, phi_B = random_state(rng, d_A), random_state(rng, d_B)
    if centered == "A":
        H_A = gauge_shift(H_A, phi_A)
    elif centered == "B":
        H_B = gauge_shift(H_B, phi_B)
    return BipartiteModel.product(H_A, H_B, phi_A, phi_B, f"random product ({d_A}x{d_B})")


class RestrictedSuite(BaseSuite):
    """Verification of the restricted module."""

    version = "1.0"
    description = "Reduced-picture equivalence, orthogonality ledger, entangled loss and weak entanglement"
    priority = 40
    dependencies: List[str] = ["lcc_suite"]

    def validate_config(self, config: Any) -> bool:
        return all(count > 0 for count in config.trials.values())

    def _sum_models(self, config: Any, check: str, count: int):
        rng = self.rng(config, check)
        for _ in range(count):
            dims = BLOCK_DIMS[int(rng.integers(len(BLOCK_DIMS)))]
            yield random_sum_model(rng, dims, int(rng.integers(2, 4))), float(rng.uniform(-1.0, 1.0))

    def execute(self, config: Any) -> SuiteResult:
        result = SuiteResult(self.name)

        def pictures():
            rng = self.rng(config, "picture_equivalence")
            for index in range(self.trials(config, 100)):
                if index % 2:
                    model = random_product_model(rng, int(rng.integers(2, 5)), int(rng.integers(2, 4)))
                else:
                    dims = BLOCK_DIMS[int(rng.integers(len(BLOCK_DIMS)))]
                    model = random_sum_model(rng, dims, int(rng.integers(2, 4)))
                povm = random_povm(rng, model.dims[0], n=3, retained=int(rng.integers(1, 3)))
                yield model, float(rng.uniform(-1.0, 1.0)), povm

        def equivalence(case) -> float:
            model, x, povm = case
            reduced = restricted_report(model, x, povm)
            full = compression_report(model.family(), x, povm.lift(model.dims[1]))
            return max(abs(reduced.gamma - full.gamma),
                       abs(reduced.capacity - full.capacity) / full.capacity,
                       abs(reduced.gain - full.gain) / max(full.gain, 1.0))

        result.checks.append(self.run_check("picture_equivalence", 1e-9, pictures(), equivalence,
                                            lambda case: f"{case[0]!r} at x={case[1]:.6g}"))

        result.checks.append(self.run_check(
            "orthogonality_ledger", 1e-10,
            self._sum_models(config, "orthogonality_ledger", self.trials(config, 50)),
            lambda case: orthogonality_ledger(case[0]).max_residual))

        def loss_formula(case) -> float:
            model, x = case
            residuals = verify_restricted(model, x, entangled_lcc(model, epsilon=0.0, x=x))
            return abs(residuals.completeness - entangled_loss_prediction(model))

        result.checks.append(self.run_check(
            "entangled_loss_formula", 1e-8,
            self._sum_models(config, "entangled_loss_formula", self.trials(config, 50)), loss_formula))

        def three_qubit(ratio: float) -> float:
            model = ThreeQubitModel.for_ratio(ratio)
            povm = entangled_lcc(model.model, epsilon=RATIO_EPSILON, x=RATIO_X, support=[1])
            retention = 1.0 - restricted_report(model.model, RATIO_X, povm).gamma
            return max(abs(retention - model.predicted_retention()) - 2.0 * RATIO_EPSILON, 0.0)

        result.checks.append(self.run_check("three_qubit_retention", 1e-6, np.geomspace(1e-2, 1.0, 9),
                                            three_qubit))

        @lru_cache(maxsize=None)
        def scaling():
            return loss_scaling_report(lambda ratio: ThreeQubitModel.for_ratio(ratio).model,
                                       SCALING_RATIOS, SCALING_EPSILONS, support=[1])

        result.checks.append(self.run_check(
            "loss_scaling_exponents", 0.1, [None],
            lambda _: max(abs(scaling().ratio_exponent - 2.0), abs(scaling().epsilon_exponent - 1.0)),
            lambda _: f"exponents {scaling().ratio_exponent:.4f} (ratio), {scaling().epsilon_exponent:.4f} (ε)"))

        result.checks.append(self.run_check(
            "capacity_identity", 1e-9, [None],
            lambda _: max(abs(row.capacity_identity - 1.0) for row in scaling().rows if row.epsilon > 0.0)))

        def weak_entanglement(case) -> float:
            rng, branch = case
            model = random_product_model(rng, int(rng.integers(2, 5)), int(rng.integers(2, 4)), branch)
            if branch == "A":
                L = int(rng.integers(1, 3))
                epsilon = float(rng.uniform(1e-3, 0.3)) / L
                report = restricted_report(model, 0.0, weak_entanglement_lcc(model, [1.0 / L] * L, epsilon))
                return max(abs(report.gamma), abs(report.gain * epsilon - 1.0),
                           abs(report.capacity * L * epsilon - 1.0))
            report = restricted_report(model, 0.0, weak_entanglement_lcc(model))
            phi_A = model.components[0].phi_A
            H_A_phi = model.H_A @ phi_A
            expected = float(np.vdot(H_A_phi, H_A_phi).real) / float(np.vdot(phi_A, H_A_phi).real) ** 2
            return max(abs(report.gamma), abs(report.capacity - expected) / expected)

        rng = self.rng(config, "weak_entanglement")
        cases = ((rng, "A" if index % 2 else "B") for index in range(self.trials(config, 40)))
        result.checks.append(self.run_check("weak_entanglement", 1e-8, cases, weak_entanglement))

        def wva_branch(theta: float) -> float:
            model = VonNeumannModel(theta, N=8).as_bipartite()
            report = restricted_report(model, 0.0, weak_entanglement_lcc(model))
            expected = 1.0 / np.cos(theta) ** 2
            return max(abs(report.capacity - expected), abs(report.gain - expected)) / expected

        result.checks.append(self.run_check("wva_spin_postselection", 1e-8, (np.pi / 6, np.pi / 3, 1.2),
                                            wva_branch))

        return result
