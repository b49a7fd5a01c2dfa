"""
POVM Suite Module

Randomized checks of the povm module. The central check draws (state, x, E)
triples from element constructions that saturate different subsets of the
five conditions and confirms, in both directions, that each residual
vanishes exactly when its QFI equality holds.

Classes:
    PovmSuite: The suite plugin.
"""

# Python Imports
from typing import Any, Dict, List, Tuple

# Library Imports
import numpy as np

# Local Imports
from src.core.base_suite import BaseSuite, SuiteResult
from src.core.linalg import projector
from src.core.models import TwoLevelFamily, random_family, random_povm, random_psd
from src.core.povm import ElementKind, PovmSet, classify, kraus_from, saturation_report, validate
from src.core.qfi import OutcomeScalars, PointState, psi_perp, qfi_pure

EQUIVALENCE_DIMS = (2, 3, 4, 8)
RESIDUAL_ZERO = 1e-9
FORWARD_GAP = 1e-7
GAP_ZERO = 1e-10
REVERSE_RESIDUAL = 1e-6

ELEMENT_KINDS = ("generic", "lcc", "real_ray", "imaginary_ray", "random_ray")


def draw_element(rng: np.random.Generator, point: PointState, kind: str) -> np.ndarray:
    """
    A POVM element of the given construction at a point.

    generic is a random PSD matrix; lcc is qρ^⊥ + λρ (T1, T3 and T4 hold);
    real_ray and imaginary_ray project on cos α|ψ⟩ + e^{iφ} sin α|ψ^⊥⟩ with
    φ = 0 (T1, T2, T5) and φ = π/2 (T2, T3); random_ray projects on a random
    vector (T2 only).
    """
    if kind == "generic":
        return random_psd(rng, point.dim)
    if kind == "lcc":
        return rng.uniform(0.1, 1.0) * projector(psi_perp(point)) + rng.uniform(0.1, 0.9) * point.rho
    if kind in ("real_ray", "imaginary_ray"):
        alpha = rng.uniform(0.2, 1.3)
        phase = 1.0 if kind == "real_ray" else 1j
        return projector(np.cos(alpha) * point.psi + phase * np.sin(alpha) * psi_perp(point))
    v = rng.normal(size=point.dim) + 1j * rng.normal(size=point.dim)
    return projector(v / np.linalg.norm(v))


def relative_gaps(point: PointState, E: np.ndarray) -> Dict[str, float]:
    """The QFI equality of each condition as a gap relative to I(ρ_x)."""
    s = OutcomeScalars.from_point(point, E)
    I = qfi_pure(point)
    return {
        "T1": abs(s.joint_qfi() - s.outcome_qfi()) / I,
        "T2": s.postselected_qfi() / I,
        "T3": s.classical_fi() / I,
        "T4": abs(s.p * s.postselected_qfi() - s.outcome_qfi()) / I,
        "T5": abs(s.classical_fi() - s.outcome_qfi()) / I,
    }


def counterexamples(point: PointState, E: np.ndarray) -> List[Tuple[str, float, float]]:
    """Conditions whose residual and QFI equality disagree, as (name, residual, gap)."""
    report = saturation_report(E, point)
    found = []
    for name, gap in relative_gaps(point, E).items():
        residual = report[name].normalized
        if residual <= RESIDUAL_ZERO and gap > FORWARD_GAP:
            found.append((name, residual, gap))
        elif gap <= GAP_ZERO and residual > REVERSE_RESIDUAL:
            found.append((name, residual, gap))
    return found


class PovmSuite(BaseSuite):
    """Verification of the povm module."""

    version = "1.0"
    description = "Saturation-condition equivalences, Kraus completeness, validation and classification"
    priority = 20
    dependencies: List[str] = ["qfi_suite"]

    def validate_config(self, config: Any) -> bool:
        return all(count > 0 for count in config.trials.values())

    def _triples(self, config: Any, count: int):
        rng = self.rng(config, "saturation_equivalences")
        for index in range(count):
            d = EQUIVALENCE_DIMS[index % len(EQUIVALENCE_DIMS)]
            point = random_family(rng, d).at(float(rng.uniform(-1.0, 1.0)))
            kind = ELEMENT_KINDS[int(rng.integers(len(ELEMENT_KINDS)))]
            yield point, kind, draw_element(rng, point, kind)

    def execute(self, config: Any) -> SuiteResult:
        result = SuiteResult(self.name)

        def describe(case) -> str:
            point, kind, E = case
            return f"{kind} element in d={point.dim}: {counterexamples(point, E)}"

        result.checks.append(self.run_check(
            "saturation_equivalences", 0.0, self._triples(config, self.trials(config, 500)),
            lambda case: len(counterexamples(case[0], case[2])), describe))

        def povms(check: str, count: int):
            rng = self.rng(config, check)
            for _ in range(count):
                d = int(rng.choice(EQUIVALENCE_DIMS))
                yield rng, random_povm(rng, d, n=int(rng.integers(2, 5)))

        def kraus(case) -> float:
            _, povm = case
            channel = kraus_from(povm)
            mismatch = max(float(np.abs(K.conj().T @ K - povm.elements[label]).max())
                           for label, K in channel.operators.items())
            return max(channel.completeness_residual(), mismatch)

        result.checks.append(self.run_check(
            "kraus_completeness", 1e-9, povms("kraus_completeness", self.trials(config, 50)), kraus))

        def corruption(case) -> float:
            rng, povm = case
            if not validate(povm).passed:
                return 1.0
            label = povm.labels[0]
            factor = 1.0 + rng.uniform(1e-6, 1e-2)
            corrupted = dict(povm.elements)
            corrupted[label] = factor * corrupted[label]
            diagnostics = validate(PovmSet(corrupted, povm.retained))
            return 0.0 if not diagnostics.passed and diagnostics.completeness_residual > 0.0 else 1.0

        result.checks.append(self.run_check(
            "validation_rejects_corruption", 0.0, povms("validation_rejects_corruption", self.trials(config, 50)),
            corruption))

        def null_elements(case) -> float:
            point = case
            E = projector(psi_perp(point))
            s = OutcomeScalars.from_point(point, E)
            kind = classify(E, point).kind
            return (abs(s.classical_fi() - s.outcome_qfi()) / qfi_pure(point) + s.postselected_qfi()
                    + (0.0 if kind is ElementKind.NULL else 1.0))

        rng = self.rng(config, "null_classification")
        points = (random_family(rng, int(rng.choice(EQUIVALENCE_DIMS))).at(float(rng.uniform(-1.0, 1.0)))
                  for _ in range(self.trials(config, 50)))
        result.checks.append(self.run_check("null_classification", 1e-12, points, null_elements))

        def optimal_basis(case) -> float:
            Delta, x = case
            point = TwoLevelFamily(Delta).at(x)
            perp = psi_perp(point)
            basis = [projector((point.psi + perp) / np.sqrt(2.0)), projector((point.psi - perp) / np.sqrt(2.0))]
            total = sum(OutcomeScalars.from_point(point, E).classical_fi() for E in basis)
            t5 = max(saturation_report(E, point)["T5"].normalized for E in basis)
            return max(t5, abs(total - qfi_pure(point)) / qfi_pure(point))

        grid = [(Delta, x) for Delta in (0.5, 1.0, 2.0) for x in (-0.4, 0.0, 0.9)]
        result.checks.append(self.run_check("optimal_basis", 1e-9, grid, optimal_basis))

        return result
