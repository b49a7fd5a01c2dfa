"""
LCC Suite Module

Randomized checks of the lcc module: soundness of the gauge construction
(ScaledRho, JenneGaeta and general Custom gauges), the capacity and gain
identities, the exact two-level channel, gauge forcing in dimension two,
the amplified postselected derivative and rejection of null retained
outcomes.

Classes:
    LccSuite: The suite plugin.
"""

# Python Imports
from dataclasses import dataclass
from typing import Any, List

# Library Imports
import numpy as np

# Local Imports
from src.core.base_suite import BaseSuite, SuiteResult
from src.core.exceptions import NullRetainedOutcomeError
from src.core.lcc import GaugeSpec, build_lcc, compression_report, gauge_complement, general_gauge, \
    postselected_sensitivity, sensitivity_finite_difference, two_level_lcc, verify_theorem1
from src.core.linalg import projector
from src.core.models import TwoLevelFamily, random_family, random_state
from src.core.povm import PovmSet
from src.core.qfi import PointState, psi_perp

SOUNDNESS_DIMS = (2, 3, 4, 6)


@dataclass
class GaugeDraw:
    """A random construction with the capacity and gain it must produce."""

    point: PointState
    gauge: GaugeSpec
    capacity: float
    gain: float

    def describe(self) -> str:
        return f"{self.gauge.kind.value} gauge, L={self.gauge.L}, d={self.point.dim}, x={self.point.x:.6g}"


def draw_gauge(rng: np.random.Generator, point: PointState) -> GaugeDraw:
    """
    Random gauge whose elements and remainder stay PSD.

    Custom gauges are λρ + |ψ⟩⟨a| + |a⟩⟨ψ| + tQ with ‖a‖² bounded by both
    λt and (1 − λ)(1 − t).
    """
    kind = rng.choice(["scaled_rho", "jenne_gaeta", "custom"])
    if kind == "scaled_rho":
        L = int(rng.integers(1, 4))
        lam = rng.dirichlet(2.0 * np.ones(L + 1))[:L]
        q = rng.dirichlet(np.ones(L))
        return GaugeDraw(point, GaugeSpec.scaled_rho(lam, q), 1.0 / lam.sum(), float(np.sum(q / lam)))
    lam = float(rng.uniform(0.05, 0.95))
    if kind == "jenne_gaeta":
        return GaugeDraw(point, GaugeSpec.jenne_gaeta(lam), 1.0 / lam, 1.0 / lam)
    t = float(rng.uniform(0.2, 0.8))
    a = gauge_complement(point) @ random_state(rng, point.dim)
    norm = float(np.linalg.norm(a))
    if norm > 1e-12:
        a = a / norm * 0.5 * np.sqrt(min(lam * t, (1.0 - lam) * (1.0 - t)))
    Lambda = general_gauge(point, None, lam, coupling=a, block=t * np.eye(point.dim))
    return GaugeDraw(point, GaugeSpec.custom([Lambda]), 1.0 / lam, 1.0 / lam)


class LccSuite(BaseSuite):
    """Verification of the lcc module."""

    version = "1.0"
    description = "Gauge-construction soundness, metric identities, two-level channel and sensitivity"
    priority = 30
    dependencies: List[str] = ["povm_suite"]

    def validate_config(self, config: Any) -> bool:
        return all(count > 0 for count in config.trials.values())

    def _draws(self, config: Any, count: int):
        # both soundness checks see the same draws
        rng = self.rng(config, "construction_soundness")
        for index in range(count):
            d = SOUNDNESS_DIMS[index % len(SOUNDNESS_DIMS)]
            point = random_family(rng, d).at(float(rng.uniform(-1.0, 1.0)))
            yield draw_gauge(rng, point)

    def execute(self, config: Any) -> SuiteResult:
        result = SuiteResult(self.name)
        count = self.trials(config, 200)

        def efficient(draw: GaugeDraw) -> float:
            povm = build_lcc(draw.point, None, draw.gauge)
            residuals = verify_theorem1(draw.point, None, povm)
            return max(residuals.completeness, residuals.coherence / max(1.0, np.sqrt(draw.point.g)))

        result.checks.append(self.run_check("theorem1_residuals", 1e-9, self._draws(config, count), efficient,
                                            GaugeDraw.describe))

        def identities(draw: GaugeDraw) -> float:
            report = compression_report(draw.point, None, build_lcc(draw.point, None, draw.gauge))
            return max(abs(report.gamma),
                       abs(report.capacity - draw.capacity) / draw.capacity,
                       abs(report.gain - draw.gain) / draw.gain)

        result.checks.append(self.run_check("capacity_gain_identities", 1e-8, self._draws(config, count),
                                            identities, GaugeDraw.describe))

        def two_level(case) -> float:
            x, Delta, lam = case
            family = TwoLevelFamily(Delta)
            keep = two_level_lcc(x, Delta, lam)
            report = compression_report(family, x, PovmSet.complete_with_remainder({"keep": keep}, 2))
            built = build_lcc(family, x, GaugeSpec.scaled_rho([lam])).elements["keep"]
            return max(abs(report.gamma),
                       abs(report.capacity - 1.0 / lam) * lam,
                       abs(report.gain - 1.0 / lam) * lam,
                       *report.theorem1_residuals,
                       float(np.abs(keep - built).max()))

        grid = [(x, Delta, lam) for x in (-1.0, -0.3, 0.0, 0.3, 1.0)
                for Delta in (0.5, 1.0, 2.0) for lam in (0.1, 0.25, 0.5)]
        result.checks.append(self.run_check("two_level_exact", 1e-9, grid, two_level))

        def forcing(case) -> float:
            point, lam, rng = case
            Lambda = general_gauge(point, None, lam, coupling=random_state(rng, 2),
                                   block=rng.normal(size=(2, 2)) * np.eye(2))
            return float(np.abs(Lambda - lam * point.rho).max())

        rng = self.rng(config, "two_level_forcing")
        cases = ((random_family(rng, 2).at(float(rng.uniform(-1.0, 1.0))), float(rng.uniform(0.05, 0.95)), rng)
                 for _ in range(self.trials(config, 50)))
        result.checks.append(self.run_check("two_level_forcing", 1e-9, cases, forcing))

        def sensitivity(case) -> float:
            x, lam = case
            family = TwoLevelFamily(1.0)
            gauge = GaugeSpec.scaled_rho([lam], [1.0])
            analytic = postselected_sensitivity(family, x, gauge)
            return float(np.linalg.norm(analytic - sensitivity_finite_difference(family, x, gauge)))

        def amplification(case) -> float:
            x, lam = case
            point = TwoLevelFamily(1.0).at(x)
            analytic = postselected_sensitivity(point, None, GaugeSpec.scaled_rho([lam], [1.0]))
            perp = analytic - np.vdot(point.psi, analytic) * point.psi
            return abs(float(np.linalg.norm(perp)) / np.sqrt(point.g) - np.sqrt(1.0 / lam))

        grid = [(x, lam) for x in (-0.5, 0.0, 0.3, 0.7) for lam in (0.1, 0.25)]
        result.checks.append(self.run_check("postselected_sensitivity", 1e-6, grid, sensitivity))
        result.checks.append(self.run_check("sensitivity_amplification", 1e-9, grid, amplification))

        def null_retained(point: PointState) -> float:
            povm = PovmSet.complete_with_remainder({"keep": projector(psi_perp(point))}, point.dim)
            try:
                compression_report(point, None, povm)
            except NullRetainedOutcomeError:
                return 0.0
            return 1.0

        rng = self.rng(config, "null_retained_rejected")
        points = (random_family(rng, int(rng.choice(SOUNDNESS_DIMS))).at(float(rng.uniform(-1.0, 1.0)))
                  for _ in range(self.trials(config, 20)))
        result.checks.append(self.run_check("null_retained_rejected", 0.0, points, null_retained))

        return result
