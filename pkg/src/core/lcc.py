"""
Lossless Compression Channel Module
===================================

Construction and verification of lossless compression channels (LCC).

A postselection channel keeps the outcomes in the retained set ✓ and drops
the rest. Its figures of merit at a state ρ_x are

    γ = 1 − Σ_✓ p(ω|x)·I(σ_{x|ω}) / I(ρ_x)    loss
    c = 1 / Σ_✓ p(ω|x)                          compression capacity
    η = Σ_✓ I(σ_{x|ω}) / I(ρ_x)                 compression gain

A channel is an efficient LCC (γ = 0, c > 1) iff
⟨ψ^⊥|Σ_✓E_ω|ψ^⊥⟩ = 1 and ⟨∂^⊥ψ|E_ω|ψ⟩ = 0 for every retained ω.
All such channels have the form E_ω = q_ω ρ^⊥ + Λ_ω where the gauge Λ_ω
satisfies ⟨ψ^⊥|Λ|ψ^⊥⟩ = ⟨ψ^⊥|Λ|ψ⟩ = 0 and ⟨ψ|Λ|ψ⟩ = λ_ω ∈ (0, 1); then
c = 1/Σλ_ω and η = Σ q_ω/λ_ω.

The construction point and the evaluation point are separate arguments, so
a channel built at x* can be evaluated at x ≠ x*.
"""

# Python Imports
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

# Library Imports
import numpy as np

# Local Imports
from src.core.exceptions import GaugeError, LccError, NotPsdError, NullRetainedOutcomeError, \
    PovmValidationError, StationaryPointError
from src.core.linalg import as_matrix, as_vector, min_eigenvalue, require_hermitian
from src.core.povm import PovmSet, validate
from src.core.qfi import NULL_THRESHOLD, LedgerRow, OutcomeScalars, ParametricPureState, PointState, \
    QfiLedger, StateLike, evaluate, psi_perp, rho_perp

logger = logging.getLogger(__name__)

GAUGE_TOL = 1e-9
WEIGHT_TOL = 1e-12
EFFICIENCY_TOL = 1e-9


class GaugeKind(Enum):
    SCALED_RHO = "scaled_rho"
    JENNE_GAETA = "jenne_gaeta"
    CUSTOM = "custom"


def retained_labels(count: int) -> Tuple[str, ...]:
    if count == 1:
        return ("keep",)
    return tuple(f"keep{i}" for i in range(count))


@dataclass(frozen=True)
class GaugeSpec:
    """
    Gauge operators and weights of a gauge-constructed LCC.

    Attributes:
        kind (GaugeKind): ScaledRho (Λ = λρ), JenneGaeta (Λ = λρ + P_0) or Custom.
        q (Tuple[float, ...]): Weights q_ω ∈ (0, 1], summing to one.
        lam (Tuple[float, ...]): λ_ω for ScaledRho and JenneGaeta.
        operators (Tuple[np.ndarray, ...]): Λ_ω for Custom.
    """

    kind: GaugeKind
    q: Tuple[float, ...]
    lam: Tuple[float, ...] = ()
    operators: Tuple[np.ndarray, ...] = field(default=(), repr=False)

    def __post_init__(self):
        q = tuple(float(v) for v in self.q)
        object.__setattr__(self, 'q', q)
        object.__setattr__(self, 'lam', tuple(float(v) for v in self.lam))
        if not q:
            raise GaugeError("gauge needs at least one retained outcome")
        if any(not 0.0 < v <= 1.0 for v in q):
            raise GaugeError(f"weights q must lie in (0, 1], got {q}")
        if abs(sum(q) - 1.0) > WEIGHT_TOL:
            raise GaugeError(f"weights q must sum to 1, got {sum(q)}")
        count = len(self.operators) if self.kind is GaugeKind.CUSTOM else len(self.lam)
        if count != len(q):
            raise GaugeError(f"{self.kind.value} gauge has {count} operators for {len(q)} weights")
        if any(not 0.0 < v < 1.0 for v in self.lam):
            raise GaugeError(f"gauge values λ must lie in (0, 1), got {self.lam}")
        if self.kind is GaugeKind.JENNE_GAETA and len(q) != 1:
            raise GaugeError("JenneGaeta gauge has a single retained outcome")

    @classmethod
    def scaled_rho(cls, lam: Sequence[float], q: Optional[Sequence[float]] = None) -> 'GaugeSpec':
        lam = tuple(lam)
        return cls(GaugeKind.SCALED_RHO, tuple(q) if q is not None else (1.0 / len(lam),) * len(lam), lam)

    @classmethod
    def jenne_gaeta(cls, lam: float) -> 'GaugeSpec':
        return cls(GaugeKind.JENNE_GAETA, (1.0,), (lam,))

    @classmethod
    def custom(cls, operators: Sequence[np.ndarray], q: Optional[Sequence[float]] = None) -> 'GaugeSpec':
        operators = tuple(as_matrix(op) for op in operators)
        q = tuple(q) if q is not None else (1.0 / len(operators),) * len(operators)
        return cls(GaugeKind.CUSTOM, q, (), operators)

    @property
    def L(self) -> int:
        return len(self.q)


@dataclass(frozen=True)
class GaugeResiduals:
    """
    Gauge constraint residuals of one Λ.

    Attributes:
        perp_perp (float): |⟨ψ^⊥|Λ|ψ^⊥⟩|.
        perp_psi (float): |⟨ψ^⊥|Λ|ψ⟩|.
        lam (float): ⟨ψ|Λ|ψ⟩.
    """

    perp_perp: float
    perp_psi: float
    lam: float

    def violations(self, tol: float = GAUGE_TOL) -> Dict[str, float]:
        found = {}
        if self.perp_perp > tol:
            found["perp_perp"] = self.perp_perp
        if self.perp_psi > tol:
            found["perp_psi"] = self.perp_psi
        if not 0.0 < self.lam < 1.0:
            found["lam"] = self.lam
        return found


def check_gauge(state: StateLike, x: Optional[float], Lambda: np.ndarray) -> GaugeResiduals:
    point = evaluate(state, x)
    Lambda = require_hermitian(Lambda)
    v = psi_perp(point)
    return GaugeResiduals(abs(np.vdot(v, Lambda @ v)),
                          abs(np.vdot(v, Lambda @ point.psi)),
                          float(np.vdot(point.psi, Lambda @ point.psi).real))


def gauge_complement(state: StateLike, x: Optional[float] = None) -> np.ndarray:
    """Projector Q onto the orthogonal complement of span{ψ, ψ^⊥}."""
    point = evaluate(state, x)
    return np.eye(point.dim, dtype=complex) - point.rho - rho_perp(point)


def general_gauge(state: StateLike,
                  x: Optional[float],
                  lam: float,
                  coupling: Optional[np.ndarray] = None,
                  block: Optional[np.ndarray] = None) -> np.ndarray:
    """
    General Hermitian solution of the gauge constraints.

    Λ = λρ + |ψ⟩⟨a| + |a⟩⟨ψ| + Q M Q, where a = Q·coupling and M = block are
    confined to the complement Q of span{ψ, ψ^⊥}. In dimension two Q = 0 and
    the gauge is forced to λρ.

    Args:
        state (StateLike): Family (with x) or evaluated point.
        x (Optional[float]): Construction point.
        lam (float): ⟨ψ|Λ|ψ⟩.
        coupling (Optional[np.ndarray]): Vector whose Q-component couples ψ to the complement.
        block (Optional[np.ndarray]): Hermitian matrix restricted to the complement.

    Returns:
        np.ndarray: The gauge operator.
    """
    point = evaluate(state, x)
    Q = gauge_complement(point)
    Lambda = lam * point.rho
    if coupling is not None:
        a = Q @ as_vector(coupling)
        outer = np.outer(point.psi, a.conj())
        Lambda = Lambda + outer + outer.conj().T
    if block is not None:
        Lambda = Lambda + Q @ require_hermitian(block) @ Q
    return 0.5 * (Lambda + Lambda.conj().T)


def gauge_operators(state: StateLike, x: Optional[float], gauge: GaugeSpec) -> List[np.ndarray]:
    """
    The Λ_ω of a gauge spec at the construction point.

    Raises:
        GaugeError: If a Custom operator violates the gauge constraints.
    """
    point = evaluate(state, x)
    rho = point.rho
    if gauge.kind is GaugeKind.SCALED_RHO:
        return [lam * rho for lam in gauge.lam]
    if gauge.kind is GaugeKind.JENNE_GAETA:
        idle = np.eye(point.dim, dtype=complex) - rho - rho_perp(point)
        return [gauge.lam[0] * rho + idle]
    operators = []
    for index, Lambda in enumerate(gauge.operators):
        residuals = check_gauge(point, None, Lambda)
        violations = residuals.violations()
        if violations:
            logger.warning(f"Custom gauge operator {index} violates constraints: {violations}")
            raise GaugeError(f"custom gauge operator {index} violates the gauge constraints", violations)
        operators.append(require_hermitian(Lambda))
    return operators


def build_lcc(state: StateLike, x: Optional[float], gauge: GaugeSpec) -> PovmSet:
    """
    Construct E_ω = q_ω ρ^⊥ + Λ_ω plus the discarded remainder I − Σ_✓E_ω.

    Args:
        state (StateLike): Family (with x) or evaluated point.
        x (Optional[float]): Construction point.
        gauge (GaugeSpec): Weights and gauge operators.

    Returns:
        PovmSet: Retained labels keep… and one discarded element 'x'.

    Raises:
        GaugeError: If a gauge violates its constraints, makes an element
            non-positive, or the retained elements exceed the identity.
    """
    point = evaluate(state, x)
    perp = rho_perp(point)
    retained = {}
    for label, q, Lambda in zip(retained_labels(gauge.L), gauge.q, gauge_operators(point, None, gauge)):
        E = q * perp + Lambda
        lowest = min_eigenvalue(E)
        if lowest < -GAUGE_TOL * max(1.0, float(np.abs(E).max())):
            logger.warning(f"Gauge makes element '{label}' non-positive (eigenvalue {lowest:.3e})")
            raise GaugeError("gauge makes element non-positive", {label: lowest})
        retained[label] = E
    try:
        povm = PovmSet.complete_with_remainder(retained, point.dim)
    except NotPsdError as e:
        raise GaugeError("retained elements exceed the identity", {"remainder": e.eigenvalue}) from e
    logger.debug(f"Built {gauge.kind.value} LCC with L={gauge.L} at x={point.x}")
    return povm


def two_level_lcc(x: float, Delta: float, lam: float) -> np.ndarray:
    """
    Exact LCC element of the two-level family ψ_x = cos(xΔ/2)|0⟩ + i sin(xΔ/2)|1⟩.

    E_✓ = ρ^⊥ + λρ, valid for every x:

        [ λcos² + sin²           i(1−λ)·sin(xΔ)/2 ]
        [ −i(1−λ)·sin(xΔ)/2      cos² + λsin²     ]

    with cos, sin evaluated at xΔ/2.
    """
    c = np.cos(x * Delta / 2.0)
    s = np.sin(x * Delta / 2.0)
    off = 1j * (1.0 - lam) * s * c
    return np.array([[lam * c ** 2 + s ** 2, off],
                     [-off, c ** 2 + lam * s ** 2]], dtype=complex)


@dataclass(frozen=True)
class Theorem1Residuals:
    """
    Efficient-LCC residuals.

    Attributes:
        completeness (float): |⟨ψ^⊥|Σ_✓E|ψ^⊥⟩ − 1|.
        coherence (float): max_✓ |⟨∂^⊥ψ|E_ω|ψ⟩|.
    """

    completeness: float
    coherence: float

    def as_tuple(self) -> Tuple[float, float]:
        return self.completeness, self.coherence


@dataclass
class CompressionReport:
    """
    Figures of merit of a postselection channel at one state.

    Attributes:
        gamma (float): Loss γ.
        capacity (float): c = 1/Σ_✓p.
        gain (float): η = Σ_✓I_post/I.
        L (int): Number of retained outcomes.
        qfi (float): I(ρ_x).
        retained_probability (float): Σ_✓p.
        retained_post_qfi (float): Σ_✓I_post.
        ledger (QfiLedger): Per-outcome ledger (all outcomes).
        theorem1 (Theorem1Residuals): Efficient-LCC residuals.
    """

    gamma: float
    capacity: float
    gain: float
    L: int
    qfi: float
    retained_probability: float
    retained_post_qfi: float
    ledger: QfiLedger
    theorem1: Theorem1Residuals

    @property
    def efficient(self) -> bool:
        return np.isfinite(self.capacity) and self.capacity > 1.0 + EFFICIENCY_TOL

    @property
    def theorem1_residuals(self) -> Tuple[float, float]:
        return self.theorem1.as_tuple()

    def to_record(self) -> Dict[str, object]:
        """Flat JSON-ready record."""
        return {
            "gamma": self.gamma,
            "c": self.capacity,
            "eta": self.gain,
            "L": self.L,
            "I_rho": self.qfi,
            "p_check": self.retained_probability,
            "I_post": self.retained_post_qfi,
            "efficient": bool(self.efficient),
            "residual_completeness": self.theorem1.completeness,
            "residual_coherence": self.theorem1.coherence,
            "ledger": self.ledger.to_records(),
        }


def report_from_scalars(scalars: Mapping[str, OutcomeScalars],
                        retained: Sequence[str],
                        g: float,
                        x: float = 0.0) -> CompressionReport:
    """
    Assemble a CompressionReport from per-outcome scalars.

    Shared by the full-space computation and the restricted (reduced
    quantities) computation.

    Raises:
        PovmValidationError: If the retained set is empty.
        StationaryPointError: If g vanishes.
        NullRetainedOutcomeError: If a retained outcome is null.
    """
    if not retained:
        raise PovmValidationError(["empty retained set"], 0.0)
    if g < NULL_THRESHOLD:
        raise StationaryPointError(x, g)
    for label in retained:
        if scalars[label].is_null:
            logger.warning(f"Retained outcome '{label}' is null (p={scalars[label].p:.3e})")
            raise NullRetainedOutcomeError(label, scalars[label].p)

    ledger = QfiLedger([LedgerRow.from_scalars(label, s) for label, s in scalars.items()])
    qfi = 4.0 * g
    kept = [ledger[label] for label in retained]
    probability = float(sum(row.p for row in kept))
    post_qfi = float(sum(row.I_post for row in kept))
    gamma = 1.0 - float(sum(row.p * row.I_post for row in kept)) / qfi
    completeness = abs(sum(scalars[label].e_dd for label in retained) / g - 1.0)
    coherence = max(abs(scalars[label].e_dp) for label in retained)
    return CompressionReport(gamma=gamma,
                             capacity=1.0 / probability,
                             gain=post_qfi / qfi,
                             L=len(retained),
                             qfi=qfi,
                             retained_probability=probability,
                             retained_post_qfi=post_qfi,
                             ledger=ledger,
                             theorem1=Theorem1Residuals(completeness, coherence))


def _checked_scalars(point: PointState, povm: PovmSet) -> Dict[str, OutcomeScalars]:
    validate(povm).raise_if_failed()
    if povm.dim != point.dim:
        raise LccError(f"POVM dimension {povm.dim} does not match state dimension {point.dim}")
    return {label: OutcomeScalars.from_point(point, E) for label, E in povm.elements.items()}


def compression_report(state: StateLike, x: Optional[float], povm: PovmSet) -> CompressionReport:
    """
    Loss, capacity and gain of a postselection channel at ρ_x.

    Args:
        state (StateLike): Family (with x) or evaluated point.
        x (Optional[float]): Evaluation point.
        povm (PovmSet): Valid POVM with a nonempty retained set.

    Returns:
        CompressionReport: Figures of merit and the QFI ledger.

    Raises:
        PovmValidationError: Invalid POVM or empty retained set.
        NullRetainedOutcomeError: A retained outcome is null for the state.
    """
    point = evaluate(state, x)
    report = report_from_scalars(_checked_scalars(point, povm), povm.retained, point.g, point.x)
    logger.debug(f"Compression at x={point.x}: gamma={report.gamma:.3e}, c={report.capacity:.6g}, "
                 f"eta={report.gain:.6g}")
    return report


def verify_theorem1(state: StateLike, x: Optional[float], povm: PovmSet) -> Theorem1Residuals:
    """
    Efficient-LCC residuals (|⟨ψ^⊥|Σ_✓E|ψ^⊥⟩ − 1|, max_✓|⟨∂^⊥ψ|E_ω|ψ⟩|).

    Does not require the retained outcomes to be regular.
    """
    point = evaluate(state, x)
    scalars = _checked_scalars(point, povm)
    if point.g < NULL_THRESHOLD:
        raise StationaryPointError(point.x, point.g)
    completeness = abs(sum(scalars[label].e_dd for label in povm.retained) / point.g - 1.0)
    coherence = max((abs(scalars[label].e_dp) for label in povm.retained), default=0.0)
    return Theorem1Residuals(completeness, coherence)


def _scaled_rho_parameters(gauge: GaugeSpec, outcome: int) -> Tuple[float, float]:
    if gauge.kind is not GaugeKind.SCALED_RHO:
        raise GaugeError("postselected sensitivity needs a ScaledRho gauge (Λ = λρ)")
    return gauge.q[outcome], gauge.lam[outcome]


def sensitivity_kraus(state: StateLike, x: Optional[float], gauge: GaugeSpec, outcome: int = 0) -> np.ndarray:
    """K_ω = √q ρ^⊥ + √λ ρ at the construction point."""
    point = evaluate(state, x)
    q, lam = _scaled_rho_parameters(gauge, outcome)
    return np.sqrt(q) * rho_perp(point) + np.sqrt(lam) * point.rho


def postselected_sensitivity(state: StateLike, x: Optional[float], gauge: GaugeSpec, outcome: int = 0) -> np.ndarray:
    """
    Derivative of the normalized postselected state K|ψ_x⟩/√p.

    ∂(K|ψ⟩/√p) = |∂ψ⟩ + (√(q/λ) − 1)√g |ψ^⊥⟩, so the perpendicular component
    is amplified by √(q/λ).

    Args:
        state (StateLike): Family (with x) or evaluated point.
        x (Optional[float]): Construction and evaluation point.
        gauge (GaugeSpec): ScaledRho gauge.
        outcome (int): Index of the retained outcome.

    Returns:
        np.ndarray: The amplified derivative.
    """
    point = evaluate(state, x)
    q, lam = _scaled_rho_parameters(gauge, outcome)
    return point.dpsi + (np.sqrt(q / lam) - 1.0) * np.sqrt(point.g) * psi_perp(point)


def sensitivity_finite_difference(state: ParametricPureState, x: float, gauge: GaugeSpec,
                                  outcome: int = 0) -> np.ndarray:
    """Richardson finite difference of y ↦ K|ψ_y⟩/‖K|ψ_y⟩‖ at y = x, K fixed at x."""
    K = sensitivity_kraus(state, x, gauge, outcome)

    def postselected(y: float) -> np.ndarray:
        out = K @ state.psi(y)
        return out / np.linalg.norm(out)

    return ParametricPureState(state.dim, postselected, name=f"postselected {state.name}").finite_difference(x)
