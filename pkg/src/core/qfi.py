"""
Quantum Fisher Information Module
=================================

QFI functionals of pure parametric states and their outcome-wise
decomposition.

For a family x ↦ |ψ_x⟩ the perpendicular derivative is
|∂^⊥ψ⟩ = |∂ψ⟩ − ⟨ψ|∂ψ⟩|ψ⟩ and g = ⟨∂^⊥ψ|∂^⊥ψ⟩, so that I(ρ_x) = 4g.
Every quantity attached to a single POVM element E is a function of three
scalars, collected in OutcomeScalars:

    p    = ⟨ψ|E|ψ⟩                 (outcome probability)
    e_dd = ⟨∂^⊥ψ|E|∂^⊥ψ⟩           (outcome QFI is 4·e_dd)
    e_dp = ⟨∂^⊥ψ|E|ψ⟩              (classical FI is 4(Re e_dp)²/p)

The postselected-state QFI is 4(e_dd·p − |e_dp|²)/p² and the QFI of the
joint system-ancilla state for the outcome is 4·e_dd − 4(Im e_dp)²/p,
which equals I_cl + p·I_post. Elements with p below NULL_THRESHOLD are
null for the state: their classical FI takes its limiting value 4·e_dd and
their postselected QFI vanishes.

Usage:
    family = HamiltonianFamily(G, psi0)
    I = qfi_pure(family, 0.3)
    ledger = qfi_ledger(family, 0.3, povm.elements)
"""

# Python Imports
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

# Library Imports
import numpy as np

# Local Imports
from src.core.exceptions import DerivativeQualityError, DimensionMismatchError, ModelError, \
    NotPsdError, StationaryPointError
from src.core.linalg import as_matrix, as_vector, herm_eig, is_psd, min_eigenvalue, projector, \
    require_hermitian

logger = logging.getLogger(__name__)

NULL_THRESHOLD = 1e-14
NORM_TOL = 1e-10
ORTHOGONALITY_TOL = 1e-9
RICHARDSON_TOL = 1e-6
FD_STEP_SCALE = 1e-5


class DerivativeMode(Enum):
    ANALYTIC = "analytic"
    FINITE_DIFFERENCE = "finite_difference"


@dataclass(frozen=True)
class PointState:
    """
    A parametric pure state evaluated at a single point.

    Attributes:
        x (float): The parameter value.
        psi (np.ndarray): |ψ_x⟩, unit norm.
        dpsi (np.ndarray): |∂_xψ_x⟩ as supplied by the family.
        dperp (np.ndarray): |∂^⊥ψ_x⟩, orthogonal to psi.
    """

    x: float
    psi: np.ndarray
    dpsi: np.ndarray
    dperp: np.ndarray = field(repr=False)

    @classmethod
    def from_vectors(cls, psi, dpsi, x: float = 0.0) -> 'PointState':
        """
        Build a point state from a state vector and its derivative.

        The component of dpsi along psi is projected out completely, which
        also removes any residual Im⟨ψ|∂ψ⟩ from the phase convention.

        Raises:
            ModelError: If psi is not normalized.
            DimensionMismatchError: If the vectors differ in length.
        """
        psi = as_vector(psi)
        dpsi = as_vector(dpsi)
        if psi.shape != dpsi.shape:
            raise DimensionMismatchError(psi.shape, dpsi.shape, "state derivative")
        norm = float(np.linalg.norm(psi))
        if abs(norm - 1.0) > NORM_TOL:
            raise ModelError(f"State at x={x} is not normalized (norm {norm:.12f})")
        dperp = dpsi - np.vdot(psi, dpsi) * psi
        # second pass removes the rounding left by the first projection
        dperp = dperp - np.vdot(psi, dperp) * psi
        return cls(float(x), psi, dpsi, dperp)

    @property
    def dim(self) -> int:
        return self.psi.shape[0]

    @property
    def g(self) -> float:
        return float(np.vdot(self.dperp, self.dperp).real)

    @property
    def rho(self) -> np.ndarray:
        return np.outer(self.psi, self.psi.conj())


class ParametricPureState:
    """
    A differentiable family x ↦ |ψ_x⟩ on a finite-dimensional Hilbert space.

    The derivative is either supplied analytically or computed by a central
    difference with one Richardson extrapolation level. A disagreement
    between the two Richardson levels above RICHARDSON_TOL (relative to
    max(1, ‖∂ψ‖)) raises DerivativeQualityError.

    Attributes:
        dim (int): Hilbert space dimension.
        name (str): Human readable name.
        derivative_mode (DerivativeMode): How dpsi is obtained.
        step_scale (float): Base step h = step_scale·max(1, |x|).
    """

    def __init__(self,
                 dim: int,
                 psi: Callable[[float], np.ndarray],
                 dpsi: Optional[Callable[[float], np.ndarray]] = None,
                 derivative_mode: Optional[DerivativeMode] = None,
                 step_scale: float = FD_STEP_SCALE,
                 name: str = "family"):
        self.dim = int(dim)
        self.name = name
        self._psi = psi
        self._dpsi = dpsi
        if derivative_mode is None:
            derivative_mode = DerivativeMode.ANALYTIC if dpsi is not None else DerivativeMode.FINITE_DIFFERENCE
        if derivative_mode is DerivativeMode.ANALYTIC and dpsi is None:
            raise ModelError(f"Family '{name}' has no analytic derivative")
        self.derivative_mode = derivative_mode
        self.step_scale = step_scale
        self.logger = logging.getLogger(__name__)

    def psi(self, x: float) -> np.ndarray:
        v = as_vector(self._psi(x))
        if v.shape[0] != self.dim:
            raise DimensionMismatchError(self.dim, v.shape[0], f"state of family '{self.name}'")
        return v

    def dpsi(self, x: float) -> np.ndarray:
        if self.derivative_mode is DerivativeMode.ANALYTIC:
            return as_vector(self._dpsi(x))
        return self.finite_difference(x)

    def finite_difference(self, x: float) -> np.ndarray:
        """
        Richardson-extrapolated central difference of psi at x.

        Raises:
            DerivativeQualityError: If the two extrapolation levels disagree.
        """
        h = self.step_scale * max(1.0, abs(x))
        coarse = (self.psi(x + h) - self.psi(x - h)) / (2.0 * h)
        fine = (self.psi(x + h / 2) - self.psi(x - h / 2)) / h
        extrapolated = (4.0 * fine - coarse) / 3.0
        scale = max(1.0, float(np.linalg.norm(extrapolated)))
        disagreement = float(np.linalg.norm(extrapolated - fine)) / scale
        if disagreement > RICHARDSON_TOL:
            self.logger.warning(f"Finite difference for '{self.name}' at x={x} disagrees by {disagreement:.3e}")
            raise DerivativeQualityError(x, disagreement, RICHARDSON_TOL)
        return extrapolated

    def with_finite_differences(self, step_scale: float = FD_STEP_SCALE) -> 'ParametricPureState':
        """Copy of this family that ignores the analytic derivative."""
        return ParametricPureState(self.dim, self._psi, None, DerivativeMode.FINITE_DIFFERENCE,
                                   step_scale, f"{self.name} (finite difference)")

    def at(self, x: float) -> PointState:
        return PointState.from_vectors(self.psi(x), self.dpsi(x), x)


class HamiltonianFamily(ParametricPureState):
    """
    Unitary family ψ_x = exp(−ixG)|ψ_0⟩ with analytic derivative −iG|ψ_x⟩.

    The generator is diagonalized once; evolution at any x is exact up to
    rounding.
    """

    def __init__(self, generator: np.ndarray, psi0: np.ndarray, name: str = "hamiltonian family"):
        generator = require_hermitian(generator)
        psi0 = as_vector(psi0)
        if generator.shape[0] != psi0.shape[0]:
            raise DimensionMismatchError(generator.shape[0], psi0.shape[0], "initial state")
        norm = float(np.linalg.norm(psi0))
        if abs(norm - 1.0) > NORM_TOL:
            raise ModelError(f"Initial state of '{name}' is not normalized (norm {norm:.12f})")
        self.generator = generator
        self.psi0 = psi0
        self._energies, self._basis = herm_eig(generator)
        self._coefficients = self._basis.conj().T @ psi0
        super().__init__(psi0.shape[0], self._evolve, self._derivative, DerivativeMode.ANALYTIC, name=name)

    def _evolve(self, x: float) -> np.ndarray:
        return self._basis @ (np.exp(-1j * x * self._energies) * self._coefficients)

    def _derivative(self, x: float) -> np.ndarray:
        return -1j * (self.generator @ self._evolve(x))


StateLike = Union[ParametricPureState, PointState]


def evaluate(state: StateLike, x: Optional[float] = None) -> PointState:
    """Resolve a family plus x, or an already evaluated point, to a PointState."""
    if isinstance(state, PointState):
        return state
    if x is None:
        raise ModelError(f"Evaluation point required for family '{state.name}'")
    return state.at(x)


def require_psd(E: np.ndarray, what: str = "POVM element") -> np.ndarray:
    """
    Check E is PSD and return its exactly Hermitian part.

    Raises:
        NotHermitianError, NotPsdError
    """
    E = require_hermitian(E)
    if not is_psd(E):
        raise NotPsdError(min_eigenvalue(E), what)
    return E


@dataclass(frozen=True)
class OutcomeScalars:
    """
    The three scalars that determine every QFI functional of one outcome.

    Attributes:
        p (float): ⟨ψ|E|ψ⟩.
        e_dd (float): ⟨∂^⊥ψ|E|∂^⊥ψ⟩.
        e_dp (complex): ⟨∂^⊥ψ|E|ψ⟩.
    """

    p: float
    e_dd: float
    e_dp: complex

    @classmethod
    def from_point(cls, point: PointState, E: np.ndarray) -> 'OutcomeScalars':
        E_psi = E @ point.psi
        p = float(np.vdot(point.psi, E_psi).real)
        e_dd = float(np.vdot(point.dperp, E @ point.dperp).real)
        e_dp = complex(np.vdot(point.dperp, E_psi))
        return cls(p, e_dd, e_dp)

    @property
    def is_null(self) -> bool:
        return self.p < NULL_THRESHOLD

    def outcome_qfi(self) -> float:
        return 4.0 * self.e_dd

    def classical_fi(self) -> float:
        if self.is_null:
            return self.outcome_qfi()
        return 4.0 * self.e_dp.real ** 2 / self.p

    def postselected_qfi(self) -> float:
        if self.is_null:
            return 0.0
        value = 4.0 * (self.e_dd * self.p - abs(self.e_dp) ** 2) / self.p ** 2
        return max(value, 0.0)

    def joint_qfi(self) -> float:
        if self.is_null:
            return self.outcome_qfi()
        return self.outcome_qfi() - 4.0 * self.e_dp.imag ** 2 / self.p


def outcome_scalars(state: StateLike, x: Optional[float], E: np.ndarray) -> OutcomeScalars:
    point = evaluate(state, x)
    E = require_psd(as_matrix(E))
    if E.shape[0] != point.dim:
        raise DimensionMismatchError(point.dim, E.shape[0], "POVM element")
    return OutcomeScalars.from_point(point, E)


def perp_derivative(state: StateLike, x: Optional[float] = None) -> np.ndarray:
    """
    The perpendicular derivative |∂^⊥ψ_x⟩ = |∂ψ⟩ − ⟨ψ|∂ψ⟩|ψ⟩.

    Args:
        state (StateLike): Family (with x) or evaluated point.
        x (Optional[float]): Parameter value.

    Returns:
        np.ndarray: A vector orthogonal to |ψ_x⟩ with ⟨v|v⟩ = g(ρ_x).
    """
    point = evaluate(state, x)
    overlap = abs(np.vdot(point.psi, point.dperp))
    if overlap > ORTHOGONALITY_TOL * max(1.0, np.sqrt(point.g)):
        raise ModelError(f"Perpendicular derivative not orthogonal to the state (overlap {overlap:.3e})")
    return point.dperp


def qfi_pure(state: StateLike, x: Optional[float] = None) -> float:
    """I(ρ_x) = 4⟨∂^⊥ψ|∂^⊥ψ⟩."""
    return 4.0 * evaluate(state, x).g


def outcome_qfi(state: StateLike, x: Optional[float], E: np.ndarray) -> float:
    """I_ω(ρ_x) = 4⟨∂^⊥ψ|E|∂^⊥ψ⟩; summing over a complete POVM gives qfi_pure."""
    return outcome_scalars(state, x, E).outcome_qfi()


def classical_fi(state: StateLike, x: Optional[float], E: np.ndarray) -> float:
    """
    Classical Fisher information of one outcome, 4(Re⟨∂^⊥ψ|E|ψ⟩)²/p.

    For a null element (p < NULL_THRESHOLD) the limiting value I_ω(ρ_x) is
    returned.
    """
    return outcome_scalars(state, x, E).classical_fi()


def postselected_state_qfi(state: StateLike, x: Optional[float], E: np.ndarray) -> float:
    """QFI of the normalized postselected state; zero for null elements."""
    return outcome_scalars(state, x, E).postselected_qfi()


def joint_outcome_qfi(state: StateLike, x: Optional[float], E: np.ndarray) -> float:
    """I_ω(σ^SA) = I_ω(ρ_x) − 4(Im⟨∂^⊥ψ|E|ψ⟩)²/p."""
    return outcome_scalars(state, x, E).joint_qfi()


def density_derivative(state: StateLike, x: Optional[float] = None) -> np.ndarray:
    """∂_xρ_x = |∂ψ⟩⟨ψ| + |ψ⟩⟨∂ψ|."""
    point = evaluate(state, x)
    outer = np.outer(point.dpsi, point.psi.conj())
    return outer + outer.conj().T


def psi_perp(state: StateLike, x: Optional[float] = None) -> np.ndarray:
    """
    The normalized perpendicular derivative |ψ^⊥⟩ = |∂^⊥ψ⟩/√g.

    Raises:
        StationaryPointError: If g < NULL_THRESHOLD.
    """
    point = evaluate(state, x)
    g = point.g
    if g < NULL_THRESHOLD:
        raise StationaryPointError(point.x, g)
    return point.dperp / np.sqrt(g)


def rho_perp(state: StateLike, x: Optional[float] = None) -> np.ndarray:
    """ρ^⊥ = |ψ^⊥⟩⟨ψ^⊥|."""
    return projector(psi_perp(state, x))


def rho_perp_identities(state: StateLike, x: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    ρ^⊥ and |∂^⊥ψ⟩⟨ψ| expressed through ∂ρ alone.

    Returns:
        Tuple[np.ndarray, np.ndarray]: ((∂ρ)²/g − ρ, ½([∂ρ, ρ] + ∂ρ)).

    Raises:
        StationaryPointError: If g < NULL_THRESHOLD.
    """
    point = evaluate(state, x)
    g = point.g
    if g < NULL_THRESHOLD:
        raise StationaryPointError(point.x, g)
    rho = point.rho
    drho = density_derivative(point)
    perp = drho @ drho / g - rho
    coherence = 0.5 * (drho @ rho - rho @ drho + drho)
    return perp, coherence


@dataclass(frozen=True)
class LedgerRow:
    """
    QFI bookkeeping of one outcome.

    Attributes:
        label (str): Outcome label.
        p (float): p(ω|x).
        I_cl (float): Classical FI.
        I_post (float): QFI of the postselected state.
        I_joint (float): I_cl + p·I_post.
        I_outcome (float): I_ω(ρ_x).
        null (bool): Whether the element is null for the state.
    """

    label: str
    p: float
    I_cl: float
    I_post: float
    I_joint: float
    I_outcome: float
    null: bool

    @classmethod
    def from_scalars(cls, label: str, scalars: OutcomeScalars) -> 'LedgerRow':
        I_cl = scalars.classical_fi()
        I_post = scalars.postselected_qfi()
        return cls(label, scalars.p, I_cl, I_post, I_cl + scalars.p * I_post,
                   scalars.outcome_qfi(), scalars.is_null)


@dataclass
class QfiLedger:
    """Per-outcome QFI ledger of a POVM applied to a state."""

    rows: List[LedgerRow]

    def __getitem__(self, label: str) -> LedgerRow:
        for row in self.rows:
            if row.label == label:
                return row
        raise KeyError(label)

    @property
    def total_probability(self) -> float:
        return float(sum(row.p for row in self.rows))

    @property
    def total_outcome_qfi(self) -> float:
        return float(sum(row.I_outcome for row in self.rows))

    def to_records(self) -> List[Dict[str, float]]:
        return [{"label": r.label, "p": r.p, "I_cl": r.I_cl, "I_post": r.I_post,
                 "I_joint": r.I_joint, "I_outcome": r.I_outcome, "null": r.null} for r in self.rows]


def qfi_ledger(state: StateLike, x: Optional[float], elements: Mapping[str, np.ndarray]) -> QfiLedger:
    """
    Ledger over a labeled list of POVM elements.

    Args:
        state (StateLike): Family (with x) or evaluated point.
        x (Optional[float]): Parameter value.
        elements (Mapping[str, np.ndarray]): Label to element.

    Returns:
        QfiLedger: One row per element, in mapping order.
    """
    point = evaluate(state, x)
    rows = [LedgerRow.from_scalars(label, outcome_scalars(point, None, E)) for label, E in elements.items()]
    return QfiLedger(rows)


@dataclass(frozen=True)
class NullLimitPoint:
    offset: float
    probability: float
    classical_fi: float
    target: float

    @property
    def relative_gap(self) -> float:
        return abs(self.target - self.classical_fi) / max(self.target, NULL_THRESHOLD)


def null_limit_scan(state: ParametricPureState, x: float, offsets: Sequence[float]) -> List[NullLimitPoint]:
    """
    Classical FI at x of the elements E = ρ^⊥_{x+δ}, one per offset δ.

    As δ → 0 the element becomes null for ρ_x and the classical FI approaches
    the outcome QFI of ρ^⊥_x, which is the target reported in each point.

    Args:
        state (ParametricPureState): The family.
        x (float): Evaluation point.
        offsets (Sequence[float]): Nonzero construction offsets δ.

    Returns:
        List[NullLimitPoint]: One point per offset, in the given order.
    """
    point = state.at(x)
    target = outcome_qfi(point, None, rho_perp(point))
    scan = []
    for offset in offsets:
        scalars = outcome_scalars(point, None, rho_perp(state, x + offset))
        scan.append(NullLimitPoint(float(offset), scalars.p, scalars.classical_fi(), target))
        logger.debug(f"Null limit offset {offset:.1e}: p={scalars.p:.3e}, I_cl={scalars.classical_fi():.12f}")
    return scan
