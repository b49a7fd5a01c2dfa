"""
POVM Module
===========

POVM and Kraus channel representations, validation, regular/null
classification and the five saturation conditions of the outcome-wise QFI
bounds.

A PovmSet is an ordered, labeled collection of PSD elements summing to the
identity, split into retained (✓) and discarded (×) labels. Validation never
happens implicitly on construction; call validate() to get diagnostics, or
validate(...).raise_if_failed() to reject.

Saturation conditions, with a = √E|∂^⊥ψ⟩, b = √E|ψ⟩, p = ‖b‖²:

    T1  Im⟨a|b⟩ = 0                    joint outcome QFI = outcome QFI
    T2  a = c·b, c ∈ ℂ                 postselected-state QFI = 0
    T3  Re⟨a|b⟩ = 0                    classical FI = 0
    T4  ⟨a|b⟩ = 0                      p·I_post = outcome QFI
    T5  a = c·b, c ∈ ℝ                 classical FI = outcome QFI

Raw residuals are the left-hand-side magnitudes; normalized residuals divide
by √(g·p + 1e−30), which makes the squared normalized residual equal to the
relative QFI gap of the corresponding equality.
"""

# Python Imports
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Optional, Tuple

# Library Imports
import numpy as np

# Local Imports
from src.core.exceptions import DimensionMismatchError, PovmValidationError
from src.core.linalg import as_matrix, as_vector, hermiticity_residual, operator_norm, psd_sqrt, tensor
from src.core.qfi import NULL_THRESHOLD, StateLike, evaluate, require_psd

logger = logging.getLogger(__name__)

COMPLETENESS_TOL = 1e-9
ELEMENT_TOL = 1e-10
SATURATION_TOL = 1e-9
NORMALIZATION_FLOOR = 1e-30

DISCARD_LABEL = "x"


@dataclass
class PovmSet:
    """
    A labeled POVM with a retained/discarded partition.

    Attributes:
        elements (Dict[str, np.ndarray]): Label to element, in insertion order.
        retained (Tuple[str, ...]): Labels of the retained outcomes.
    """

    elements: Dict[str, np.ndarray]
    retained: Tuple[str, ...] = ()

    def __post_init__(self):
        self.elements = {str(label): as_matrix(E) for label, E in self.elements.items()}
        if not self.elements:
            raise DimensionMismatchError("at least one element", 0, "POVM")
        dims = {E.shape[0] for E in self.elements.values()}
        if len(dims) != 1:
            raise DimensionMismatchError("equal element dimensions", sorted(dims), "POVM")
        self.retained = tuple(str(label) for label in self.retained)

    @classmethod
    def complete_with_remainder(cls,
                                retained: Mapping[str, np.ndarray],
                                dim: Optional[int] = None,
                                discard_label: str = DISCARD_LABEL) -> 'PovmSet':
        """
        Retained elements plus a single discarded element I − Σ_✓E.

        Raises:
            NotPsdError: If the remainder is not PSD.
        """
        retained = {str(k): as_matrix(v) for k, v in retained.items()}
        dim = dim or next(iter(retained.values())).shape[0]
        remainder = np.eye(dim, dtype=complex) - sum(retained.values())
        remainder = 0.5 * (remainder + remainder.conj().T)
        require_psd(remainder, "discarded remainder")
        elements = dict(retained)
        elements[discard_label] = remainder
        return cls(elements, tuple(retained))

    @property
    def dim(self) -> int:
        return next(iter(self.elements.values())).shape[0]

    @property
    def labels(self) -> List[str]:
        return list(self.elements)

    @property
    def discarded(self) -> Tuple[str, ...]:
        return tuple(label for label in self.elements if label not in self.retained)

    def retained_elements(self) -> Dict[str, np.ndarray]:
        return {label: self.elements[label] for label in self.retained}

    def total_retained(self) -> np.ndarray:
        return sum(self.retained_elements().values(), np.zeros((self.dim, self.dim), dtype=complex))

    def lift(self, d_b: int) -> 'PovmSet':
        """Elements E ⊗ I_B on A⊗B."""
        identity = np.eye(d_b, dtype=complex)
        return PovmSet({label: tensor(E, identity) for label, E in self.elements.items()}, self.retained)

    def conjugate(self, U: np.ndarray) -> 'PovmSet':
        """Elements U E U†."""
        U = as_matrix(U)
        return PovmSet({label: U @ E @ U.conj().T for label, E in self.elements.items()}, self.retained)


@dataclass
class KrausChannel:
    """
    Measurement operators K_ω with K_ω†K_ω = E_ω.

    Attributes:
        operators (Dict[str, np.ndarray]): Label to Kraus operator.
        retained (Tuple[str, ...]): Retained labels, carried over from the POVM.
    """

    operators: Dict[str, np.ndarray]
    retained: Tuple[str, ...] = ()

    def completeness_residual(self) -> float:
        dim = next(iter(self.operators.values())).shape[1]
        total = sum(K.conj().T @ K for K in self.operators.values())
        return operator_norm(total - np.eye(dim))

    def povm(self) -> PovmSet:
        return PovmSet({label: K.conj().T @ K for label, K in self.operators.items()}, self.retained)

    def apply(self, label: str, psi: np.ndarray) -> Tuple[float, Optional[np.ndarray]]:
        """
        Postselect psi on outcome `label`.

        Returns:
            Tuple[float, Optional[np.ndarray]]: The probability and the normalized
            postselected state, or None when the outcome is null.
        """
        out = self.operators[label] @ as_vector(psi)
        p = float(np.vdot(out, out).real)
        if p < NULL_THRESHOLD:
            return p, None
        return p, out / np.sqrt(p)


@dataclass
class PovmDiagnostics:
    """
    Result of validate().

    Attributes:
        hermiticity (Dict[str, float]): ‖E − E†‖ per element.
        min_eigenvalues (Dict[str, float]): Smallest eigenvalue per element.
        completeness_residual (float): ‖Σ E − I‖.
        failures (List[str]): Human readable failures, one per problem.
    """

    hermiticity: Dict[str, float] = field(default_factory=dict)
    min_eigenvalues: Dict[str, float] = field(default_factory=dict)
    completeness_residual: float = 0.0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def raise_if_failed(self) -> None:
        if self.failures:
            raise PovmValidationError(self.failures, self.completeness_residual)


def validate(povm: PovmSet, tol: float = COMPLETENESS_TOL) -> PovmDiagnostics:
    """
    Check PSD-ness of each element, completeness and the retained partition.

    Args:
        povm (PovmSet): The POVM to check.
        tol (float): Completeness tolerance.

    Returns:
        PovmDiagnostics: Residuals and the enumerated failures.
    """
    diagnostics = PovmDiagnostics()
    total = np.zeros((povm.dim, povm.dim), dtype=complex)
    for label, E in povm.elements.items():
        residual = hermiticity_residual(E)
        diagnostics.hermiticity[label] = residual
        H = 0.5 * (E + E.conj().T)
        lowest = float(np.linalg.eigvalsh(H)[0])
        diagnostics.min_eigenvalues[label] = lowest
        scale = max(operator_norm(E), 1.0)
        if residual > ELEMENT_TOL * scale:
            diagnostics.failures.append(f"element '{label}' not Hermitian (residual {residual:.3e})")
        if lowest < -ELEMENT_TOL * scale:
            diagnostics.failures.append(f"element '{label}' not PSD (eigenvalue {lowest:.3e})")
        total = total + E
    diagnostics.completeness_residual = operator_norm(total - np.eye(povm.dim))
    if diagnostics.completeness_residual > tol:
        diagnostics.failures.append(f"completeness residual {diagnostics.completeness_residual:.3e}")
    unknown = [label for label in povm.retained if label not in povm.elements]
    if unknown:
        diagnostics.failures.append(f"retained labels not in POVM: {unknown}")
    if diagnostics.failures:
        logger.debug(f"POVM validation failed: {diagnostics.failures}")
    return diagnostics


class ElementKind(Enum):
    REGULAR = "regular"
    NULL = "null"


@dataclass(frozen=True)
class Classification:
    """
    Regular/null classification of one element for one state.

    Attributes:
        kind (ElementKind): NULL iff ⟨ψ|E|ψ⟩ < NULL_THRESHOLD.
        probability (float): ⟨ψ|E|ψ⟩.
        trivial (bool): √E|∂^⊥ψ⟩ = 0, the element carries no information at all.
    """

    kind: ElementKind
    probability: float
    trivial: bool


def classify(E: np.ndarray, state: StateLike, x: Optional[float] = None) -> Classification:
    point = evaluate(state, x)
    E = require_psd(as_matrix(E))
    p = float(np.vdot(point.psi, E @ point.psi).real)
    e_dd = float(np.vdot(point.dperp, E @ point.dperp).real)
    kind = ElementKind.NULL if p < NULL_THRESHOLD else ElementKind.REGULAR
    return Classification(kind, p, e_dd < NULL_THRESHOLD * max(point.g, 1.0))


@dataclass(frozen=True)
class ConditionResidual:
    """
    Residual of one saturation condition.

    Attributes:
        name (str): 'T1' … 'T5'.
        raw (float): Left-hand-side magnitude.
        normalized (float): raw / √(g·p + 1e−30).
        satisfied (bool): normalized ≤ tolerance, or degenerate.
        degenerate (bool): √E annihilates both |ψ⟩ and |∂^⊥ψ⟩.
    """

    name: str
    raw: float
    normalized: float
    satisfied: bool
    degenerate: bool = False


@dataclass(frozen=True)
class _Amplitudes:
    a: np.ndarray
    b: np.ndarray
    p: float
    g: float
    e_dd: float
    e_dp: complex

    @property
    def normalizer(self) -> float:
        return float(np.sqrt(self.g * self.p + NORMALIZATION_FLOOR))

    @property
    def annihilated(self) -> bool:
        return self.p < NULL_THRESHOLD and self.e_dd < NULL_THRESHOLD * max(self.g, 1.0)


def _amplitudes(E: np.ndarray, state: StateLike, x: Optional[float]) -> _Amplitudes:
    point = evaluate(state, x)
    E = as_matrix(E)
    if E.shape[0] != point.dim:
        raise DimensionMismatchError(point.dim, E.shape[0], "POVM element")
    root = psd_sqrt(E, "POVM element")
    a = root @ point.dperp
    b = root @ point.psi
    p = float(np.vdot(point.psi, E @ point.psi).real)
    e_dd = float(np.vdot(point.dperp, E @ point.dperp).real)
    return _Amplitudes(a, b, p, point.g, e_dd, complex(np.vdot(point.dperp, E @ point.psi)))


def _result(name: str, raw: float, amp: _Amplitudes, tol: float, degenerate: bool = False) -> ConditionResidual:
    normalized = raw / amp.normalizer
    return ConditionResidual(name, raw, normalized, degenerate or normalized <= tol, degenerate)


def _orthogonal_component(amp: _Amplitudes) -> float:
    if amp.p < NULL_THRESHOLD:
        return float(np.sqrt(amp.e_dd))
    residual = amp.a - (np.vdot(amp.b, amp.a) / amp.p) * amp.b
    return float(np.linalg.norm(residual))


def check_T1(E: np.ndarray, state: StateLike, x: Optional[float] = None,
             tol: float = SATURATION_TOL) -> ConditionResidual:
    """Residual |Im⟨∂^⊥ψ|E|ψ⟩|."""
    amp = _amplitudes(E, state, x)
    return _result("T1", abs(amp.e_dp.imag), amp, tol)


def check_T2(E: np.ndarray, state: StateLike, x: Optional[float] = None,
             tol: float = SATURATION_TOL) -> ConditionResidual:
    """Residual ‖component of √E|∂^⊥ψ⟩ orthogonal to √E|ψ⟩‖; 0/0 is satisfied-degenerate."""
    amp = _amplitudes(E, state, x)
    if amp.annihilated:
        return _result("T2", 0.0, amp, tol, degenerate=True)
    return _result("T2", _orthogonal_component(amp), amp, tol)


def check_T3(E: np.ndarray, state: StateLike, x: Optional[float] = None,
             tol: float = SATURATION_TOL) -> ConditionResidual:
    """Residual |Re⟨∂^⊥ψ|E|ψ⟩|."""
    amp = _amplitudes(E, state, x)
    return _result("T3", abs(amp.e_dp.real), amp, tol)


def check_T4(E: np.ndarray, state: StateLike, x: Optional[float] = None,
             tol: float = SATURATION_TOL) -> ConditionResidual:
    """Residual |⟨∂^⊥ψ|E|ψ⟩|; 0/0 is satisfied-degenerate."""
    amp = _amplitudes(E, state, x)
    if amp.annihilated:
        return _result("T4", 0.0, amp, tol, degenerate=True)
    return _result("T4", abs(amp.e_dp), amp, tol)


def check_T5(E: np.ndarray, state: StateLike, x: Optional[float] = None,
             tol: float = SATURATION_TOL) -> ConditionResidual:
    """
    Residual √(p·T2² + T1²) = √p·√(T2² + p·|Im c|²) with c = ⟨ψ|E|∂^⊥ψ⟩/p.

    Zero exactly when √E|∂^⊥ψ⟩ is a real multiple of √E|ψ⟩.
    """
    amp = _amplitudes(E, state, x)
    if amp.annihilated:
        return _result("T5", 0.0, amp, tol, degenerate=True)
    if amp.p < NULL_THRESHOLD:
        return _result("T5", float(np.sqrt(amp.e_dd)), amp, tol)
    t2 = _orthogonal_component(amp)
    raw = float(np.sqrt(amp.p * t2 ** 2 + amp.e_dp.imag ** 2))
    return _result("T5", raw, amp, tol)


CONDITIONS = {"T1": check_T1, "T2": check_T2, "T3": check_T3, "T4": check_T4, "T5": check_T5}


@dataclass
class SaturationReport:
    """
    All five saturation conditions for one element.

    Attributes:
        conditions (Dict[str, ConditionResidual]): Keyed 'T1' … 'T5'.
        classification (Classification): Regular or null.
    """

    conditions: Dict[str, ConditionResidual]
    classification: Classification

    def __getitem__(self, name: str) -> ConditionResidual:
        return self.conditions[name]


def saturation_report(E: np.ndarray, state: StateLike, x: Optional[float] = None,
                      tol: float = SATURATION_TOL) -> SaturationReport:
    point = evaluate(state, x)
    conditions = {name: check(E, point, None, tol) for name, check in CONDITIONS.items()}
    return SaturationReport(conditions, classify(E, point))


def kraus_from(povm: PovmSet) -> KrausChannel:
    """
    Canonical Kraus operators K_ω = √E_ω.

    Raises:
        PovmValidationError: If the POVM is invalid.
        NotPsdError: Propagated from psd_sqrt.
    """
    validate(povm).raise_if_failed()
    operators = {label: psd_sqrt(E, f"POVM element '{label}'") for label, E in povm.elements.items()}
    return KrausChannel(operators, povm.retained)


def apply_kraus(channel: KrausChannel, label: str, psi: np.ndarray) -> Tuple[float, Optional[np.ndarray]]:
    """Probability and normalized postselected state of outcome `label`."""
    return channel.apply(label, psi)
