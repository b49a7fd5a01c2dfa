"""
Restricted Postselection Module
===============================

Postselection acting on one factor A of a bipartite pure state on A⊗B.

For an element E^A ⊗ I_B all outcome scalars reduce to traces over A:

    p    = Tr(ϱ^A E)              ϱ^A   = Tr_B ρ_x
    e_dd = g·Tr(ϱ^⊥A E)           ϱ^⊥A  = Tr_B ρ_x^⊥
    e_dp = conj Tr(𝒞^A E)         𝒞^A   = Tr_B |∂^⊥ψ⟩⟨ψ|

so the efficient-LCC conditions become Tr(ϱ^⊥A Σ_✓E) = 1 and
Tr(𝒞^A E_ω) = 0. Two Hamiltonian structures are supported:

    Product  H = x·H_A⊗H_B, initial state φ_0^A ⊗ φ_0^B
    Sum      H = x·(H_A + H_B), initial state Σ_k √p_k φ_k^A ⊗ φ_k^B

A Sum model keeps the φ_k^A in mutually orthogonal energy subspaces with a
common energy ℰ, so the restricted channel built from (H_A − ℰ)φ_k^A loses
only the fraction δh_B²/(δh_A² + δh_B²) of the QFI.

Usage:
    model = BipartiteModel.sum(H_A, H_B, [(p1, a1, b1), (p2, a2, b2)])
    povm = entangled_lcc(model, epsilon=1e-4, x=0.2)
    report = restricted_report(model, 0.2, povm)
"""

# Python Imports
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

# Library Imports
import numpy as np

# Local Imports
from src.core.exceptions import DimensionMismatchError, ModelError, ZeroQfiError
from src.core.lcc import CompressionReport, report_from_scalars, retained_labels
from src.core.linalg import TensorSpace, as_vector, expm_hermitian, partial_trace, projector, \
    require_hermitian, span_projector, tensor
from src.core.povm import PovmSet, validate
from src.core.qfi import NULL_THRESHOLD, NORM_TOL, HamiltonianFamily, OutcomeScalars

logger = logging.getLogger(__name__)

ENERGY_TOL = 1e-9
EXPECTATION_TOL = 1e-9
ORTHONORMAL_TOL = 1e-9


class HamiltonianKind(Enum):
    PRODUCT = "product"
    SUM = "sum"


@dataclass(frozen=True)
class SubspaceComponent:
    """
    One term √p_k |φ_k^A⟩|φ_k^B⟩ of a Sum-model initial state.

    Attributes:
        weight (float): p_k > 0.
        phi_A (np.ndarray): |φ_k^A⟩, unit norm.
        phi_B (np.ndarray): |φ_k^B⟩, unit norm.
    """

    weight: float
    phi_A: np.ndarray = field(repr=False)
    phi_B: np.ndarray = field(repr=False)


def gauge_shift(H: np.ndarray, state: np.ndarray) -> np.ndarray:
    """
    Shift H by its expectation so that it has zero mean in `state`.

    Args:
        H (np.ndarray): Hermitian operator.
        state (np.ndarray): State vector or density matrix on the space of H.

    Returns:
        np.ndarray: H − Tr(ρ H)·I.
    """
    H = require_hermitian(H)
    state = np.asarray(state, dtype=complex)
    rho = np.outer(state, state.conj()) if state.ndim == 1 else state
    if rho.shape != H.shape:
        raise DimensionMismatchError(H.shape, rho.shape, "gauge shift state")
    mean = float(np.trace(rho @ H).real)
    return H - mean * np.eye(H.shape[0], dtype=complex)


def _normalized(v, what: str) -> np.ndarray:
    v = as_vector(v)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > NORM_TOL:
        raise ModelError(f"{what} is not normalized (norm {norm:.12f})")
    return v


class BipartiteModel:
    """
    A bipartite pure-state model with a local Hamiltonian structure.

    Use the product() and sum() builders; they validate every invariant.
    Sum models store H_A and H_B shifted to zero initial mean, which only
    changes a global phase of ψ_x. Product models store the Hamiltonians as
    given, since a shift would change the dynamics.

    Attributes:
        kind (HamiltonianKind): Product or Sum.
        space (TensorSpace): The A⊗B factorization.
        H_A (np.ndarray): Hamiltonian on A.
        H_B (np.ndarray): Hamiltonian on B.
        psi0 (np.ndarray): Initial state on A⊗B.
        components (Tuple[SubspaceComponent, ...]): Sum-model terms (empty for Product).
        energy (float): Common energy ℰ of the φ_k^A before the shift (Sum only).
        name (str): Human readable name.
    """

    def __init__(self,
                 kind: HamiltonianKind,
                 H_A: np.ndarray,
                 H_B: np.ndarray,
                 psi0: np.ndarray,
                 components: Sequence[SubspaceComponent] = (),
                 energy: float = 0.0,
                 name: str = "bipartite model"):
        self.kind = kind
        self.H_A = require_hermitian(H_A)
        self.H_B = require_hermitian(H_B)
        self.space = TensorSpace((self.H_A.shape[0], self.H_B.shape[0]))
        self.psi0 = _normalized(psi0, f"Initial state of '{name}'")
        if self.psi0.shape[0] != self.space.dim:
            raise DimensionMismatchError(self.space.dim, self.psi0.shape[0], "bipartite initial state")
        self.components = tuple(components)
        self.energy = float(energy)
        self.name = name
        self._family = None

    @classmethod
    def product(cls, H_A, H_B, phi_A, phi_B, name: str = "product model") -> 'BipartiteModel':
        """Model with H = x·H_A⊗H_B and a product initial state φ_A⊗φ_B."""
        phi_A = _normalized(phi_A, "φ_0^A")
        phi_B = _normalized(phi_B, "φ_0^B")
        model = cls(HamiltonianKind.PRODUCT, H_A, H_B, tensor(phi_A, phi_B),
                    (SubspaceComponent(1.0, phi_A, phi_B),), name=name)
        if model.H_A.shape[0] != phi_A.shape[0] or model.H_B.shape[0] != phi_B.shape[0]:
            raise DimensionMismatchError(model.space.factor_dims, (phi_A.shape[0], phi_B.shape[0]), "factor states")
        return model

    @classmethod
    def sum(cls, H_A, H_B, components: Sequence[Tuple[float, np.ndarray, np.ndarray]],
            name: str = "sum model") -> 'BipartiteModel':
        """
        Model with H = x·(H_A + H_B) and initial state Σ_k √p_k φ_k^A⊗φ_k^B.

        Args:
            H_A (np.ndarray): Hamiltonian on A.
            H_B (np.ndarray): Hamiltonian on B.
            components (Sequence[Tuple[float, np.ndarray, np.ndarray]]): (p_k, φ_k^A, φ_k^B) triples.
            name (str): Model name.

        Returns:
            BipartiteModel: The validated, gauge-shifted model.

        Raises:
            ModelError: If the weights, the orthonormality of the φ_k^A or the
                common energy condition fail.
        """
        H_A = require_hermitian(H_A)
        H_B = require_hermitian(H_B)
        parts = [SubspaceComponent(float(p), _normalized(a, f"φ_{k}^A"), _normalized(b, f"φ_{k}^B"))
                 for k, (p, a, b) in enumerate(components)]
        if not parts:
            raise ModelError(f"Sum model '{name}' has no components")
        weights = np.array([c.weight for c in parts])
        if np.any(weights <= 0.0) or abs(weights.sum() - 1.0) > ORTHONORMAL_TOL:
            raise ModelError(f"Sum model '{name}' weights must be positive and sum to 1, got {weights.tolist()}")
        phis = np.column_stack([c.phi_A for c in parts])
        gram_error = float(np.abs(phis.conj().T @ phis - np.eye(len(parts))).max())
        if gram_error > ORTHONORMAL_TOL:
            raise ModelError(f"Sum model '{name}' states φ_k^A are not orthonormal (error {gram_error:.3e})")
        energies = np.array([np.vdot(c.phi_A, H_A @ c.phi_A).real for c in parts])
        if float(np.ptp(energies)) > ENERGY_TOL:
            raise ModelError(f"Sum model '{name}' energies ⟨φ_k|H_A|φ_k⟩ differ: {energies.tolist()}")

        psi0 = sum(np.sqrt(c.weight) * tensor(c.phi_A, c.phi_B) for c in parts)
        space = TensorSpace((H_A.shape[0], H_B.shape[0]))
        rho0 = np.outer(psi0, psi0.conj())
        shifted_A = gauge_shift(H_A, partial_trace(rho0, space, [0]))
        shifted_B = gauge_shift(H_B, partial_trace(rho0, space, [1]))
        logger.debug(f"Sum model '{name}': common energy {energies[0]:.6g}, {len(parts)} subspaces")
        return cls(HamiltonianKind.SUM, shifted_A, shifted_B, psi0, parts, float(energies[0]), name)

    @property
    def dims(self) -> Tuple[int, int]:
        return self.space.factor_dims

    @property
    def generator(self) -> np.ndarray:
        d_A, d_B = self.dims
        if self.kind is HamiltonianKind.PRODUCT:
            return tensor(self.H_A, self.H_B)
        return tensor(self.H_A, np.eye(d_B)) + tensor(np.eye(d_A), self.H_B)

    def family(self) -> HamiltonianFamily:
        if self._family is None:
            self._family = HamiltonianFamily(self.generator, self.psi0, self.name)
        return self._family

    def local_unitary(self, x: float) -> np.ndarray:
        """U_x^A = exp(−ixH_A); conjugating an A-channel by it tracks a Sum model to x."""
        return expm_hermitian(self.H_A, x)

    def swapped(self) -> 'BipartiteModel':
        """The same Product model with the roles of A and B exchanged."""
        if self.kind is not HamiltonianKind.PRODUCT:
            raise ModelError("Only product models can be swapped")
        component = self.components[0]
        return BipartiteModel.product(self.H_B, self.H_A, component.phi_B, component.phi_A,
                                      f"{self.name} (swapped)")

    def __repr__(self):
        return f"BipartiteModel({self.kind.value}, dims={self.dims}, name='{self.name}')"


@dataclass
class ReducedQuantities:
    """
    Reduced operators of a bipartite model at one x.

    Attributes:
        C_A (np.ndarray): 𝒞^A = Tr_B |∂^⊥ψ⟩⟨ψ|.
        rho_perp_A (np.ndarray): ϱ^⊥A = Tr_B ρ^⊥.
        rho_A (np.ndarray): ϱ^A = Tr_B ρ.
        g (float): ⟨∂^⊥ψ|∂^⊥ψ⟩ = Tr(ρ_0 H̃²).
        deltas (Optional[Tuple[float, float]]): (δh_A, δh_B) for Sum models.
    """

    C_A: np.ndarray
    rho_perp_A: np.ndarray
    rho_A: np.ndarray
    g: float
    deltas: Optional[Tuple[float, float]] = None

    @property
    def qfi(self) -> float:
        return 4.0 * self.g

    def scalars(self, E: np.ndarray) -> OutcomeScalars:
        if E.shape != self.rho_A.shape:
            raise DimensionMismatchError(self.rho_A.shape, E.shape, "restricted POVM element")
        return OutcomeScalars(float(np.trace(self.rho_A @ E).real),
                              self.g * float(np.trace(self.rho_perp_A @ E).real),
                              complex(np.trace(self.C_A @ E)).conjugate())


def reduced_quantities(model: BipartiteModel, x: float) -> ReducedQuantities:
    """
    Reduced quantities from ρ_x^⊥ = U H̃ ρ_0 H̃ U†/Tr(ρ_0 H̃²), H̃ = H − ⟨H⟩.

    Raises:
        ZeroQfiError: If Tr(ρ_0 H̃²) < NULL_THRESHOLD.
    """
    H = model.generator
    psi0 = model.psi0
    shifted = H @ psi0 - np.vdot(psi0, H @ psi0) * psi0
    g = float(np.vdot(shifted, shifted).real)
    if g < NULL_THRESHOLD:
        raise ZeroQfiError(g)
    U = expm_hermitian(H, x)
    psi = U @ psi0
    dperp = -1j * (U @ shifted)
    space = model.space
    rho_A = partial_trace(np.outer(psi, psi.conj()), space, [0])
    rho_perp_A = partial_trace(np.outer(dperp, dperp.conj()), space, [0]) / g
    C_A = partial_trace(np.outer(dperp, psi.conj()), space, [0])
    deltas = None
    if model.kind is HamiltonianKind.SUM:
        d_A, d_B = model.dims
        HA = tensor(model.H_A, np.eye(d_B)) @ psi0
        HB = tensor(np.eye(d_A), model.H_B) @ psi0
        deltas = (float(np.linalg.norm(HA)), float(np.linalg.norm(HB)))
    return ReducedQuantities(C_A, rho_perp_A, rho_A, g, deltas)


@dataclass(frozen=True)
class RestrictedResiduals:
    """
    Restricted efficient-LCC residuals.

    Attributes:
        completeness (float): |Tr(ϱ^⊥A Σ_✓E) − 1|.
        coherence (float): max_✓ |Tr(𝒞^A E_ω)|.
        retained_weight (float): Tr(ϱ^A Σ_✓E), below 1 for a compressing channel.
    """

    completeness: float
    coherence: float
    retained_weight: float

    def as_tuple(self) -> Tuple[float, float, float]:
        return self.completeness, self.coherence, self.retained_weight


def _check_on_A(model: BipartiteModel, povm: PovmSet) -> None:
    if povm.dim != model.dims[0]:
        raise DimensionMismatchError(model.dims[0], povm.dim, "restricted POVM")


def verify_restricted(model: BipartiteModel, x: float, povm: PovmSet) -> RestrictedResiduals:
    _check_on_A(model, povm)
    rq = reduced_quantities(model, x)
    total = povm.total_retained()
    completeness = abs(float(np.trace(rq.rho_perp_A @ total).real) - 1.0)
    coherence = max((abs(np.trace(rq.C_A @ E)) for E in povm.retained_elements().values()), default=0.0)
    return RestrictedResiduals(completeness, float(coherence), float(np.trace(rq.rho_A @ total).real))


def restricted_report(model: BipartiteModel, x: float, povm: PovmSet) -> CompressionReport:
    """
    Compression report of an A-only POVM computed from the reduced quantities alone.

    Equals compression_report on the full state with elements E⊗I_B.
    """
    _check_on_A(model, povm)
    validate(povm).raise_if_failed()
    rq = reduced_quantities(model, x)
    scalars = {label: rq.scalars(E) for label, E in povm.elements.items()}
    return report_from_scalars(scalars, povm.retained, rq.g, x)


def weak_entanglement_lcc(model: BipartiteModel, q: Sequence[float] = (1.0,), epsilon: float = 0.0) -> PovmSet:
    """
    Restricted LCC of a Product model in the local limit x → 0.

    If ⟨H_A⟩ = 0 the elements are E_ω = q_ω ϱ^⊥A + ε|φ_0^A⟩⟨φ_0^A|, giving
    η = Lc = 1/ε. If instead ⟨H_B⟩ = 0 they are E_ω = q_ω ϱ^⊥A, giving
    c = ⟨H_A²⟩/⟨H_A⟩² and η = Lc. The channel is exact at x = 0 only.

    Args:
        model (BipartiteModel): Product model.
        q (Sequence[float]): Weights over retained outcomes, summing to one.
        epsilon (float): Weight of the initial-state term (⟨H_A⟩ = 0 branch).

    Returns:
        PovmSet: A-only POVM with retained labels keep… and discard 'x'.

    Raises:
        ModelError: For Sum models, or if neither expectation vanishes.
    """
    if model.kind is not HamiltonianKind.PRODUCT:
        raise ModelError("weak_entanglement_lcc needs a product model")
    q = [float(v) for v in q]
    if any(v <= 0.0 for v in q) or abs(sum(q) - 1.0) > 1e-12:
        raise ModelError(f"weights q must be positive and sum to 1, got {q}")
    component = model.components[0]
    mean_A = float(np.vdot(component.phi_A, model.H_A @ component.phi_A).real)
    mean_B = float(np.vdot(component.phi_B, model.H_B @ component.phi_B).real)
    perp_A = reduced_quantities(model, 0.0).rho_perp_A
    if abs(mean_A) < EXPECTATION_TOL:
        if not 0.0 < epsilon * len(q) <= 1.0:
            raise ModelError(f"epsilon must lie in (0, 1/L], got {epsilon}")
        idle = epsilon * projector(component.phi_A)
        elements = [w * perp_A + idle for w in q]
        logger.debug(f"Weak-entanglement LCC (⟨H_A⟩ = 0 branch) for '{model.name}', L={len(q)}")
    elif abs(mean_B) < EXPECTATION_TOL:
        elements = [w * perp_A for w in q]
        logger.debug(f"Weak-entanglement LCC (⟨H_B⟩ = 0 branch) for '{model.name}', L={len(q)}")
    else:
        raise ModelError(f"Neither ⟨H_A⟩ = {mean_A:.3e} nor ⟨H_B⟩ = {mean_B:.3e} vanishes; apply gauge_shift first")
    return PovmSet.complete_with_remainder(dict(zip(retained_labels(len(q)), elements)), model.dims[0])


def subspace_directions(model: BipartiteModel) -> Dict[int, np.ndarray]:
    """
    The normalized (H_A − ℰ)|φ_k^A⟩ of a Sum model, keyed by k.

    Components with zero variance inside their subspace are omitted.

    Raises:
        ModelError: If the directions are not orthonormal.
    """
    if model.kind is not HamiltonianKind.SUM:
        raise ModelError("subspace directions need a sum model")
    directions = {}
    for k, component in enumerate(model.components):
        v = model.H_A @ component.phi_A
        norm = float(np.linalg.norm(v))
        if norm ** 2 < NULL_THRESHOLD:
            logger.debug(f"Component {k} of '{model.name}' has no variance, omitted")
            continue
        directions[k] = v / norm
    if directions:
        stacked = np.column_stack(list(directions.values()))
        error = float(np.abs(stacked.conj().T @ stacked - np.eye(len(directions))).max())
        if error > ORTHONORMAL_TOL:
            raise ModelError(f"Directions φ_k^⊥A of '{model.name}' are not orthonormal (error {error:.3e})")
    return directions


def support_projector(model: BipartiteModel, support: Optional[Sequence[int]] = None) -> np.ndarray:
    """Projector onto span{φ_k^A : k ∈ support}; all components by default."""
    indices = range(len(model.components)) if support is None else support
    vectors = [model.components[k].phi_A for k in indices]
    return span_projector(vectors, model.dims[0])


def entangled_lcc(model: BipartiteModel,
                  weights: Optional[Sequence[Sequence[float]]] = None,
                  epsilon: float = 0.0,
                  x: float = 0.0,
                  support: Optional[Sequence[int]] = None) -> PovmSet:
    """
    Energy-subspace restricted LCC of a Sum model.

    E_ω = U_x^A (Σ_k r_ωk |φ_k^⊥A⟩⟨φ_k^⊥A| + ε𝒫_supp) U_x^A†. The unconjugated
    channel is the x = 0 case.

    Args:
        model (BipartiteModel): Sum model.
        weights (Optional[Sequence[Sequence[float]]]): r_ωk, one row per retained
            outcome, each column summing to one; a single outcome by default.
        epsilon (float): Weight of the support projector, with L·ε ≤ 1.
        x (float): Point the channel is conjugated to.
        support (Optional[Sequence[int]]): Components spanning 𝒫_supp; all by default.

    Returns:
        PovmSet: A-only POVM with retained labels keep… and discard 'x'.
    """
    directions = subspace_directions(model)
    count = len(model.components)
    r = np.ones((1, count)) if weights is None else np.asarray(weights, dtype=float)
    if r.ndim != 2 or r.shape[1] != count:
        raise DimensionMismatchError((r.shape[0] if r.ndim == 2 else 1, count), r.shape, "entangled LCC weights")
    if np.any(r < 0.0) or np.abs(r.sum(axis=0) - 1.0).max() > 1e-12:
        raise ModelError("entangled LCC weights r_ωk must be non-negative with Σ_ω r_ωk = 1")
    if not 0.0 <= epsilon * r.shape[0] <= 1.0:
        raise ModelError(f"epsilon must lie in [0, 1/L], got {epsilon}")

    idle = epsilon * support_projector(model, support)
    elements = []
    for row in r:
        E = idle + sum((row[k] * projector(v) for k, v in directions.items()),
                       np.zeros_like(idle))
        elements.append(E)
    povm = PovmSet.complete_with_remainder(dict(zip(retained_labels(len(elements)), elements)), model.dims[0])
    if x != 0.0:
        povm = povm.conjugate(model.local_unitary(x))
    return povm


def entangled_loss_prediction(model: BipartiteModel) -> float:
    """Loss δh_B²/(δh_A² + δh_B²) of the entangled construction at ε → 0."""
    d_A, d_B = reduced_quantities(model, 0.0).deltas
    return d_B ** 2 / (d_A ** 2 + d_B ** 2)


@dataclass(frozen=True)
class OrthogonalityLedger:
    """
    Maximal violations of the Sum-model orthogonality relations.

    Attributes:
        self_energy (float): max_k |⟨φ_k|H_A|φ_k⟩| (H_A ⊥-moves each φ_k).
        states (float): max_{k,l} |⟨φ_k|φ_l⟩ − δ_kl|.
        state_energy (float): max_{k≠l} |⟨φ_l|H_A|φ_k⟩|.
        energy_energy (float): max_{k≠l} |⟨φ_l|H_A²|φ_k⟩|.
        cross_term (float): |Tr(ρ_0 H_A⊗H_B)|.
    """

    self_energy: float
    states: float
    state_energy: float
    energy_energy: float
    cross_term: float

    @property
    def max_residual(self) -> float:
        return max(self.self_energy, self.states, self.state_energy, self.energy_energy, self.cross_term)

    def passed(self, tol: float = 1e-10) -> bool:
        return self.max_residual <= tol


def orthogonality_ledger(model: BipartiteModel) -> OrthogonalityLedger:
    if model.kind is not HamiltonianKind.SUM:
        raise ModelError("orthogonality ledger needs a sum model")
    phis = np.column_stack([c.phi_A for c in model.components])
    moved = model.H_A @ phis
    overlaps = phis.conj().T @ phis
    state_energy = phis.conj().T @ moved
    energy_energy = moved.conj().T @ moved
    off = ~np.eye(phis.shape[1], dtype=bool)
    cross = np.vdot(model.psi0, tensor(model.H_A, model.H_B) @ model.psi0)
    return OrthogonalityLedger(
        self_energy=float(np.abs(np.diag(state_energy)).max()),
        states=float(np.abs(overlaps - np.eye(phis.shape[1])).max()),
        state_energy=float(np.abs(state_energy[off]).max()) if off.any() else 0.0,
        energy_energy=float(np.abs(energy_energy[off]).max()) if off.any() else 0.0,
        cross_term=float(abs(cross)))


@dataclass(frozen=True)
class LossScalingRow:
    ratio: float
    epsilon: float
    gamma: float
    capacity: float
    gain: float
    capacity_identity: float


@dataclass
class LossScalingReport:
    """
    Loss of the entangled construction over ratio and ε grids.

    Attributes:
        rows (List[LossScalingRow]): ε = 0 rows over the ratio grid, then the
            fixed-ratio rows over the ε grid. The retained outcome is null at
            ε = 0, so those rows carry zero capacity and gain.
        ratio_exponent (float): Log-log slope of the loss odds γ₀/(1−γ₀) against δh_B/δh_A.
        epsilon_exponent (float): Log-log slope of |γ(ε) − γ₀| against ε.
    """

    rows: List[LossScalingRow]
    ratio_exponent: float
    epsilon_exponent: float

    def to_records(self) -> List[Dict[str, float]]:
        return [vars(row).copy() for row in self.rows]


def _loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    slope, _ = np.polyfit(np.log(xs), np.log(ys), 1)
    return float(slope)


def loss_scaling_report(model_for_ratio: Callable[[float], BipartiteModel],
                        ratios: Sequence[float],
                        epsilons: Sequence[float],
                        fixed_ratio: Optional[float] = None,
                        x: float = 0.0,
                        support: Optional[Sequence[int]] = None) -> LossScalingReport:
    """
    Fit the scaling of the entangled-construction loss.

    At ε = 0 the retained outcome is null and the loss is read from the
    restricted completeness residual γ₀ = 1 − Tr(ϱ^⊥A E), whose odds equal
    (δh_B/δh_A)². The ε dependence is fitted on |γ(ε) − γ₀| at a fixed ratio.

    Args:
        model_for_ratio (Callable[[float], BipartiteModel]): Sum-model builder for δh_B/δh_A.
        ratios (Sequence[float]): Positive ratio grid.
        epsilons (Sequence[float]): Positive ε grid.
        fixed_ratio (Optional[float]): Ratio for the ε scan; the median of the grid by default.
        x (float): Evaluation and conjugation point.
        support (Optional[Sequence[int]]): Support components of the ε term.

    Returns:
        LossScalingReport: Rows and fitted exponents.
    """
    rows = []
    odds = []
    for ratio in ratios:
        model = model_for_ratio(ratio)
        gamma0 = verify_restricted(model, x, entangled_lcc(model, epsilon=0.0, x=x, support=support)).completeness
        odds.append(gamma0 / (1.0 - gamma0))
        rows.append(LossScalingRow(float(ratio), 0.0, gamma0, 0.0, 0.0, 0.0))

    ratio = float(np.median(ratios)) if fixed_ratio is None else float(fixed_ratio)
    model = model_for_ratio(ratio)
    gamma0 = verify_restricted(model, x, entangled_lcc(model, epsilon=0.0, x=x, support=support)).completeness
    rho_A = reduced_quantities(model, x).rho_A
    U = model.local_unitary(x)
    support_weight = float(np.trace(rho_A @ U @ support_projector(model, support) @ U.conj().T).real)
    excess = []
    for epsilon in epsilons:
        povm = entangled_lcc(model, epsilon=epsilon, x=x, support=support)
        report = restricted_report(model, x, povm)
        excess.append(abs(report.gamma - gamma0))
        rows.append(LossScalingRow(ratio, float(epsilon), report.gamma, report.capacity, report.gain,
                                   report.capacity * epsilon * support_weight))

    result = LossScalingReport(rows, _loglog_slope(ratios, odds), _loglog_slope(epsilons, excess))
    logger.info(f"Loss scaling: ratio exponent {result.ratio_exponent:.4f}, "
                f"epsilon exponent {result.epsilon_exponent:.4f}")
    return result
