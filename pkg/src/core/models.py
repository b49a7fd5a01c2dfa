"""
Models Module
=============

Built-in parametric families and postselection channels:

* TwoLevelFamily: ψ_x = cos(xΔ/2)|0⟩ + i sin(xΔ/2)|1⟩.
* VonNeumannModel: a spin coupled to a Gaussian meter, ψ_x =
  exp(−ix σ_z⊗P_u)|φ_θ⟩⊗|φ_0⟩, with the meter truncated to N Hermite–Gaussian
  modes. Basis ordering is spin ⊗ meter.
* ThreeQubitModel: the entangled Sum model with H_A = ω₀(σ_z⁽¹⁾ + σ_z⁽²⁾) on
  two qubits and H_B = Δσ_z⁽³⁾ on the third.
* Seeded random ensembles for the verification suites.

Meter conventions: u = σ(a + a†) and P_u = −i∂_u = i(a† − a)/(2σ), so that
φ_1(u) = (u/σ)φ_0(u) and Var(P_u) = 1/(4σ²) in mode 0.
"""

# Python Imports
import logging
from typing import Optional, Sequence

# Library Imports
import numpy as np
import scipy.stats

# Local Imports
from src.core.exceptions import ModelError
from src.core.linalg import SIGMA_Z, herm_eig, ket, projector, psd_sqrt, tensor
from src.core.povm import PovmSet
from src.core.qfi import HamiltonianFamily, NORM_TOL, ParametricPureState
from src.core.restricted import BipartiteModel

logger = logging.getLogger(__name__)

DEFAULT_MODES = 40
HALF_PI_TOL = 1e-12


class TwoLevelFamily(ParametricPureState):
    """
    Two-level family with a closed-form derivative.

    The phase convention makes ⟨ψ|∂ψ⟩ = 0 identically, so I(ρ_x) = Δ² at every x.
    """

    def __init__(self, Delta: float):
        self.Delta = float(Delta)
        super().__init__(2, self._psi_at, self._dpsi_at, name=f"two-level (Δ={self.Delta:g})")

    def _psi_at(self, x: float) -> np.ndarray:
        half = x * self.Delta / 2.0
        return np.array([np.cos(half), 1j * np.sin(half)], dtype=complex)

    def _dpsi_at(self, x: float) -> np.ndarray:
        half = x * self.Delta / 2.0
        return 0.5 * self.Delta * np.array([-np.sin(half), 1j * np.cos(half)], dtype=complex)


def spin_state(theta: float) -> np.ndarray:
    """|φ_θ⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩."""
    return np.array([np.cos(theta / 2.0), np.sin(theta / 2.0)], dtype=complex)


def hermite_gauss(n: int, u: np.ndarray, sigma: float = 1.0) -> np.ndarray:
    """
    Normalized Hermite–Gaussian mode φ_n(u) of width σ.

    φ_0(u) = (2πσ²)^(−1/4) exp(−u²/4σ²) and, with y = u/(√2σ),
    φ_{k+1} = √(2/(k+1))·y·φ_k − √(k/(k+1))·φ_{k−1}, which keeps
    φ_1 = (u/σ)φ_0 and stays stable for large n.

    Args:
        n (int): Mode index.
        u (np.ndarray): Grid points.
        sigma (float): Width.

    Returns:
        np.ndarray: Real mode values on the grid.
    """
    u = np.asarray(u, dtype=float)
    y = u / (np.sqrt(2.0) * sigma)
    previous = np.zeros_like(u)
    current = (2.0 * np.pi * sigma ** 2) ** -0.25 * np.exp(-u ** 2 / (4.0 * sigma ** 2))
    for k in range(n):
        previous, current = current, np.sqrt(2.0 / (k + 1)) * y * current - np.sqrt(k / (k + 1)) * previous
    return current


def meter_momentum(sigma: float, N: int = DEFAULT_MODES) -> np.ndarray:
    """
    P_u on the first N Hermite–Gaussian modes.

    Tridiagonal with P[n+1, n] = i√(n+1)/(2σ) and P[n, n+1] = −i√(n+1)/(2σ).

    Raises:
        ModelError: If N < 2 or σ ≤ 0.
    """
    if N < 2:
        raise ModelError(f"meter truncation needs at least 2 modes, got {N}")
    if sigma <= 0:
        raise ModelError(f"meter width must be positive, got {sigma}")
    ladder = np.sqrt(np.arange(1, N)) / (2.0 * sigma)
    return np.diag(1j * ladder, -1) + np.diag(-1j * ladder, 1)


class VonNeumannModel:
    """
    Spin-meter von Neumann interaction used by weak-value amplification.

    Attributes:
        theta (float): Spin angle of |φ_θ⟩.
        sigma (float): Meter width.
        N (int): Number of meter modes.
    """

    def __init__(self, theta: float, sigma: float = 1.0, N: int = DEFAULT_MODES):
        self.theta = float(theta)
        self.sigma = float(sigma)
        self.N = int(N)
        self.momentum = meter_momentum(self.sigma, self.N)
        self.logger = logging.getLogger(__name__)
        self._family = None

    @property
    def dim(self) -> int:
        return 2 * self.N

    @property
    def generator(self) -> np.ndarray:
        return tensor(SIGMA_Z, self.momentum)

    @property
    def initial_state(self) -> np.ndarray:
        return tensor(spin_state(self.theta), ket(0, self.N))

    def family(self) -> HamiltonianFamily:
        if self._family is None:
            self._family = HamiltonianFamily(self.generator, self.initial_state,
                                             f"von Neumann (θ={self.theta:.6g}, σ={self.sigma:g}, N={self.N})")
        return self._family

    def as_bipartite(self) -> BipartiteModel:
        """Product model with A = spin (H_A = σ_z) and B = meter (H_B = P_u)."""
        return BipartiteModel.product(SIGMA_Z, self.momentum, spin_state(self.theta), ket(0, self.N),
                                      f"von Neumann (θ={self.theta:.6g})")

    def truncation_leakage(self, x: float) -> float:
        """
        Weight the untruncated state ψ_x puts beyond the first N modes.

        Each spin branch shifts the meter by ±x, a coherent displacement with
        |α|² = (x/2σ)², so the weight is the Poisson tail beyond N − 1.
        """
        return float(scipy.stats.poisson.sf(self.N - 1, (x / (2.0 * self.sigma)) ** 2))


def wva_angle(theta: float, epsilon: float) -> float:
    """Postselection angle θ* = θ − π + 2ε of weak-value amplification."""
    return theta - np.pi + 2.0 * epsilon


def lcc_angle(theta: float, epsilon: float) -> float:
    """θ* = −θ, or −θ + 2ε at θ = π/2 where −θ would be orthogonal to φ_θ."""
    if abs(theta - np.pi / 2.0) < HALF_PI_TOL:
        return -theta + 2.0 * epsilon
    return -theta


def wva_channel(theta_star: float, N: int = DEFAULT_MODES) -> PovmSet:
    """Binary postselection E_✓ = |φ_θ*⟩⟨φ_θ*| ⊗ I on spin ⊗ meter."""
    keep = tensor(projector(spin_state(theta_star)), np.eye(N, dtype=complex))
    return PovmSet.complete_with_remainder({"keep": keep}, 2 * N)


def qubit_lcc_channel(theta: float, epsilon: float = 0.0, N: int = DEFAULT_MODES) -> PovmSet:
    """Spin postselection at θ* from lcc_angle; η = c = 1/cos²θ (θ ≠ π/2) or 1/sin²ε."""
    return wva_channel(lcc_angle(theta, epsilon), N)


def meter_lcc_channel(epsilon: float, N: int = DEFAULT_MODES) -> PovmSet:
    """Meter postselection E_✓ = I ⊗ (|φ_1⟩⟨φ_1| + ε|φ_0⟩⟨φ_0|)."""
    if not 0.0 < epsilon <= 1.0:
        raise ModelError(f"epsilon must lie in (0, 1], got {epsilon}")
    meter = projector(ket(1, N)) + epsilon * projector(ket(0, N))
    return PovmSet.complete_with_remainder({"keep": tensor(np.eye(2, dtype=complex), meter)}, 2 * N)


PHI_1_A = (ket(0, 4) + ket(3, 4)) / np.sqrt(2.0)
PHI_2_A = (ket(1, 4) + ket(2, 4)) / np.sqrt(2.0)


class ThreeQubitModel:
    """
    Entangled non-interacting three-qubit model.

    Initial state √p₁|φ₁^A⟩|φ_θ⟩ + √p₂|φ₂^A⟩|φ_{θ−π}⟩ with
    φ₁^A = (|00⟩ + |11⟩)/√2 and φ₂^A = (|01⟩ + |10⟩)/√2. Then
    δh_A² = 4ω₀²p₁ and δh_B² = Δ²(sin²θ + 4p₁p₂cos²θ).

    Attributes:
        omega0 (float): Energy scale of A.
        DeltaB (float): Energy scale of B.
        theta (float): Angle of the partner states.
        p1 (float): Weight of φ₁^A, in (0, 1).
    """

    def __init__(self, omega0: float, DeltaB: float, theta: float, p1: float):
        if not 0.0 < p1 < 1.0:
            raise ModelError(f"p1 must lie in (0, 1), got {p1}")
        self.omega0 = float(omega0)
        self.DeltaB = float(DeltaB)
        self.theta = float(theta)
        self.p1 = float(p1)
        H_A = self.omega0 * (tensor(SIGMA_Z, np.eye(2)) + tensor(np.eye(2), SIGMA_Z))
        H_B = self.DeltaB * SIGMA_Z
        self.model = BipartiteModel.sum(H_A, H_B,
                                        [(self.p1, PHI_1_A, spin_state(self.theta)),
                                         (self.p2, PHI_2_A, spin_state(self.theta - np.pi))],
                                        f"three-qubit (ω₀={self.omega0:g}, Δ={self.DeltaB:.6g})")

    @property
    def p2(self) -> float:
        return 1.0 - self.p1

    @classmethod
    def for_ratio(cls, ratio: float, omega0: float = 1.0, theta: float = np.pi / 3, p1: float = 2.0 / 3) \
            -> 'ThreeQubitModel':
        """Model whose Δ makes δh_B/δh_A equal `ratio`."""
        delta_A = 2.0 * omega0 * np.sqrt(p1)
        spread = np.sqrt(np.sin(theta) ** 2 + 4.0 * p1 * (1.0 - p1) * np.cos(theta) ** 2)
        return cls(omega0, ratio * delta_A / spread, theta, p1)

    @property
    def delta_A(self) -> float:
        return 2.0 * self.omega0 * np.sqrt(self.p1)

    @property
    def delta_B(self) -> float:
        return abs(self.DeltaB) * np.sqrt(np.sin(self.theta) ** 2 + 4.0 * self.p1 * self.p2 * np.cos(self.theta) ** 2)

    def predicted_retention(self) -> float:
        """1 − γ of the entangled construction at ε → 0."""
        return self.delta_A ** 2 / (self.delta_A ** 2 + self.delta_B ** 2)


def random_state(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (A + A.conj().T)


def random_family(rng: np.random.Generator, d: int, name: Optional[str] = None) -> HamiltonianFamily:
    """Random analytic family exp(−ixG)ψ_0 with a complex Gaussian G and ψ_0."""
    return HamiltonianFamily(random_hermitian(rng, d), random_state(rng, d), name or f"random family (d={d})")


def random_psd(rng: np.random.Generator, d: int, rank: Optional[int] = None) -> np.ndarray:
    """Random PSD matrix of the given rank with spectral norm at most 1."""
    rank = d if rank is None else rank
    A = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    E = A @ A.conj().T
    values, _ = herm_eig(E)
    return E / values[-1] * rng.uniform(0.2, 1.0)


def random_povm(rng: np.random.Generator, d: int, n: int = 3, retained: int = 1) -> PovmSet:
    """
    Random complete POVM E_i = S^(−1/2) B_i S^(−1/2), S = Σ B_i.

    The first `retained` labels are retained.
    """
    blocks = [random_psd(rng, d) for _ in range(n)]
    inverse_root = np.linalg.inv(psd_sqrt(sum(blocks)))
    elements = {f"e{i}": inverse_root @ B @ inverse_root for i, B in enumerate(blocks)}
    return PovmSet(elements, tuple(elements)[:retained])


def random_sum_model(rng: np.random.Generator,
                     block_dims: Sequence[int] = (3, 3),
                     d_B: int = 2,
                     energy: float = 0.0) -> BipartiteModel:
    """
    Random Sum model with one φ_k^A per orthogonal energy subspace of A.

    H_A is block diagonal over the subspaces; each block is shifted so that
    ⟨φ_k|H_A|φ_k⟩ equals the common energy.
    """
    d_A = int(sum(block_dims))
    H_A = np.zeros((d_A, d_A), dtype=complex)
    components = []
    weights = rng.dirichlet(np.ones(len(block_dims)))
    start = 0
    for size, weight in zip(block_dims, weights):
        block = random_hermitian(rng, size)
        local = random_state(rng, size)
        block = block + (energy - np.vdot(local, block @ local).real) * np.eye(size)
        H_A[start:start + size, start:start + size] = block
        phi = np.zeros(d_A, dtype=complex)
        phi[start:start + size] = local
        components.append((float(weight), phi, random_state(rng, d_B)))
        start += size
    return BipartiteModel.sum(H_A, random_hermitian(rng, d_B), components, f"random sum model {tuple(block_dims)}")


def check_normalization(family: ParametricPureState, xs: Sequence[float]) -> float:
    """Largest |1 − ‖ψ_x‖| over a grid; raises ModelError above NORM_TOL."""
    worst = max(abs(1.0 - float(np.linalg.norm(family.psi(x)))) for x in xs)
    if worst > NORM_TOL:
        raise ModelError(f"Family '{family.name}' leaves the unit sphere (deviation {worst:.3e})")
    return worst
