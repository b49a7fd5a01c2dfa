"""
Linear Algebra Module
=====================

Dense complex linear algebra on the small Hilbert spaces used throughout
lccbench (dimension up to a few dozen): Hermitian eigendecomposition, PSD
square roots, Kronecker products, partial traces and projectors.

All functions are pure and operate on numpy arrays; vectors are 1-D
complex arrays and operators are 2-D complex arrays. The tensor product
convention is row-major Kronecker order: the first factor is the most
significant index.

Usage:
    values, vectors = herm_eig(H)
    K = psd_sqrt(E)
    rho_a = partial_trace(rho, TensorSpace((2, 3)), keep=[0])
"""

# Python Imports
import logging
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence, Tuple

# Library Imports
import numpy as np
import scipy.linalg

# Local Imports
from src.core.exceptions import DimensionMismatchError, NotHermitianError, NotPsdError

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class TensorSpace:
    """
    Ordered factorization of a Hilbert space.

    Attributes:
        factor_dims (Tuple[int, ...]): Dimensions of the factors, slowest index first.
    """

    factor_dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionMismatchError("positive factor dimensions", dims, "tensor space")
        object.__setattr__(self, 'factor_dims', dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.factor_dims))

    def __len__(self) -> int:
        return len(self.factor_dims)


def as_matrix(M) -> np.ndarray:
    """Return M as a square complex matrix."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatchError("square matrix", M.shape, "operator")
    return M


def as_vector(v) -> np.ndarray:
    """Return v as a 1-D complex vector."""
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1:
        raise DimensionMismatchError("1-D vector", v.shape, "state")
    return v


def operator_norm(M: np.ndarray) -> float:
    """Spectral norm of M."""
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def hermiticity_residual(M: np.ndarray) -> float:
    """
    Compute ‖M − M†‖ in the spectral norm.

    Args:
        M (np.ndarray): Square matrix.

    Returns:
        float: The symmetry residual.
    """
    M = as_matrix(M)
    return operator_norm(M - M.conj().T)


def is_hermitian(M: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    M = as_matrix(M)
    return hermiticity_residual(M) <= tol * operator_norm(M)


def require_hermitian(M: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """
    Check that M is Hermitian and return its exactly Hermitian part.

    Raises:
        NotHermitianError: If ‖M − M†‖ > tol·‖M‖.
    """
    M = as_matrix(M)
    residual = hermiticity_residual(M)
    scale = operator_norm(M)
    if residual > tol * scale:
        logger.warning(f"Rejecting non-Hermitian matrix: residual {residual:.3e}, norm {scale:.3e}")
        raise NotHermitianError(residual, scale)
    return 0.5 * (M + M.conj().T)


def herm_eig(M: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a Hermitian matrix.

    Args:
        M (np.ndarray): Hermitian matrix (within HERMITIAN_TOL relative).

    Returns:
        Tuple[np.ndarray, np.ndarray]: Real eigenvalues in ascending order and
        the matrix V whose columns are the orthonormal eigenvectors, so that
        M = V diag(λ) V†.

    Raises:
        NotHermitianError: If M is not Hermitian.
    """
    M = require_hermitian(M)
    values, vectors = scipy.linalg.eigh(M)
    return values, vectors


def min_eigenvalue(M: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    M = require_hermitian(M)
    if M.size == 0:
        return 0.0
    return float(scipy.linalg.eigvalsh(M)[0])


def is_psd(M: np.ndarray, tol: float = PSD_TOL) -> bool:
    M = as_matrix(M)
    if not is_hermitian(M):
        return False
    return min_eigenvalue(M) >= -tol * max(operator_norm(M), 1.0)


def psd_sqrt(M: np.ndarray, what: str = "matrix") -> np.ndarray:
    """
    Principal square root of a positive semidefinite matrix.

    Eigenvalues with |λ| ≤ PSD_TOL·‖M‖ are set to zero before the root is
    taken, so the null space of a rank-deficient element stays exactly null.

    Args:
        M (np.ndarray): PSD matrix.
        what (str): Name used in error messages.

    Returns:
        np.ndarray: Hermitian PSD R with R² = M.

    Raises:
        NotHermitianError: If M is not Hermitian.
        NotPsdError: If an eigenvalue lies below the clamping floor.
    """
    values, vectors = herm_eig(M)
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    if values.size and values[0] < -PSD_TOL * scale:
        logger.warning(f"Rejecting {what}: eigenvalue {values[0]:.3e} below PSD floor")
        raise NotPsdError(float(values[0]), what)
    roots = np.sqrt(np.where(np.abs(values) <= PSD_TOL * scale, 0.0, values))
    R = (vectors * roots) @ vectors.conj().T
    return 0.5 * (R + R.conj().T)


def expm_hermitian(H: np.ndarray, t: float) -> np.ndarray:
    """
    Unitary exp(−i t H) via the eigendecomposition of H.

    Args:
        H (np.ndarray): Hermitian generator.
        t (float): Evolution parameter.

    Returns:
        np.ndarray: The unitary.
    """
    values, vectors = herm_eig(H)
    return (vectors * np.exp(-1j * t * values)) @ vectors.conj().T


def tensor(*factors) -> np.ndarray:
    """
    Kronecker product of vectors or matrices, first factor most significant.

    Args:
        *factors: Two or more arrays, all vectors or all matrices.

    Returns:
        np.ndarray: The product, a vector if every factor is a vector.
    """
    arrays = [np.asarray(f, dtype=complex) for f in factors]
    return reduce(np.kron, arrays)


def ket(index: int, dim: int) -> np.ndarray:
    """Computational basis vector |index⟩ in dimension dim."""
    if not 0 <= index < dim:
        raise DimensionMismatchError(f"index in [0, {dim})", index, "basis ket")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(v: np.ndarray) -> np.ndarray:
    """
    Rank-1 projector onto the direction of v.

    Args:
        v (np.ndarray): Nonzero vector (need not be normalized).

    Returns:
        np.ndarray: |v⟩⟨v| / ⟨v|v⟩.
    """
    v = as_vector(v)
    norm2 = float(np.vdot(v, v).real)
    if norm2 == 0.0:
        raise DimensionMismatchError("nonzero vector", "zero vector", "projector")
    return np.outer(v, v.conj()) / norm2


def span_projector(vectors: Sequence[np.ndarray], dim: int) -> np.ndarray:
    """Orthogonal projector onto the span of the given vectors."""
    if not vectors:
        return np.zeros((dim, dim), dtype=complex)
    basis = scipy.linalg.orth(np.column_stack([as_vector(v) for v in vectors]))
    return basis @ basis.conj().T


def embed_factor(op: np.ndarray, space: TensorSpace, factor: int) -> np.ndarray:
    """
    Embed an operator acting on one factor into the full space.

    Args:
        op (np.ndarray): Operator on factor `factor`.
        space (TensorSpace): The factorization.
        factor (int): Index of the factor op acts on.

    Returns:
        np.ndarray: I ⊗ … ⊗ op ⊗ … ⊗ I.
    """
    op = as_matrix(op)
    if op.shape[0] != space.factor_dims[factor]:
        raise DimensionMismatchError(space.factor_dims[factor], op.shape[0], f"factor {factor}")
    parts = [op if k == factor else np.eye(d, dtype=complex) for k, d in enumerate(space.factor_dims)]
    return tensor(*parts)


def partial_trace(M: np.ndarray, space: TensorSpace, keep: Iterable[int]) -> np.ndarray:
    """
    Trace out every factor not listed in `keep`.

    The operator is reshaped to one row and one column index per factor and
    the discarded pairs are contracted; the kept factors stay in their
    original order.

    Args:
        M (np.ndarray): Operator on the full space.
        space (TensorSpace): Factorization of the space M acts on.
        keep (Iterable[int]): Indices of the factors to keep.

    Returns:
        np.ndarray: The reduced operator.

    Raises:
        DimensionMismatchError: If M does not act on `space`.
    """
    M = np.asarray(M, dtype=complex)
    if M.shape != (space.dim, space.dim):
        raise DimensionMismatchError((space.dim, space.dim), M.shape, "partial trace operand")
    keep = sorted(set(int(k) for k in keep))
    n = len(space)
    if any(k < 0 or k >= n for k in keep):
        raise DimensionMismatchError(f"factor indices in [0, {n})", keep, "partial trace")

    tensor_form = M.reshape(space.factor_dims + space.factor_dims)
    row = list(range(n))
    col = [n + k if k in keep else k for k in range(n)]
    out = [k for k in keep] + [n + k for k in keep]
    reduced = np.einsum(tensor_form, row + col, out)
    kept_dim = int(np.prod([space.factor_dims[k] for k in keep])) if keep else 1
    return reduced.reshape(kept_dim, kept_dim)


def reduced_state(psi: np.ndarray, space: TensorSpace, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix of the pure state psi on the kept factors."""
    psi = as_vector(psi)
    return partial_trace(np.outer(psi, psi.conj()), space, keep)


def hilbert_schmidt(A: np.ndarray, B: np.ndarray) -> complex:
    """Tr(A B) without forming the product."""
    return complex(np.einsum('ij,ji->', A, B))
