import sys
sys.pycache_prefix = "/tmp/lccbench/"

import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from src.core.exceptions import DimensionMismatchError, NotHermitianError, NotPsdError
from src.core.linalg import SIGMA_X, SIGMA_Z, TensorSpace, embed_factor, expm_hermitian, herm_eig, \
    hilbert_schmidt, is_psd, ket, partial_trace, projector, psd_sqrt, reduced_state, span_projector, tensor


def hermitian_from(real, imag):
    A = real + 1j * imag
    return 0.5 * (A + A.conj().T)


entries = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


class TestLinalgModule(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(7)

    def random_matrix(self, d):
        return self.rng.normal(size=(d, d)) + 1j * self.rng.normal(size=(d, d))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=1, max_value=6).flatmap(
        lambda d: st.tuples(arrays(np.float64, (d, d), elements=entries),
                            arrays(np.float64, (d, d), elements=entries))))
    def test_herm_eig_reconstructs(self, parts):
        M = hermitian_from(*parts)
        values, V = herm_eig(M)
        self.assertTrue(np.all(np.diff(values) >= 0.0))
        scale = max(1.0, np.linalg.norm(M, 2))
        np.testing.assert_allclose((V * values) @ V.conj().T, M, atol=1e-10 * scale)
        np.testing.assert_allclose(V.conj().T @ V, np.eye(M.shape[0]), atol=1e-10)

    def test_herm_eig_rejects_non_hermitian(self):
        with self.assertRaises(NotHermitianError) as context:
            herm_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
        self.assertGreater(context.exception.residual, 0.0)

    def test_psd_sqrt_squares_back(self):
        for d in (1, 2, 5, 8):
            A = self.random_matrix(d)
            M = A @ A.conj().T
            R = psd_sqrt(M)
            np.testing.assert_allclose(R @ R, M, atol=1e-9 * max(1.0, np.linalg.norm(M, 2)))
            np.testing.assert_allclose(R, R.conj().T, atol=1e-12)

    def test_psd_sqrt_clamps_rounding_negatives(self):
        M = np.diag([1.0, -1e-13])
        R = psd_sqrt(M)
        np.testing.assert_allclose(R, np.diag([1.0, 0.0]), atol=1e-12)

    def test_psd_sqrt_of_rank_one_projector_is_itself(self):
        for d in (2, 3, 8):
            v = self.rng.normal(size=d) + 1j * self.rng.normal(size=d)
            P = projector(v / np.linalg.norm(v))
            np.testing.assert_allclose(psd_sqrt(P), P, atol=1e-12)

    def test_psd_sqrt_rejects_negative_eigenvalue(self):
        with self.assertRaises(NotPsdError) as context:
            psd_sqrt(np.diag([1.0, -0.5]))
        self.assertAlmostEqual(context.exception.eigenvalue, -0.5)

    def test_tensor_first_factor_most_significant(self):
        np.testing.assert_array_equal(tensor(ket(0, 2), ket(1, 3)), ket(1, 6))
        np.testing.assert_array_equal(tensor(ket(1, 2), ket(0, 3)), ket(3, 6))
        np.testing.assert_array_equal(tensor(SIGMA_Z, np.eye(2)), np.diag([1, 1, -1, -1]))

    def test_partial_trace_of_product(self):
        A = self.random_matrix(2)
        B = self.random_matrix(3)
        space = TensorSpace((2, 3))
        np.testing.assert_allclose(partial_trace(tensor(A, B), space, [0]), A * np.trace(B), atol=1e-12)
        np.testing.assert_allclose(partial_trace(tensor(A, B), space, [1]), B * np.trace(A), atol=1e-12)
        self.assertAlmostEqual(complex(partial_trace(tensor(A, B), space, [])[0, 0]),
                               complex(np.trace(A) * np.trace(B)))

    def test_partial_trace_cyclic_on_traced_factor(self):
        space = TensorSpace((2, 3))
        R_B = embed_factor(self.random_matrix(3), space, 1)
        T = self.random_matrix(6)
        np.testing.assert_allclose(partial_trace(R_B @ T, space, [0]), partial_trace(T @ R_B, space, [0]),
                                   atol=1e-12)

    def test_partial_trace_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            partial_trace(np.eye(5), TensorSpace((2, 3)), [0])
        with self.assertRaises(DimensionMismatchError):
            partial_trace(np.eye(6), TensorSpace((2, 3)), [2])

    def test_reduced_state_of_bell_pair(self):
        bell = (tensor(ket(0, 2), ket(0, 2)) + tensor(ket(1, 2), ket(1, 2))) / np.sqrt(2.0)
        np.testing.assert_allclose(reduced_state(bell, TensorSpace((2, 2)), [0]), np.eye(2) / 2.0, atol=1e-15)

    def test_projector(self):
        P = projector(np.array([1.0, 1.0j, 0.0]))
        np.testing.assert_allclose(P @ P, P, atol=1e-15)
        self.assertAlmostEqual(np.trace(P).real, 1.0)
        with self.assertRaises(DimensionMismatchError):
            projector(np.zeros(3))

    def test_span_projector(self):
        P = span_projector([ket(0, 4), ket(0, 4) + ket(1, 4)], 4)
        np.testing.assert_allclose(P, np.diag([1, 1, 0, 0]), atol=1e-12)
        np.testing.assert_array_equal(span_projector([], 3), np.zeros((3, 3)))

    def test_expm_hermitian_is_unitary(self):
        U = expm_hermitian(SIGMA_X, np.pi / 2)
        np.testing.assert_allclose(U, -1j * SIGMA_X, atol=1e-12)
        np.testing.assert_allclose(U @ U.conj().T, np.eye(2), atol=1e-12)

    def test_is_psd_and_hilbert_schmidt(self):
        self.assertTrue(is_psd(np.diag([1.0, 0.0])))
        self.assertFalse(is_psd(np.diag([1.0, -0.1])))
        A, B = self.random_matrix(3), self.random_matrix(3)
        self.assertAlmostEqual(hilbert_schmidt(A, B), complex(np.trace(A @ B)))

    def test_tensor_space_rejects_empty_factor(self):
        with self.assertRaises(DimensionMismatchError):
            TensorSpace((2, 0))
        self.assertEqual(TensorSpace((2, 3, 4)).dim, 24)


if __name__ == '__main__':
    unittest.main()
