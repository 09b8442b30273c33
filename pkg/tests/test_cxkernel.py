import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mimolink import cxkernel as cx
from mimolink.errors import DefinitenessError, DomainError, ShapeError, SymmetryError


def random_complex(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_hpd(rng, n):
    a = random_complex(rng, n, n)
    return a @ a.conj().T + np.eye(n)


def hermitian_2x2_eigvals(h):
    """Characteristic-polynomial eigenvalues of a 2x2 Hermitian matrix."""
    a, d = h[0, 0].real, h[1, 1].real
    disc = np.sqrt((a - d) ** 2 + 4.0 * abs(h[0, 1]) ** 2)
    return np.array([(a + d + disc) / 2.0, (a + d - disc) / 2.0])


def det_3x3(m):
    """Cofactor-expansion determinant, independent of any factorization."""
    return (m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))


class TestMatmul:
    def test_identity_passthrough(self):
        rng = np.random.default_rng(0)
        a = random_complex(rng, 2, 2)
        np.testing.assert_allclose(cx.matmul(np.eye(2), a), a)

    def test_hand_complex_product(self):
        a = np.array([[1.0, 1.0j], [0.0, 1.0]])
        b = np.array([[1.0], [1.0]])
        np.testing.assert_allclose(cx.matmul(a, b), [[1.0 + 1.0j], [1.0]])

    def test_shape_mismatch_names_both_dims(self):
        with pytest.raises(ShapeError, match="2x3 by 2x2"):
            cx.matmul(np.ones((2, 3)), np.ones((2, 2)))

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            cx.matmul(np.array([[np.inf]]), np.array([[1.0]]))

    def test_associative_on_conforming_triples(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            a = random_complex(rng, 3, 4)
            b = random_complex(rng, 4, 2)
            c = random_complex(rng, 2, 5)
            left = cx.matmul(cx.matmul(a, b), c)
            right = cx.matmul(a, cx.matmul(b, c))
            assert np.linalg.norm(left - right) <= 1e-9 * max(np.linalg.norm(left), 1.0)


class TestAdjoint:
    def test_scalar_conjugate(self):
        np.testing.assert_allclose(cx.adjoint(np.array([[1.0j]])), [[-1.0j]])

    def test_real_matrix_is_transpose(self):
        m = np.arange(6.0).reshape(2, 3)
        np.testing.assert_allclose(cx.adjoint(m), m.T)

    def test_involution(self):
        rng = np.random.default_rng(2)
        m = random_complex(rng, 3, 2)
        np.testing.assert_array_equal(cx.adjoint(cx.adjoint(m)), m)


class TestHermitianSolve:
    def test_identity_system(self):
        rng = np.random.default_rng(3)
        b = random_complex(rng, 3, 2)
        np.testing.assert_allclose(cx.hermitian_solve(np.eye(3), b), b)

    def test_diagonal_inversion(self):
        x = cx.hermitian_solve(np.diag([2.0, 4.0]), np.array([1.0, 1.0]))
        np.testing.assert_allclose(x, [0.5, 0.25])

    def test_residual_contract_on_random_hpd_systems(self):
        rng = np.random.default_rng(4)
        for _ in range(1000):
            n = int(rng.integers(1, 9))
            m = random_hpd(rng, n)
            rhs = random_complex(rng, n, int(rng.integers(1, 4)))
            x = cx.hermitian_solve(m, rhs)
            residual = np.linalg.norm(m @ x - rhs)
            assert residual <= 1e-9 * np.linalg.norm(rhs)

    def test_non_square_rejected(self):
        with pytest.raises(ShapeError):
            cx.hermitian_solve(np.ones((2, 3)), np.ones(2))

    def test_non_hermitian_rejected(self):
        m = np.array([[1.0, 1.0], [0.0, 1.0]])
        with pytest.raises(SymmetryError):
            cx.hermitian_solve(m, np.ones(2))

    def test_indefinite_rejected(self):
        with pytest.raises(DefinitenessError):
            cx.hermitian_solve(np.diag([1.0, -1.0]), np.ones(2))


class TestSquaredSingularValues:
    def test_identity_gives_ones(self):
        np.testing.assert_allclose(cx.squared_singular_values(np.eye(4)), np.ones(4))

    def test_diagonal_case_sorted_descending(self):
        np.testing.assert_allclose(cx.squared_singular_values(np.diag([3.0, 4.0])), [16.0, 9.0])

    def test_zero_matrix(self):
        np.testing.assert_allclose(cx.squared_singular_values(np.zeros((3, 2))), [0.0, 0.0])

    def test_matches_characteristic_polynomial_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            g = random_complex(rng, 3, 2)
            gram = g.conj().T @ g
            expected = hermitian_2x2_eigvals(gram)
            np.testing.assert_allclose(cx.squared_singular_values(g), expected, atol=1e-8)

    def test_sum_equals_frobenius_sq(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            g = random_complex(rng, int(rng.integers(1, 6)), int(rng.integers(1, 6)))
            total = cx.squared_singular_values(g).sum()
            assert total == pytest.approx(cx.frobenius_sq(g), rel=1e-8)


class TestLogdetHpd:
    def test_identity_is_zero(self):
        assert cx.logdet_hpd(np.eye(5)) == 0.0

    def test_diagonal(self):
        assert cx.logdet_hpd(np.diag([2.0, 4.0])) == pytest.approx(3.0)

    def test_matches_cofactor_determinant_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            m = random_hpd(rng, 3)
            expected = np.log2(det_3x3(m).real)
            assert cx.logdet_hpd(m) == pytest.approx(expected, abs=1e-9)

    def test_additive_for_commuting_diagonal_pairs(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            a = np.diag(rng.uniform(0.1, 10.0, size=4))
            b = np.diag(rng.uniform(0.1, 10.0, size=4))
            assert cx.logdet_hpd(a @ b) == pytest.approx(
                cx.logdet_hpd(a) + cx.logdet_hpd(b), abs=1e-9)

    def test_non_hpd_rejected(self):
        with pytest.raises(DefinitenessError):
            cx.logdet_hpd(np.diag([1.0, 0.0]))


class TestFrobeniusSq:
    def test_identity(self):
        assert cx.frobenius_sq(np.eye(2)) == 2.0

    def test_single_complex_entry(self):
        assert cx.frobenius_sq(np.array([[3.0 + 4.0j]])) == pytest.approx(25.0)

    def test_trace_identity(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            m = random_complex(rng, 4, 3)
            trace = np.trace(cx.matmul(cx.adjoint(m), m)).real
            assert cx.frobenius_sq(m) == pytest.approx(trace, abs=1e-10 * max(trace, 1.0))

    # min_magnitude keeps |entry|^2 from underflowing to exactly 0.0
    @given(st.lists(st.just(0j) | st.complex_numbers(min_magnitude=1e-100, max_magnitude=1e6,
                                                     allow_nan=False, allow_infinity=False),
                    min_size=1, max_size=9))
    def test_nonnegative_and_zero_iff_zero(self, entries):
        m = np.array(entries, dtype=complex).reshape(1, -1)
        value = cx.frobenius_sq(m)
        assert value >= 0.0
        assert (value == 0.0) == bool(np.all(m == 0))
