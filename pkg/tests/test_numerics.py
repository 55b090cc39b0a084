import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from egframes.errors import DomainError, ShapeError, SingularityError
from egframes.numerics import (
    DEFAULT_TOL,
    Tolerances,
    adjoint,
    as_matrix,
    hermitian_eig,
    inv_sqrt_hpd,
    matmul,
    operator_norm,
    solve_hpd,
)
from oracles import jacobi_eigvalsh, random_complex

GOLDEN = ((3 - np.sqrt(5)) / 2, (3 + np.sqrt(5)) / 2)


def random_hermitian(rng, d):
    g = random_complex(rng, (d, d))
    return 0.5 * (g + g.conj().T)


def random_hpd(rng, d):
    g = random_complex(rng, (d, d))
    return g @ g.conj().T + d * np.eye(d)


class TestMatmul:
    def test_identity(self):
        m = np.array([[1 + 2j, 3], [4, 5 - 1j]])
        np.testing.assert_array_equal(matmul(np.eye(2), m), m)

    def test_permutation(self):
        np.testing.assert_array_equal(matmul([[0, 1], [1, 0]], [[2.0], [7.0]]), [[7.0], [2.0]])

    def test_direct_expansion(self):
        np.testing.assert_array_equal(matmul([[1, -1], [0, 1]], [[1], [1]]), [[0], [1]])

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            matmul(np.ones((2, 3)), np.ones((2, 3)))

    def test_associative_on_random_triples(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            a, b, c = (random_complex(rng, (8, 8)) for _ in range(3))
            left = matmul(matmul(a, b), c)
            right = matmul(a, matmul(b, c))
            assert np.linalg.norm(left - right) <= 1e-12 * np.linalg.norm(left)

    def test_deterministic(self):
        rng = np.random.default_rng(2)
        a, b = random_complex(rng, (6, 5)), random_complex(rng, (5, 4))
        assert matmul(a, b).tobytes() == matmul(a, b).tobytes()


class TestAdjoint:
    def test_scalar(self):
        assert adjoint([[1j]])[0, 0] == -1j

    def test_real_symmetric(self):
        m = np.array([[1.0, 2.0], [2.0, 3.0]])
        np.testing.assert_array_equal(adjoint(m), m)

    def test_transpose_structure(self):
        np.testing.assert_array_equal(adjoint([[1, 2], [3, 4]]), [[1, 3], [2, 4]])

    @given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1))
    def test_involution(self, r, c, seed):
        a = random_complex(np.random.default_rng(seed), (r, c))
        np.testing.assert_array_equal(adjoint(adjoint(a)), a)


class TestHermitianEig:
    def test_identity(self):
        np.testing.assert_allclose(hermitian_eig(np.eye(3)).eigenvalues, [1, 1, 1])

    def test_golden_pair(self):
        w = hermitian_eig([[2, -1], [-1, 1]]).eigenvalues
        np.testing.assert_allclose(w, GOLDEN, rtol=1e-14)
        np.testing.assert_allclose(w, jacobi_eigvalsh([[2, -1], [-1, 1]]), rtol=1e-14)

    def test_scalar(self):
        assert hermitian_eig([[4.0]]).eigenvalues[0] == pytest.approx(4.0)

    def test_rejects_non_square(self):
        with pytest.raises(ShapeError):
            hermitian_eig(np.ones((2, 3)))

    def test_rejects_non_hermitian(self):
        with pytest.raises(DomainError):
            hermitian_eig([[1, 2], [0, 1]])

    def test_roundoff_asymmetry_is_symmetrized(self):
        m = np.array([[2, -1 + 1e-12], [-1, 1]], dtype=complex)
        w, v = hermitian_eig(m)
        assert np.isrealobj(w)

    @pytest.mark.parametrize("d", [1, 2, 4, 8, 16])
    def test_contract_on_random_hermitian(self, d):
        rng = np.random.default_rng(d)
        tol = DEFAULT_TOL.eig
        for _ in range(100):
            m = random_hermitian(rng, d)
            w, v = hermitian_eig(m)
            assert np.all(np.diff(w) >= 0)
            recon = (v * w) @ v.conj().T
            assert np.linalg.norm(recon - m) <= tol * max(1.0, np.linalg.norm(m))
            assert np.linalg.norm(v.conj().T @ v - np.eye(d)) <= tol

    @pytest.mark.parametrize("d", [2, 5, 8])
    def test_agrees_with_jacobi_oracle(self, d):
        rng = np.random.default_rng(100 + d)
        for _ in range(10):
            m = random_hermitian(rng, d)
            np.testing.assert_allclose(hermitian_eig(m).eigenvalues, jacobi_eigvalsh(m), atol=1e-12)


class TestSolveHpd:
    def test_identity(self):
        b = np.array([[1.0], [2j]])
        np.testing.assert_allclose(solve_hpd(np.eye(2), b), b)

    def test_diagonal(self):
        np.testing.assert_allclose(solve_hpd(np.diag([2.0, 4.0]), [[2.0], [4.0]]), [[1], [1]])

    def test_hand_inverse(self):
        # inverse of [[2,-1],[-1,1]] is [[1,1],[1,2]] (det 1)
        np.testing.assert_allclose(solve_hpd([[2, -1], [-1, 1]], [[1], [0]]), [[1], [1]], atol=1e-14)

    def test_singular(self):
        with pytest.raises(SingularityError) as info:
            solve_hpd(np.diag([1.0, 0.0]), [[1.0], [1.0]])
        assert info.value.min_eigenvalue == pytest.approx(0.0)

    def test_indefinite_carries_min_eigenvalue(self):
        with pytest.raises(SingularityError) as info:
            solve_hpd(np.diag([1.0, -2.0]), [[1.0], [1.0]])
        assert info.value.min_eigenvalue == pytest.approx(-2.0)

    def test_shape_error(self):
        with pytest.raises(ShapeError):
            solve_hpd(np.eye(2), np.ones((3, 1)))

    @pytest.mark.parametrize("d", [1, 2, 4, 8, 16])
    def test_residual_on_random_systems(self, d):
        rng = np.random.default_rng(7 * d)
        for _ in range(100):
            m = random_hpd(rng, d)
            b = random_complex(rng, (d, 2))
            x = solve_hpd(m, b)
            assert np.linalg.norm(m @ x - b) <= DEFAULT_TOL.solve * np.linalg.norm(b)


class TestInvSqrt:
    def test_identity(self):
        np.testing.assert_allclose(inv_sqrt_hpd(np.eye(3)), np.eye(3))

    def test_diagonal(self):
        np.testing.assert_allclose(inv_sqrt_hpd(np.diag([4.0, 9.0])), np.diag([0.5, 1 / 3]), rtol=1e-15)

    def test_random_property(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            m = random_hpd(rng, 4)
            r = inv_sqrt_hpd(m)
            assert np.linalg.norm(r - r.conj().T) == 0
            assert np.linalg.norm(r @ m @ r - np.eye(4)) <= DEFAULT_TOL.solve

    def test_singular(self):
        with pytest.raises(SingularityError):
            inv_sqrt_hpd(np.zeros((2, 2)))


class TestOperatorNorm:
    def test_identity(self):
        assert operator_norm(np.eye(5)) == pytest.approx(1.0)

    def test_diagonal(self):
        assert operator_norm(np.diag([3.0, -5.0])) == pytest.approx(5.0)

    def test_nilpotent(self):
        # m^* m = diag(0, 4)
        assert operator_norm([[0, 2], [0, 0]]) == pytest.approx(2.0)

    @settings(max_examples=50)
    @given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32 - 1))
    def test_sqrt_of_gram_max_eigenvalue(self, r, c, seed):
        m = random_complex(np.random.default_rng(seed), (r, c))
        gram_max = jacobi_eigvalsh(m.conj().T @ m)[-1]
        assert operator_norm(m) == pytest.approx(np.sqrt(gram_max), rel=1e-12)


def test_as_matrix_rejects_non_finite():
    with pytest.raises(DomainError):
        as_matrix([[np.nan]])


def test_tolerance_scaling_and_overrides():
    t = Tolerances().scaled(10)
    assert t.eig == pytest.approx(1e-9)
    assert Tolerances().updated({"bound": 1e-6}).bound == 1e-6
    with pytest.raises(KeyError):
        Tolerances().updated({"typo": 1.0})
