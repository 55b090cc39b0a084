import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from egframes.errors import PreconditionError
from egframes.frames import (
    analysis,
    canonical_dual,
    classify,
    dual_of_dual_check,
    e_frame_bounds,
    frame_bounds,
    frame_operator,
    frame_report,
    reconstruct,
    synthesis,
)
from egframes.generators import (
    gen_functional_sequence,
    gen_interleaved,
    gen_random_frame,
    gen_random_operator_sequence,
    gen_standard_basis,
)
from egframes.model import OperatorSequence, StackedVector
from egframes.transform import make_delta, make_dense, make_identity
from oracles import quadratic_form_bounds, random_complex, sampled_quadratic_form, triple_sum_frame_operator

GOLDEN = ((3 - np.sqrt(5)) / 2, (3 + np.sqrt(5)) / 2)


def basis(d):
    return gen_functional_sequence(gen_standard_basis(d))


def test_analysis_of_basis_returns_coordinates():
    f = np.array([[1 + 1j], [2], [3j]])
    v = analysis(basis(3), make_identity(3), f)
    np.testing.assert_array_equal(v.blocks[:, 0], f[:, 0])


def test_analysis_and_synthesis_of_zero():
    seq = gen_random_operator_sequence(3, [2, 1], 0)
    assert not np.any(analysis(seq, make_identity(2), np.zeros((3, 1))).blocks)
    assert not np.any(synthesis(seq, make_identity(2), StackedVector(np.zeros((2, 2)))))


def test_delta_hand_frame_operator():
    s = frame_operator(basis(2), make_delta(2))
    np.testing.assert_array_equal(s, [[2, -1], [-1, 1]])
    np.testing.assert_allclose(frame_bounds(basis(2), make_delta(2)), GOLDEN, atol=1e-14)


def test_scalar_frame_operator():
    seq = OperatorSequence(np.array([[[2.0]]]))
    np.testing.assert_array_equal(frame_operator(seq, make_dense([[1]])), [[4]])


def test_bounds_scale_quadratically():
    seq = gen_random_operator_sequence(3, [2] * 5, 1)
    e = make_delta(5)
    lo, hi = frame_bounds(seq, e)
    lo3, hi3 = frame_bounds(seq.scaled(3j), e)
    assert lo3 == pytest.approx(9 * lo, rel=1e-12)
    assert hi3 == pytest.approx(9 * hi, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_matches_triple_sum_and_jacobi(d, n, p, seed):
    rng = np.random.default_rng(seed)
    seq = OperatorSequence(random_complex(rng, (n, p, d)))
    e = random_complex(rng, (n, n))
    s = frame_operator(seq, make_dense(e))
    oracle = triple_sum_frame_operator(seq.operators, e)
    assert np.linalg.norm(s - oracle) <= 1e-12 * max(1.0, np.linalg.norm(oracle))
    lo, hi = frame_bounds(seq, make_dense(e))
    o_lo, o_hi = quadratic_form_bounds(seq.operators, e)
    assert abs(lo - o_lo) <= 1e-10 * max(1.0, o_hi)
    assert abs(hi - o_hi) <= 1e-10 * max(1.0, o_hi)


def test_adjointness_and_factorization():
    rng = np.random.default_rng(2)
    seq = gen_random_operator_sequence(4, [3, 1, 2, 4, 2], 2)
    e = make_dense(random_complex(rng, (5, 5)))
    s = frame_operator(seq, e)
    for _ in range(20):
        f = random_complex(rng, (4, 1))
        v = StackedVector(random_complex(rng, (5, seq.p)) * (np.arange(seq.p) < np.array(seq.codomain_dims)[:, None]))
        lhs = analysis(seq, e, f).inner(v)
        rhs = np.vdot(synthesis(seq, e, v), f)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))
        np.testing.assert_allclose(synthesis(seq, e, analysis(seq, e, f)), s @ f, rtol=1e-12)
        energy = sampled_quadratic_form(seq.operators, e.entries, f)
        assert np.linalg.norm(analysis(seq, e, f).flatten()) ** 2 == pytest.approx(energy, rel=1e-12)


def test_spectral_bracketing():
    rng = np.random.default_rng(3)
    seq = gen_random_operator_sequence(4, [2] * 6, 3)
    e = make_delta(6)
    lo, hi = frame_bounds(seq, e)
    for _ in range(100):
        f = random_complex(rng, (4, 1))
        q = np.linalg.norm(analysis(seq, e, f).flatten()) ** 2
        nf = np.linalg.norm(f) ** 2
        assert lo * nf * (1 - 1e-10) <= q <= hi * nf * (1 + 1e-10)


class TestClassify:
    def test_parseval(self):
        assert classify(basis(3), make_identity(3)) == "parseval"

    def test_tight(self):
        assert classify(basis(3).scaled(2), make_identity(3)) == "tight"

    def test_missing_direction_is_bessel_only(self):
        vecs = gen_standard_basis(3)
        vecs[-1] = np.zeros((3, 1))
        assert classify(gen_functional_sequence(vecs), make_identity(3)) == "bessel_only"

    def test_interleaved_delta_is_frame(self):
        g = gen_functional_sequence(gen_interleaved(gen_random_frame(3, 5, 0, 3.0)))
        assert classify(g, make_delta(10)) == "frame"

    def test_report_fields(self):
        rep = frame_report(basis(2), make_delta(2))
        assert rep.classification == "frame"
        assert rep.hermiticity_residual == 0


class TestDual:
    def test_tight_dual_is_scaled_primal(self):
        seq = basis(3).scaled(2)
        pair = canonical_dual(seq, make_identity(3))
        np.testing.assert_allclose(pair.dual.operators, seq.operators / 4, atol=1e-15)
        np.testing.assert_allclose(pair.dual_frame_operator, np.eye(3) / 4, atol=1e-15)

    def test_parseval_dual_is_primal(self):
        pair = canonical_dual(basis(4), make_identity(4))
        np.testing.assert_allclose(pair.dual.operators, pair.primal.operators, atol=1e-15)
        rep = dual_of_dual_check(pair, make_identity(4))
        assert rep.details["operator_residual"] <= 1e-12
        assert rep.details["recovery_residual"] <= 1e-12

    def test_random_frame_dual(self):
        seq = gen_functional_sequence(gen_random_frame(4, 8, 4, 5.0))
        e = make_delta(8)
        pair = canonical_dual(seq, e)
        lo, hi = frame_bounds(seq, e)
        d_lo, d_hi = frame_bounds(pair.dual, e)
        assert d_lo == pytest.approx(1 / hi, rel=1e-10)
        assert d_hi == pytest.approx(1 / lo, rel=1e-10)
        rep = dual_of_dual_check(pair, e)
        assert rep.passed and rep.details["recovery_residual"] <= 1e-8

    def test_not_a_frame(self):
        vecs = gen_standard_basis(2)
        vecs[1] = np.zeros((2, 1))
        with pytest.raises(PreconditionError):
            canonical_dual(gen_functional_sequence(vecs), make_identity(2))


class TestReconstruct:
    def test_zero(self):
        assert not np.any(reconstruct(basis(2), make_delta(2), np.zeros((2, 1))))

    def test_basis_vector(self):
        np.testing.assert_allclose(reconstruct(basis(3), make_identity(3), [[0], [1], [0]]), [[0], [1], [0]])

    def test_random(self):
        rng = np.random.default_rng(5)
        seq = gen_random_operator_sequence(5, [2, 3, 1, 2], 5)
        e = make_dense(np.eye(4) + 0.3 * random_complex(rng, (4, 4)))
        for _ in range(50):
            f = random_complex(rng, (5, 1))
            assert np.linalg.norm(reconstruct(seq, e, f) - f) <= 1e-8 * np.linalg.norm(f)


class TestEFrameBounds:
    def test_standard_basis(self):
        np.testing.assert_allclose(e_frame_bounds(gen_standard_basis(3), make_identity(3)), (1, 1))

    def test_scaling(self):
        vecs = gen_random_frame(3, 6, 1, 2.0)
        lo, hi = e_frame_bounds(vecs, make_delta(6))
        lo2, hi2 = e_frame_bounds([2 * v for v in vecs], make_delta(6))
        assert (lo2, hi2) == pytest.approx((4 * lo, 4 * hi), rel=1e-12)

    def test_real_transform_agrees_with_functional_route(self):
        vecs = gen_random_frame(3, 6, 2, 2.0)
        e = make_delta(6)
        np.testing.assert_allclose(
            e_frame_bounds(vecs, e), frame_bounds(gen_functional_sequence(vecs), e), rtol=1e-12
        )
