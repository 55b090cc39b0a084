"""Analysis, synthesis and frame operators of E-g-frames, plus canonical duals.

With ``M_n = sum_k E[n,k] Lambda_k`` (see :func:`~egframes.transform.apply_transform`):

* analysis   ``f -> {M_n f}``
* synthesis  ``{v_n} -> sum_n M_n^* v_n``
* frame operator ``S = sum_n M_n^* M_n``

Optimal bounds are the extreme eigenvalues of ``S``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, ShapeError
from .generators import gen_functional_sequence
from .model import CheckReport, FrameReport, OperatorSequence, StackedVector
from .numerics import DEFAULT_TOL, as_matrix, fro, hermiticity_residual, solve_hpd
from .transform import apply_transform, make_identity


@dataclass(frozen=True, eq=False)
class DualPair:
    primal: OperatorSequence
    dual: OperatorSequence
    primal_frame_operator: np.ndarray
    dual_frame_operator: np.ndarray
    inverse_residual: float  # relative ||S_dual - S^-1||_F


def _vector(f, d):
    f = as_matrix(f, "f")
    if f.shape != (d, 1):
        raise ShapeError(f"expected a {d}x1 vector, got {f.shape}")
    return f


def analysis(seq, E, f):
    f = _vector(f, seq.d)
    m = apply_transform(E, seq).operators
    return StackedVector((m @ f)[:, :, 0])


def synthesis(seq, E, v):
    if v.N != seq.N or v.p != seq.p:
        raise ShapeError(f"stacked vector is {v.N}x{v.p}, sequence expects {seq.N}x{seq.p}")
    m = apply_transform(E, seq).operators
    out = np.zeros((seq.d, 1), dtype=np.complex128)
    for n in range(seq.N):
        out += m[n].conj().T @ v.block(n)
    return out


def frame_operator(seq, E):
    """``S = sum_n M_n^* M_n``, accumulated over ``n`` ascending."""
    m = apply_transform(E, seq).operators
    s = np.zeros((seq.d, seq.d), dtype=np.complex128)
    for n in range(seq.N):
        s += m[n].conj().T @ m[n]
    return s


def bounds_of(s):
    """Extreme eigenvalues of a frame operator, or ``(nan, inf)`` if it is not finite."""
    if not np.all(np.isfinite(s)):
        return float("nan"), float("inf")
    w = np.linalg.eigvalsh(0.5 * (s + s.conj().T))
    return float(w[0]), float(w[-1])


def frame_bounds(seq, E):
    """Sharpest constants ``(A, B)`` with ``A||f||^2 <= sum ||M_n f||^2 <= B||f||^2``."""
    return bounds_of(frame_operator(seq, E))


def classify_bounds(lower, upper, frame_tol=DEFAULT_TOL.frame):
    """Classification from optimal bounds.

    ``frame_tol`` is relative to the upper bound, so the rank decision does
    not depend on the overall scale of the sequence.
    """
    if not (np.isfinite(lower) and np.isfinite(upper)):
        return "not_bessel_guard"
    if lower <= frame_tol * upper:
        return "bessel_only"
    if upper - lower > frame_tol * upper:
        return "frame"
    if abs(upper - 1.0) <= frame_tol:
        return "parseval"
    return "tight"


def is_frame(classification):
    return classification in ("frame", "tight", "parseval")


def classify(seq, E, frame_tol=None):
    frame_tol = DEFAULT_TOL.frame if frame_tol is None else frame_tol
    if frame_tol <= 0:
        raise ValueError("frame_tol must be positive")
    return classify_bounds(*frame_bounds(seq, E), frame_tol)


def frame_report(seq, E, tol=DEFAULT_TOL):
    s = frame_operator(seq, E)
    lower, upper = bounds_of(s)
    return FrameReport(
        frame_operator=s,
        lower_opt=lower,
        upper_opt=upper,
        classification=classify_bounds(lower, upper, tol.frame),
        hermiticity_residual=hermiticity_residual(s) if np.all(np.isfinite(s)) else float("inf"),
    )


def _require_frame(s, tol, what):
    lower, upper = bounds_of(s)
    if not is_frame(classify_bounds(lower, upper, tol.frame)):
        raise PreconditionError(f"{what} needs a frame, but the lower bound is {lower:.6e}", lower)
    return lower, upper


def canonical_dual(seq, E, tol=DEFAULT_TOL):
    """``{Lambda_n S^-1}`` together with its own frame operator.

    ``S^-1`` is applied by Cholesky solves against the identity columns,
    never by a general-purpose inverse.
    """
    s = frame_operator(seq, E)
    _require_frame(s, tol, "canonical_dual")
    s_inv = solve_hpd(s, np.eye(seq.d), tol)
    s_inv = 0.5 * (s_inv + s_inv.conj().T)
    dual = seq.with_operators(seq.operators @ s_inv)
    s_dual = frame_operator(dual, E)
    residual = fro(s_dual - s_inv) / max(1.0, fro(s_inv))
    return DualPair(seq, dual, s, s_dual, residual)


def reconstruct(seq, E, f, tol=DEFAULT_TOL):
    """Rebuild ``f`` as ``T T^* S^-1 f`` (synthesis of the analysis of ``S^-1 f``)."""
    f = _vector(f, seq.d)
    s = frame_operator(seq, E)
    _require_frame(s, tol, "reconstruct")
    if not np.any(f):
        return np.zeros_like(f)
    x = solve_hpd(s, f, tol)
    return synthesis(seq, E, analysis(seq, E, x))


def dual_of_dual_check(pair, E, tol=DEFAULT_TOL):
    """Check ``S_dual = S^-1`` and ``Lambda~_n S_dual^-1 = Lambda_n``."""
    s = pair.primal_frame_operator
    s_dual = frame_operator(pair.dual, E)
    s_inv = solve_hpd(s, np.eye(s.shape[0]), tol)
    operator_residual = fro(s_dual - s_inv) / max(1.0, fro(s_inv))

    # (Lambda~_n S_dual^-1)^* = S_dual^-1 Lambda~_n^*, solved for all n at once
    d = s.shape[0]
    stacked = pair.dual.operators.reshape(-1, d)
    recovered = solve_hpd(s_dual, stacked.conj().T, tol).conj().T
    primal = pair.primal.operators.reshape(-1, d)
    recovery_residual = fro(recovered - primal) / max(1.0, fro(primal))

    passed = operator_residual <= tol.bound and recovery_residual <= tol.bound
    return CheckReport(
        name="dual_of_dual",
        passed=passed,
        details={
            "operator_residual": operator_residual,
            "recovery_residual": recovery_residual,
        },
    )


def e_frame_bounds(vectors, E):
    """Bounds of ``sum_n |<f, sum_k E[n,k] f_k>|^2``.

    The vectors are mixed by ``E`` first and the functionals are taken
    afterwards.  For complex ``E`` this differs from applying ``E`` to the
    functionals (that route conjugates the entries).
    """
    vecs = [as_matrix(v, f"vector {i + 1}") for i, v in enumerate(vectors)]
    if len(vecs) != E.size_N:
        raise ShapeError(f"{len(vecs)} vectors for a {E.size_N}x{E.size_N} transform")
    cols = np.hstack(vecs)
    mixed = cols @ E.entries.T
    seq = gen_functional_sequence([mixed[:, [n]] for n in range(mixed.shape[1])])
    return frame_bounds(seq, make_identity(seq.N))
