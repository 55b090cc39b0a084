"""Verifiers for the perturbation, composition and sum results on E-g-frames.

Each verifier decides its hypothesis at the operator level (a PSD slack
or a rank/orthogonality test, never by sampling vectors), computes the
bounds the result predicts, and compares them with the measured optimal
bounds.  When the hypothesis fails the conclusion is reported but not
asserted.
"""

from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError, PreconditionError, ShapeError
from .frames import (
    bounds_of,
    canonical_dual,
    classify_bounds,
    dual_of_dual_check,
    frame_bounds,
    frame_operator,
    is_frame,
    reconstruct,
)
from .generators import gen_functional_sequence, gen_interleaved
from .model import CheckReport, WeightSequence
from .numerics import (
    DEFAULT_TOL,
    as_matrix,
    fro,
    hermiticity_residual,
    inv_sqrt_hpd,
    min_singular_value,
    operator_norm,
    range_basis,
)
from .transform import apply_transform, make_delta, make_identity

SQRT_HALF = np.sqrt(0.5)


def _slack(value, tol):
    return tol * max(1.0, abs(value))


def _classify(seq, E, tol):
    lower, upper = frame_bounds(seq, E)
    return lower, upper, classify_bounds(lower, upper, tol.frame)


def _require_frame(seq, E, tol, what):
    lower, upper, cls = _classify(seq, E, tol)
    if not is_frame(cls):
        raise PreconditionError(f"{what}: the sequence is not a frame (lower bound {lower:.6e})", lower)
    return lower, upper


def _common_padding(lam, gam):
    if lam.N != gam.N or lam.d != gam.d:
        raise ShapeError(f"sequences differ in shape: {lam.operators.shape} vs {gam.operators.shape}")
    p = max(lam.p, gam.p)
    return lam.padded(p), gam.padded(p)


def _check_hermitian_operator(u, tol, name="U"):
    u = as_matrix(u, name)
    if u.shape[0] != u.shape[1]:
        raise ShapeError(f"{name} must be square, got {u.shape}")
    return u, hermiticity_residual(u) <= tol.herm


def _injective(u, tol):
    smax = operator_norm(u)
    return smax > 0 and min_singular_value(u) > tol.pd * smax


# -- perturbation -----------------------------------------------------------


@dataclass
class PerturbationVerdict:
    hypothesis_holds: bool
    hypothesis_margin: float
    predicted_lower: float
    predicted_upper: float
    measured_lower: float
    measured_upper: float
    contained: bool
    alpha: float = 0.0
    beta: float = 0.0

    @property
    def passed(self):
        return self.contained if self.hypothesis_holds else True

    def as_dict(self):
        out = asdict(self)
        out["passed"] = self.passed
        return out


def perturbation_bounds(lower, upper, a, b, alpha, beta):
    """Frame bounds of the perturbed sequence implied by the perturbation inequality.

    Chaining ``||x||^2 <= 2||x - y||^2 + 2||y||^2`` with the hypothesis
    gives ``(1-2b)||bG||^2 <= 2(1+a)||aL||^2`` and
    ``(1-2a)||aL||^2 <= 2(1+b)||bG||^2``; the weights are then pulled out
    through their inf/sup.
    """
    pred_lower = (1 - 2 * alpha) * a.inf_abs**2 * lower / (2 * (1 + beta) * b.sup_abs**2)
    pred_upper = 2 * (1 + alpha) * a.sup_abs**2 * upper / ((1 - 2 * beta) * b.inf_abs**2)
    return pred_lower, pred_upper


def check_perturbation(lam, gam, E, a, b, alpha, beta, tol=DEFAULT_TOL):
    """Decide the weighted perturbation inequality and test the predicted bounds for ``gam``.

    The inequality
    ``sum ||a_n M_n f - b_n G_n f||^2 <= alpha sum ||a_n M_n f||^2 + beta sum ||b_n G_n f||^2``
    for all ``f`` is the operator statement ``D^*D <= alpha X^*X + beta Y^*Y``
    with ``X = [a_n M_n]``, ``Y = [b_n G_n]`` and ``D = X - Y``; its margin is the
    smallest eigenvalue of the slack.
    """
    if not (0 <= alpha < 0.5) or not (0 <= beta < 0.5):
        raise DomainError(f"alpha and beta must lie in [0, 1/2), got alpha={alpha}, beta={beta}")
    lam, gam = _common_padding(lam, gam)
    if len(a) != lam.N or len(b) != lam.N:
        raise ShapeError(f"weights must have {lam.N} entries")
    lower, upper = _require_frame(lam, E, tol, "check_perturbation")

    m_lam = apply_transform(E, lam).operators
    m_gam = apply_transform(E, gam).operators
    x = (a.values[:, None, None] * m_lam).reshape(-1, lam.d)
    y = (b.values[:, None, None] * m_gam).reshape(-1, lam.d)
    dd = x - y
    xx = x.conj().T @ x
    yy = y.conj().T @ y
    rhs = alpha * xx + beta * yy
    lhs = dd.conj().T @ dd
    slack = rhs - lhs
    margin = float(np.linalg.eigvalsh(0.5 * (slack + slack.conj().T))[0])
    scale = max(1.0, operator_norm(rhs), operator_norm(lhs))
    holds = margin >= -tol.eig * scale

    pred_lower, pred_upper = perturbation_bounds(lower, upper, a, b, alpha, beta)
    meas_lower, meas_upper = frame_bounds(gam, E)
    contained = (pred_lower - _slack(pred_lower, tol.bound) <= meas_lower) and (
        meas_upper <= pred_upper + _slack(pred_upper, tol.bound)
    )
    return PerturbationVerdict(
        hypothesis_holds=bool(holds),
        hypothesis_margin=margin,
        predicted_lower=float(pred_lower),
        predicted_upper=float(pred_upper),
        measured_lower=meas_lower,
        measured_upper=meas_upper,
        contained=bool(contained),
        alpha=float(alpha),
        beta=float(beta),
    )


def check_perturbation_simple(lam, gam, E, alpha, tol=DEFAULT_TOL):
    ones = WeightSequence.ones(lam.N)
    return check_perturbation(lam, gam, E, ones, ones, alpha, 0.0, tol)


@dataclass
class PowerStep:
    m: int
    alpha: float
    verdict: PerturbationVerdict
    classification: str
    passed: bool

    def as_dict(self):
        return {
            "m": self.m,
            "alpha": self.alpha,
            "classification": self.classification,
            "passed": self.passed,
            "verdict": self.verdict.as_dict(),
        }


def check_um_family(lam, E, U, m_max, side="right", tol=DEFAULT_TOL):
    """Run the simple perturbation check on ``{Lambda_n + Lambda_n U^m}`` for ``m = 1..m_max``.

    ``side="right"`` composes ``U^m`` on the input side, which is always
    well-typed; the perturbation inequality with ``alpha = ||U||^(2m)`` is
    then not guaranteed and is only reported.  ``side="left"`` uses
    ``U^m Lambda_n`` and needs every ``H_n`` to be the whole space; there
    the inequality holds by construction and a failure is a failed step.
    Either way every ``Gamma`` must come out a frame.
    """
    u = as_matrix(U, "U")
    if u.shape != (lam.d, lam.d):
        raise ShapeError(f"U must be {lam.d}x{lam.d}, got {u.shape}")
    if side not in ("right", "left"):
        raise DomainError(f"side must be 'right' or 'left', got {side!r}")
    norm = operator_norm(u)
    if norm >= SQRT_HALF:
        raise PreconditionError(f"||U|| = {norm:.6f} is not below sqrt(2)/2", norm)
    _require_frame(lam, E, tol, "check_um_family")

    steps = []
    power = np.eye(lam.d, dtype=np.complex128)
    for m in range(1, m_max + 1):
        power = power @ u
        if side == "right":
            gam = lam.combine(lam.compose_right(power))
        else:
            gam = lam.combine(lam.compose_left(power))
        alpha = norm ** (2 * m)
        verdict = check_perturbation_simple(lam, gam, E, alpha, tol)
        _, _, cls = _classify(gam, E, tol)
        ok = is_frame(cls) and verdict.passed
        if side == "left":
            ok = ok and verdict.hypothesis_holds
        steps.append(PowerStep(m, float(alpha), verdict, cls, bool(ok)))
    return steps


# -- composition with operators ---------------------------------------------


def check_composition_selfadjoint(lam, E, U, m_max=3, tol=DEFAULT_TOL):
    """``{Lambda_n}`` is a frame iff ``{Lambda_n U}`` is, for Hermitian injective ``U``.

    Also checks the two bound routes:
    ``A(Lambda U) >= A(Lambda) / ||U^-1||^2`` and
    ``A(Lambda) >= A(Lambda U) / ||U||^2``, and that ``{Lambda_n U^m}`` stays a frame.
    """
    u, hermitian = _check_hermitian_operator(U, tol)
    if u.shape[0] != lam.d:
        raise ShapeError(f"U must be {lam.d}x{lam.d}")
    if not hermitian:
        raise PreconditionError("U is not self-adjoint", hermiticity_residual(u))
    if not _injective(u, tol):
        raise PreconditionError("U is not injective", min_singular_value(u))

    smin, smax = min_singular_value(u), operator_norm(u)
    lam_u = lam.compose_right(u)
    lo, hi, cls = _classify(lam, E, tol)
    lo_u, hi_u, cls_u = _classify(lam_u, E, tol)
    equivalent = is_frame(cls) == is_frame(cls_u)

    forward_bound = lo * smin**2
    backward_bound = lo_u / smax**2
    forward_ok = (not is_frame(cls)) or lo_u >= forward_bound - _slack(forward_bound, tol.bound)
    backward_ok = (not is_frame(cls_u)) or lo >= backward_bound - _slack(backward_bound, tol.bound)

    power_classes = []
    power = np.eye(lam.d, dtype=np.complex128)
    for _ in range(m_max):
        power = power @ u
        power_classes.append(_classify(lam.compose_right(power), E, tol)[2])
    powers_ok = (not is_frame(cls)) or all(is_frame(c) for c in power_classes)

    passed = bool(equivalent and forward_ok and backward_ok and powers_ok)
    return CheckReport(
        name="check_composition_selfadjoint",
        passed=passed,
        details={
            "lambda_bounds": [lo, hi],
            "lambda_u_bounds": [lo_u, hi_u],
            "lambda_classification": cls,
            "lambda_u_classification": cls_u,
            "equivalent": equivalent,
            "forward_predicted_lower": forward_bound,
            "backward_predicted_lower": backward_bound,
            "power_classifications": power_classes,
            "finite_dimensional_note": "injective self-adjoint U is invertible in finite dimensions",
        },
    )


def check_inv_sqrt_parseval(lam, E, tol=DEFAULT_TOL):
    """``{Lambda_n S^-1/2}`` has frame operator ``S^-1/2 S S^-1/2 = I``."""
    _require_frame(lam, E, tol, "check_inv_sqrt_parseval")
    s = frame_operator(lam, E)
    gam = lam.compose_right(inv_sqrt_hpd(s, tol))
    s_gam = frame_operator(gam, E)
    residual = fro(s_gam - np.eye(lam.d))
    lo, hi = bounds_of(s_gam)
    cls = classify_bounds(lo, hi, tol.frame)
    return CheckReport(
        name="check_inv_sqrt_parseval",
        passed=bool(residual <= tol.bound and is_frame(cls)),
        details={"identity_residual": residual, "bounds": [lo, hi], "classification": cls},
    )


def check_closed_range(lam_u, E, U, lam=None, tol=DEFAULT_TOL):
    """If ``{Lambda_n U}`` is a frame then ``U`` is injective, and for
    self-adjoint ``U`` also ``{Lambda_n}`` is a frame with lower bound at
    least ``A(Lambda U) / ||U||^2``.

    Closed range is automatic in finite dimensions.  ``lam`` defaults to
    ``lam_u U^-1``; when given, its consistency with ``lam_u`` is checked.
    """
    u, hermitian = _check_hermitian_operator(U, tol)
    if u.shape[0] != lam_u.d:
        raise ShapeError(f"U must be {lam_u.d}x{lam_u.d}")
    lo_u, hi_u, cls_u = _classify(lam_u, E, tol)
    details = {"lambda_u_bounds": [lo_u, hi_u], "lambda_u_classification": cls_u, "u_hermitian": hermitian}
    if not is_frame(cls_u):
        return CheckReport("check_closed_range", True, False, "hypothesis not met, conclusion skipped", details)

    injective = _injective(u, tol)
    details["u_min_singular_value"] = min_singular_value(u)
    details["claim_i_injective"] = injective
    if not hermitian:
        return CheckReport(
            "check_closed_range",
            injective,
            True,
            "U not self-adjoint: claim (ii) skipped",
            details,
        )
    if lam is None:
        if not injective:
            return CheckReport("check_closed_range", False, True, "U is singular", details)
        lam = lam_u.compose_right(np.linalg.inv(u))
    else:
        consistency = fro(lam.compose_right(u).operators - lam_u.padded(max(lam.p, lam_u.p)).operators)
        details["consistency_residual"] = consistency
        if consistency > tol.bound * max(1.0, fro(lam_u.operators)):
            return CheckReport(
                "check_closed_range", True, False, "given Lambda does not satisfy Lambda U = Lambda_u", details
            )
    lo, hi, cls = _classify(lam, E, tol)
    predicted = lo_u / operator_norm(u) ** 2
    bound_ok = lo >= predicted - _slack(predicted, tol.bound)
    details.update(
        {
            "lambda_bounds": [lo, hi],
            "lambda_classification": cls,
            "predicted_lower": predicted,
        }
    )
    return CheckReport("check_closed_range", bool(injective and is_frame(cls) and bound_ok), True, "", details)


# -- sums of orthogonal sequences -------------------------------------------


def range_overlap(a, b):
    """Largest cosine of a principal angle between the column spaces of ``a`` and ``b``."""
    qa, qb = range_basis(a), range_basis(b)
    if qa.shape[1] == 0 or qb.shape[1] == 0:
        return 0.0
    return operator_norm(qa.conj().T @ qb)


def index_overlap(lam, gam):
    """``max_n`` overlap of ``R(Lambda_n)`` and ``R(Gamma_n)``."""
    return max(range_overlap(lam[n], gam[n]) for n in range(lam.N))


def mixed_overlap(lam, gam, E):
    """Overlap of the ranges that actually meet inside one mixed block.

    For each row ``n`` of ``E`` the ranges ``R(Lambda_k)`` with
    ``E[n,k] != 0`` are compared with the ranges ``R(Gamma_j)`` with
    ``E[n,j] != 0``.  This reduces to :func:`index_overlap` for diagonal
    ``E`` and is what the Pythagorean step of the sum results needs.
    """
    worst = 0.0
    for n in range(lam.N):
        support = np.flatnonzero(E.entries[n])
        if support.size == 0:
            continue
        a = np.hstack([lam[k] for k in support])
        b = np.hstack([gam[k] for k in support])
        worst = max(worst, range_overlap(a, b))
    return worst


def _orthogonality(lam, gam, E, tol, what):
    per_index = index_overlap(lam, gam)
    if per_index > tol.orth:
        raise PreconditionError(f"{what}: ranges are not orthogonal (overlap {per_index:.3e})", per_index)
    mixed = mixed_overlap(lam, gam, E)
    return per_index, mixed, mixed <= tol.orth


def check_sum_bessel(lam, gam, E, U1, U2, tol=DEFAULT_TOL):
    """Bessel bound of ``{Lambda_n U1 + Gamma_n U2}`` is at most ``B1 ||U1||^2 + B2 ||U2||^2``."""
    lam, gam = _common_padding(lam, gam)
    u1, u2 = as_matrix(U1, "U1"), as_matrix(U2, "U2")
    per_index, mixed, mixed_ok = _orthogonality(lam, gam, E, tol, "check_sum_bessel")
    _, b1 = frame_bounds(lam, E)
    _, b2 = frame_bounds(gam, E)
    total = lam.compose_right(u1).combine(gam.compose_right(u2))
    _, b_sum = frame_bounds(total, E)
    predicted = b1 * operator_norm(u1) ** 2 + b2 * operator_norm(u2) ** 2
    bound_ok = b_sum <= predicted + _slack(predicted, tol.bound)
    details = {
        "index_overlap": per_index,
        "mixed_overlap": mixed,
        "upper_lambda": b1,
        "upper_gamma": b2,
        "upper_sum": b_sum,
        "predicted_upper": predicted,
        "bound_holds": bool(bound_ok),
    }
    if not mixed_ok:
        return CheckReport(
            "check_sum_bessel", True, False, "ranges overlap after mixing by E, conclusion skipped", details
        )
    return CheckReport("check_sum_bessel", bool(bound_ok), True, "", details)


def check_sum_frame_combos(lam, gam, E, a, b, tol=DEFAULT_TOL):
    """``Lambda + Gamma``, ``Lambda - Gamma`` and ``a Lambda + b Gamma`` are frames."""
    lam, gam = _common_padding(lam, gam)
    lo, hi = _require_frame(lam, E, tol, "check_sum_frame_combos")
    per_index, mixed, mixed_ok = _orthogonality(lam, gam, E, tol, "check_sum_frame_combos")
    combos = {
        "plus": lam.combine(gam, 1.0, 1.0),
        "minus": lam.combine(gam, 1.0, -1.0),
        "weighted": lam.combine(gam, a.values, b.values),
    }
    measured = {}
    all_frames = True
    for key, seq in combos.items():
        c_lo, c_hi, cls = _classify(seq, E, tol)
        measured[key] = {"bounds": [c_lo, c_hi], "classification": cls}
        all_frames = all_frames and is_frame(cls)
    pythagoras = all(
        measured[k]["bounds"][0] >= lo - _slack(lo, tol.bound) for k in ("plus", "minus")
    )
    details = {
        "index_overlap": per_index,
        "mixed_overlap": mixed,
        "lambda_bounds": [lo, hi],
        "combinations": measured,
        "pythagorean_lower": bool(pythagoras),
    }
    if not mixed_ok:
        return CheckReport(
            "check_sum_frame_combos", True, False, "ranges overlap after mixing by E, conclusion skipped", details
        )
    return CheckReport("check_sum_frame_combos", bool(all_frames and pythagoras), True, "", details)


# -- worked examples and duals ----------------------------------------------


def check_example22(vectors, tol=DEFAULT_TOL):
    """Functionals of a frame with upper bound ``B`` are Delta-Bessel with bound ``4B``."""
    seq = gen_functional_sequence(vectors)
    lo, hi = frame_bounds(seq, make_identity(seq.N))
    d_lo, d_hi = frame_bounds(seq, make_delta(seq.N))
    predicted = 4 * hi
    return CheckReport(
        "check_example22",
        bool(d_hi <= predicted + tol.bound),
        True,
        "",
        {"frame_bounds": [lo, hi], "delta_bounds": [d_lo, d_hi], "predicted_upper": predicted},
    )


def check_example23(vectors, tol=DEFAULT_TOL):
    """Interleaving with zeros keeps the frame bounds; its Delta-bounds are ``(2A, 2B)``.

    The claimed interval ``[A, 2B]`` is checked; the sharp values
    ``(2A, 2B)`` are checked separately.
    """
    base = gen_functional_sequence(vectors)
    lo, hi = frame_bounds(base, make_identity(base.N))
    g = gen_functional_sequence(gen_interleaved(vectors))
    g_lo, g_hi = frame_bounds(g, make_identity(g.N))
    d_lo, d_hi = frame_bounds(g, make_delta(g.N))
    same = abs(g_lo - lo) <= _slack(lo, tol.bound) and abs(g_hi - hi) <= _slack(hi, tol.bound)
    contained = (lo - tol.bound <= d_lo) and (d_hi <= 2 * hi + tol.bound)
    sharp = abs(d_lo - 2 * lo) <= _slack(2 * lo, tol.bound) and abs(d_hi - 2 * hi) <= _slack(2 * hi, tol.bound)
    return CheckReport(
        "check_example23",
        bool(same and contained and sharp),
        True,
        "",
        {
            "frame_bounds": [lo, hi],
            "interleaved_bounds": [g_lo, g_hi],
            "delta_bounds": [d_lo, d_hi],
            "claimed_interval": [lo, 2 * hi],
            "sharp_values": [2 * lo, 2 * hi],
            "same_frame_bounds": bool(same),
            "claim_contained": bool(contained),
            "sharp_match": bool(sharp),
        },
    )


def check_canonical_dual(lam, E, samples=100, seed=0, tol=DEFAULT_TOL):
    """Dual bounds are ``(1/B, 1/A)``, reconstruction is exact, and the dual of the dual is the primal."""
    lo, hi = _require_frame(lam, E, tol, "check_canonical_dual")
    pair = canonical_dual(lam, E, tol)
    d_lo, d_hi = bounds_of(pair.dual_frame_operator)
    rel = max(abs(d_lo - 1 / hi) * hi, abs(d_hi - 1 / lo) * lo)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        f = rng.standard_normal((lam.d, 1)) + 1j * rng.standard_normal((lam.d, 1))
        worst = max(worst, fro(reconstruct(lam, E, f, tol) - f) / fro(f))
    dod = dual_of_dual_check(pair, E, tol)
    passed = rel <= tol.bound and worst <= tol.recon and dod.passed
    return CheckReport(
        "check_canonical_dual",
        bool(passed),
        True,
        "",
        {
            "primal_bounds": [lo, hi],
            "dual_bounds": [d_lo, d_hi],
            "expected_dual_bounds": [1 / hi, 1 / lo],
            "dual_bound_relative_error": rel,
            "reconstruction_residual": worst,
            **dod.details,
        },
    )
