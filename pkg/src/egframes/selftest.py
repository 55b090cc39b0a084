"""Randomized property sweep behind ``egframes selftest``.

Trial ``i`` uses seed ``base_seed + i`` for everything, so a failing seed
can be replayed alone with ``--seed <s> --trials 1``.
"""

import time

import numpy as np

from . import theorems
from .errors import EGFrameError
from .frames import (
    analysis,
    bounds_of,
    canonical_dual,
    frame_operator,
    reconstruct,
    synthesis,
)
from .generators import (
    gen_block_orthogonal_pair,
    gen_random_hermitian,
    gen_random_hpd,
    gen_random_invertible,
    gen_random_operator_sequence,
    gen_weights,
)
from .model import StackedVector
from .numerics import DEFAULT_TOL, fro, hermiticity_residual
from .transform import make_delta, make_dense, make_identity


def _random_case(rng):
    d = int(rng.choice([2, 3, 4]))
    n = int(rng.choice([d, 2 * d]))
    dims = rng.integers(1, d + 1, n).tolist()
    seq = gen_random_operator_sequence(d, dims, rng)
    kind = rng.choice(["identity", "delta", "dense"])
    if kind == "identity":
        E = make_identity(n)
    elif kind == "delta":
        E = make_delta(n)
    else:
        E = make_dense(gen_random_invertible(n, rng))
    return seq, E


def _cvec(rng, d):
    return rng.standard_normal((d, 1)) + 1j * rng.standard_normal((d, 1))


def run_trial(seed, tol):
    """Yield ``(property, ok, value)`` for one seeded random case."""
    rng = np.random.default_rng(seed)
    seq, E = _random_case(rng)
    s = frame_operator(seq, E)
    lo, hi = bounds_of(s)
    yield "hermiticity", hermiticity_residual(s) <= tol.eig, hermiticity_residual(s)

    worst = 0.0
    for _ in range(20):
        f = _cvec(rng, seq.d)
        q = float(np.sum(np.abs(analysis(seq, E, f).blocks) ** 2))
        nf = fro(f) ** 2
        worst = max(worst, (lo * nf - q) / (hi * nf), (q - hi * nf) / (hi * nf))
    yield "bracketing", worst <= tol.eig, worst

    f = _cvec(rng, seq.d)
    v = StackedVector(rng.standard_normal((seq.N, seq.p)) + 1j * rng.standard_normal((seq.N, seq.p)))
    lhs = complex(np.vdot(f, synthesis(seq, E, v)))
    rhs = v.inner(analysis(seq, E, f))
    gap = abs(lhs - rhs) / (fro(f) * fro(v.blocks))
    yield "adjointness", gap <= tol.eig, gap

    if lo > tol.frame * hi:
        pair = canonical_dual(seq, E, tol)
        d_lo, d_hi = bounds_of(pair.dual_frame_operator)
        err = max(abs(d_lo * hi - 1), abs(d_hi * lo - 1))
        yield "dual_bounds", err <= tol.bound, err
        g = _cvec(rng, seq.d)
        r = fro(reconstruct(seq, E, g, tol) - g) / fro(g)
        yield "reconstruction", r <= tol.recon, r

        eps = float(rng.uniform(0.01, 0.3))
        w = gen_weights(seq.N, 0.5, 2.0, rng)
        v = theorems.check_perturbation(seq, seq.scaled(1 + eps), E, w, w, eps**2, 0.0, tol)
        yield "perturbation", v.hypothesis_holds and v.contained, v.hypothesis_margin

        p = theorems.check_inv_sqrt_parseval(seq, E, tol)
        yield "inv_sqrt_parseval", p.passed, p.details["identity_residual"]

        c = theorems.check_composition_selfadjoint(seq, E, gen_random_hpd(seq.d, rng, 5.0), 2, tol)
        yield "composition", c.passed, c.details["forward_predicted_lower"]

        steps = theorems.check_um_family(seq, E, gen_random_hermitian(seq.d, rng, 0.6), 2, "right", tol)
        yield "um_family", all(s.passed for s in steps), steps[-1].alpha

    lam, gam = gen_block_orthogonal_pair(seq.d, seq.N, 2, 1, rng, rotate=True)
    b = theorems.check_sum_bessel(lam, gam, E, gen_random_hermitian(seq.d, rng), np.eye(seq.d), tol)
    yield "sum_bessel", b.passed and b.hypothesis_holds, b.details["upper_sum"]


def run(base_seed=0, trials=200, tol=DEFAULT_TOL, budget_s=60.0, echo=print):
    """Run up to ``trials`` cases within ``budget_s``; return the failing ``(seed, property, value)``."""
    failures = []
    start = time.perf_counter()
    done = 0
    for i in range(trials):
        if time.perf_counter() - start > budget_s:
            echo(f"time budget reached after {done} trials")
            break
        seed = base_seed + i
        try:
            for name, ok, value in run_trial(seed, tol):
                if not ok:
                    failures.append((seed, name, value))
                    echo(f"FAIL {name} seed={seed} value={value!r}")
        except EGFrameError as exc:
            # a tolerance tight enough to break a solve ends the trial
            failures.append((seed, type(exc).__name__, str(exc)))
            echo(f"FAIL {type(exc).__name__} seed={seed} value={str(exc)!r}")
        done += 1
    echo(f"{done} trials, {len(failures)} failures")
    return failures
