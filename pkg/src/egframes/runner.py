"""Evaluate a validated scenario: build the objects, compute the frame report, run the checks."""

import dataclasses
import time

import numpy as np

from . import theorems
from .errors import EGFrameError, PreconditionError, SingularityError
from .frames import frame_report
from .generators import (
    GeneratorSpec,
    build_sequence,
    build_vectors,
    gen_block_orthogonal_pair,
    gen_random_hermitian,
    gen_random_hpd,
    gen_random_invertible,
    gen_random_operator_sequence,
    gen_weights,
)
from .model import OperatorSequence, WeightSequence
from .numerics import DEFAULT_TOL
from .scenario import to_array, to_complex
from .transform import make_banded, make_delta, make_dense, make_identity


def _rng(seed, *salt):
    return np.random.default_rng([seed, *salt])


def build_transform(sc, seed):
    spec, n = sc.transform, sc.term_count_N
    kind = spec["kind"]
    if kind == "identity":
        return make_identity(n)
    if kind == "delta":
        return make_delta(n)
    if kind == "banded":
        return make_banded(n, {int(k): to_complex(v) for k, v in spec["bands"].items()})
    if "entries" in spec:
        return make_dense(to_array(spec["entries"]))
    return make_dense(gen_random_invertible(n, _rng(spec.get("seed", seed), 1), spec["random_spread"]))


def build_primary(sc, seed):
    """Primary sequence plus, for functional generators, the underlying (un-interleaved) vectors."""
    g = dict(sc.generator)
    kind = g.pop("kind")
    gseed = g.pop("seed", seed)
    if kind == "explicit":
        g["operators"] = [to_array(m) for m in g["operators"]]
    spec = GeneratorSpec(kind, sc.dimension_d, sc.term_count_N, gseed, g)
    base = None
    if kind == "interleaved_zeros":
        inner = dataclasses.replace(spec, kind=g.get("base", "random_frame_functionals"), term_count_N=sc.term_count_N // 2)
        base = build_vectors(inner)
    elif kind in ("standard_basis_functionals", "random_frame_functionals"):
        base = build_vectors(spec)
    return build_sequence(spec), base


def build_matrix(spec, d, rng):
    kind = spec["kind"]
    if kind == "explicit":
        return to_array(spec["entries"])
    if kind == "identity":
        return np.eye(d, dtype=np.complex128)
    if kind == "scalar":
        return to_complex(spec["value"]) * np.eye(d, dtype=np.complex128)
    if kind == "diagonal":
        return np.diag([to_complex(v) for v in spec["values"]])
    r = _rng(spec["seed"]) if "seed" in spec else rng
    if kind == "random_hermitian":
        return gen_random_hermitian(d, r, spec.get("norm"))
    return gen_random_hpd(d, r, spec.get("condition_target", 10.0))


def build_weights(spec, n, rng):
    if spec is None:
        return WeightSequence.ones(n)
    if "values" in spec:
        return WeightSequence([to_complex(v) for v in spec["values"]])
    r = _rng(spec["seed"]) if "seed" in spec else rng
    return gen_weights(n, spec["lo"], spec["hi"], r, spec.get("complex_phase", False))


def build_gamma(spec, lam, rng):
    kind = spec["kind"]
    if kind == "same":
        return lam
    if kind == "scaled":
        return lam.scaled(to_complex(spec["factor"]))
    if kind == "zero":
        return lam.with_operators(np.zeros_like(lam.operators))
    r = _rng(spec["seed"]) if "seed" in spec else rng
    if kind == "noise":
        noise = gen_random_operator_sequence(lam.d, lam.codomain_dims, r, spec["scale"])
        return lam.combine(noise)
    if kind == "random":
        dims = spec.get("codomain_dims", list(lam.codomain_dims))
        return gen_random_operator_sequence(lam.d, dims, r, spec.get("scale", 1.0))
    return OperatorSequence.from_blocks([to_array(m) for m in spec["operators"]])


def _pair_or_gamma(params, lam, rng):
    if "pair" in params:
        pr = params["pair"]
        r = _rng(pr["seed"]) if "seed" in pr else rng
        return gen_block_orthogonal_pair(lam.d, lam.N, pr["p1"], pr["p2"], r, pr.get("rotate", False))
    return lam, build_gamma(params.get("gamma", {"kind": "zero"}), lam, rng)


def _perturbation_result(name, verdict, assert_conclusion):
    if not verdict.hypothesis_holds:
        passed, message = True, "hypothesis not met, conclusion skipped"
    elif assert_conclusion:
        passed, message = verdict.contained, "" if verdict.contained else "predicted bounds violated"
    else:
        passed, message = True, "conclusion reported only"
    return {
        "name": name,
        "passed": bool(passed),
        "hypothesis_holds": verdict.hypothesis_holds,
        "message": message,
        "details": verdict.as_dict(),
    }


def run_check(params, lam, base, E, rng, tol):
    name = params["name"]
    d = lam.d
    if name == "check_perturbation":
        gam = build_gamma(params["gamma"], lam, rng)
        a = build_weights(params.get("a"), lam.N, rng)
        b = build_weights(params.get("b"), lam.N, rng)
        v = theorems.check_perturbation(lam, gam, E, a, b, params["alpha"], params.get("beta", 0.0), tol)
        return _perturbation_result(name, v, params.get("assert_conclusion", True))
    if name == "check_perturbation_simple":
        gam = build_gamma(params["gamma"], lam, rng)
        v = theorems.check_perturbation_simple(lam, gam, E, params["alpha"], tol)
        return _perturbation_result(name, v, params.get("assert_conclusion", True))
    if name == "check_um_family":
        u = build_matrix(params["U"], d, rng)
        steps = theorems.check_um_family(lam, E, u, params.get("m_max", 3), params.get("side", "right"), tol)
        return {
            "name": name,
            "passed": all(s.passed for s in steps),
            "hypothesis_holds": True,
            "message": "",
            "details": {"side": params.get("side", "right"), "steps": [s.as_dict() for s in steps]},
        }
    if name == "check_composition_selfadjoint":
        u = build_matrix(params["U"], d, rng)
        return theorems.check_composition_selfadjoint(lam, E, u, params.get("m_max", 3), tol).as_dict()
    if name == "check_inv_sqrt_parseval":
        return theorems.check_inv_sqrt_parseval(lam, E, tol).as_dict()
    if name == "check_closed_range":
        u = build_matrix(params["U"], d, rng)
        if params.get("primary_is", "lambda") == "lambda":
            return theorems.check_closed_range(lam.compose_right(u), E, u, lam, tol).as_dict()
        return theorems.check_closed_range(lam, E, u, None, tol).as_dict()
    if name == "check_sum_bessel":
        first, second = _pair_or_gamma(params, lam, rng)
        u1 = build_matrix(params["U1"], d, rng)
        u2 = build_matrix(params["U2"], d, rng)
        return theorems.check_sum_bessel(first, second, E, u1, u2, tol).as_dict()
    if name == "check_sum_frame_combos":
        first, second = _pair_or_gamma(params, lam, rng)
        a = build_weights(params.get("a"), lam.N, rng)
        b = build_weights(params.get("b"), lam.N, rng)
        return theorems.check_sum_frame_combos(first, second, E, a, b, tol).as_dict()
    if name in ("check_example22", "check_example23"):
        if base is None:
            raise PreconditionError(f"{name} needs a functional generator (standard basis, random frame or interleaved)")
        fn = theorems.check_example22 if name == "check_example22" else theorems.check_example23
        return fn(base, tol).as_dict()
    if name == "check_canonical_dual":
        seed = params.get("seed", int(rng.integers(2**31)))
        return theorems.check_canonical_dual(lam, E, params.get("samples", 100), seed, tol).as_dict()
    raise KeyError(name)


def run_scenario(sc, tol_scale=1.0, seed=None, timings=False):
    """Evaluate ``sc`` and return the report as a plain dict.

    Errors raised inside a check (failed numerical preconditions, singular
    operators) are recorded on that check, which then fails; the report's
    ``precondition_failure`` flag lets the CLI pick its exit status.
    """
    seed = sc.seed if seed is None else seed
    sc = dataclasses.replace(sc, seed=seed)
    tol = DEFAULT_TOL.scaled(tol_scale).updated(sc.tolerances)
    E = build_transform(sc, seed)
    lam, base = build_primary(sc, seed)
    fr = frame_report(lam, E, tol)

    checks = []
    precondition_failure = False
    for index, params in enumerate(sc.checks):
        rng = _rng(seed, 2, index)
        start = time.perf_counter()
        try:
            result = run_check(params, lam, base, E, rng, tol)
        except (PreconditionError, SingularityError) as exc:
            precondition_failure = True
            value = getattr(exc, "value", getattr(exc, "min_eigenvalue", None))
            result = {
                "name": params["name"],
                "passed": False,
                "hypothesis_holds": False,
                "message": "numerical precondition failed",
                "details": {},
                "error": {"type": type(exc).__name__, "message": str(exc), "value": value},
            }
        except EGFrameError as exc:
            result = {
                "name": params["name"],
                "passed": False,
                "hypothesis_holds": False,
                "message": "invalid check input",
                "details": {},
                "error": {"type": type(exc).__name__, "message": str(exc), "value": None},
            }
        if timings:
            result["wall_time_s"] = time.perf_counter() - start
        checks.append(result)

    return {
        "schema_version": 1,
        "scenario": sc.as_dict(),
        "tol_scale": float(tol_scale),
        "frame_report": {
            "classification": fr.classification,
            "lower_opt": fr.lower_opt,
            "upper_opt": fr.upper_opt,
            "hermiticity_residual": fr.hermiticity_residual,
            "frame_operator": fr.frame_operator,
            "transform_min_singular_value": E.min_singular_value(),
        },
        "checks": checks,
        "overall_pass": all(c["passed"] for c in checks),
        "precondition_failure": precondition_failure,
    }
