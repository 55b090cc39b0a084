"""Scenario files (input) and report files (output).

Both are JSON.  Complex numbers are written as ``[re, im]`` pairs; plain
real numbers are accepted wherever a complex scalar is expected.  Unknown
keys are an error, never ignored, so a typo cannot silently disable a
check.  Reports are serialized with sorted keys and 17 significant digits
so identical inputs give byte-identical files.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ScenarioError
from .generators import GENERATOR_KINDS
from .model import KINDS

SCHEMA_VERSION = 1

CHECK_NAMES = (
    "check_perturbation",
    "check_perturbation_simple",
    "check_um_family",
    "check_composition_selfadjoint",
    "check_inv_sqrt_parseval",
    "check_closed_range",
    "check_sum_bessel",
    "check_sum_frame_combos",
    "check_example22",
    "check_example23",
    "check_canonical_dual",
)

TOLERANCE_KEYS = ("eig", "herm", "pd", "solve", "frame", "orth", "recon", "bound")


@dataclass
class ScenarioFile:
    dimension_d: int
    term_count_N: int
    generator: dict
    transform: dict
    checks: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    description: str = ""
    schema_version: int = SCHEMA_VERSION

    def as_dict(self):
        out = {
            "schema_version": self.schema_version,
            "dimension_d": self.dimension_d,
            "term_count_N": self.term_count_N,
            "seed": self.seed,
            "generator": self.generator,
            "transform": self.transform,
            "checks": self.checks,
            "tolerances": self.tolerances,
        }
        if self.description:
            out["description"] = self.description
        return out


# -- primitive validators -----------------------------------------------------
# Each takes (value, path) and returns the normalized value or raises ScenarioError.


def _int(lo=None):
    def check(v, path):
        if isinstance(v, bool) or not isinstance(v, int):
            raise ScenarioError(f"expected an integer, got {v!r}", path)
        if lo is not None and v < lo:
            raise ScenarioError(f"must be >= {lo}, got {v}", path)
        return v

    return check


def _real(lo=None, hi=None, lo_open=False, hi_open=False):
    def check(v, path):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ScenarioError(f"expected a number, got {v!r}", path)
        v = float(v)
        if not math.isfinite(v):
            raise ScenarioError("must be finite", path)
        if lo is not None and (v < lo or (lo_open and v == lo)):
            raise ScenarioError(f"must be {'>' if lo_open else '>='} {lo}, got {v}", path)
        if hi is not None and (v > hi or (hi_open and v == hi)):
            raise ScenarioError(f"must be {'<' if hi_open else '<='} {hi}, got {v}", path)
        return v

    return check


def _bool(v, path):
    if not isinstance(v, bool):
        raise ScenarioError(f"expected true/false, got {v!r}", path)
    return v


def _str(v, path):
    if not isinstance(v, str):
        raise ScenarioError(f"expected a string, got {v!r}", path)
    return v


def _choice(*options):
    def check(v, path):
        if v not in options:
            raise ScenarioError(f"must be one of {list(options)}, got {v!r}", path)
        return v

    return check


def _complex(v, path):
    if isinstance(v, list):
        if len(v) != 2:
            raise ScenarioError("complex numbers are [re, im] pairs", path)
        return [_real()(v[0], f"{path}[0]"), _real()(v[1], f"{path}[1]")]
    return _real()(v, path)


def _matrix(rows=None, cols=None):
    def check(v, path):
        if not isinstance(v, list) or not v or not all(isinstance(r, list) for r in v):
            raise ScenarioError("expected a non-empty list of rows", path)
        width = len(v[0])
        if width == 0:
            raise ScenarioError("rows must be non-empty", path)
        out = []
        for i, row in enumerate(v):
            if len(row) != width:
                raise ScenarioError(f"row {i} has {len(row)} entries, expected {width}", path)
            out.append([_complex(x, f"{path}[{i}][{j}]") for j, x in enumerate(row)])
        if rows is not None and len(out) != rows:
            raise ScenarioError(f"expected {rows} rows, got {len(out)}", path)
        if cols is not None and width != cols:
            raise ScenarioError(f"expected {cols} columns, got {width}", path)
        return out

    return check


def _list_of(item, length=None):
    def check(v, path):
        if not isinstance(v, list):
            raise ScenarioError("expected a list", path)
        if length is not None and len(v) != length:
            raise ScenarioError(f"expected {length} entries, got {len(v)}", path)
        return [item(x, f"{path}[{i}]") for i, x in enumerate(v)]

    return check


def _object(v, path, required, optional=None):
    optional = optional or {}
    if not isinstance(v, dict):
        raise ScenarioError("expected an object", path)
    for key in v:
        if key not in required and key not in optional:
            raise ScenarioError(f"unknown key {key!r}", f"{path}.{key}")
    out = {}
    for key, check in required.items():
        if key not in v:
            raise ScenarioError("missing required key", f"{path}.{key}")
        out[key] = check(v[key], f"{path}.{key}")
    for key, check in optional.items():
        if key in v:
            out[key] = check(v[key], f"{path}.{key}")
    return out


def to_complex(x):
    return complex(x[0], x[1]) if isinstance(x, list) else complex(x)


def to_array(m):
    return np.array([[to_complex(x) for x in row] for row in m], dtype=np.complex128)


# -- structured pieces ----------------------------------------------------------


def _generator(d, n):
    def check(v, path):
        if not isinstance(v, dict):
            raise ScenarioError("expected an object", path)
        kind = _choice(*GENERATOR_KINDS)(v.get("kind"), f"{path}.kind")
        opt = {"seed": _int(0)}
        if kind == "random_frame_functionals":
            opt["condition_target"] = _real(1.0)
        elif kind == "interleaved_zeros":
            opt["condition_target"] = _real(1.0)
            opt["base"] = _choice("standard_basis_functionals", "random_frame_functionals")
        elif kind == "random_operator_sequence":
            opt["codomain_dims"] = _list_of(_int(1), n)
            opt["scale"] = _real(0.0, lo_open=True)
        elif kind == "explicit":
            opt["operators"] = _list_of(_matrix(cols=d), n)
        out = _object(v, path, {"kind": _str}, opt)
        if kind == "explicit" and "operators" not in out:
            raise ScenarioError("missing required key", f"{path}.operators")
        if kind == "standard_basis_functionals" and n != d:
            raise ScenarioError(f"standard basis needs term_count_N = dimension_d ({d}), got {n}", path)
        if kind == "interleaved_zeros":
            if n % 2:
                raise ScenarioError("interleaved sequences need an even term_count_N", path)
            if out.get("base", "random_frame_functionals") == "standard_basis_functionals" and n // 2 != d:
                raise ScenarioError("interleaved standard basis needs term_count_N = 2 * dimension_d", path)
        if kind in ("random_frame_functionals", "interleaved_zeros"):
            base_count = n // 2 if kind == "interleaved_zeros" else n
            if base_count < d:
                raise ScenarioError(f"a random frame needs at least {d} base vectors, got {base_count}", path)
        return out

    return check


def _transform(n):
    def check(v, path):
        if not isinstance(v, dict):
            raise ScenarioError("expected an object", path)
        kind = _choice(*KINDS)(v.get("kind"), f"{path}.kind")
        opt = {}
        if kind == "banded":
            opt["bands"] = _bands(n)
        elif kind == "dense":
            opt["entries"] = _matrix(n, n)
            opt["random_spread"] = _real(0.0)
            opt["seed"] = _int(0)
        out = _object(v, path, {"kind": _str}, opt)
        if kind == "banded" and "bands" not in out:
            raise ScenarioError("missing required key", f"{path}.bands")
        if kind == "dense" and ("entries" in out) == ("random_spread" in out):
            raise ScenarioError("dense transforms need exactly one of 'entries' or 'random_spread'", path)
        return out

    return check


def _bands(n):
    def check(v, path):
        if not isinstance(v, dict) or not v:
            raise ScenarioError("expected a non-empty object mapping offsets to values", path)
        out = {}
        for key, value in v.items():
            try:
                offset = int(key)
            except ValueError:
                raise ScenarioError(f"band offsets are integers, got {key!r}", f"{path}.{key}") from None
            if abs(offset) >= n:
                raise ScenarioError(f"offset {offset} does not fit N={n}", f"{path}.{key}")
            out[str(offset)] = _complex(value, f"{path}.{key}")
        return out

    return check


def _matrix_spec(d):
    def check(v, path):
        if isinstance(v, list):
            return {"kind": "explicit", "entries": _matrix(d, d)(v, path)}
        if not isinstance(v, dict):
            raise ScenarioError("expected a matrix or an object", path)
        kind = _choice("explicit", "identity", "scalar", "diagonal", "random_hermitian", "random_hpd")(
            v.get("kind"), f"{path}.kind"
        )
        opt = {
            "explicit": {"entries": _matrix(d, d)},
            "identity": {},
            "scalar": {"value": _complex},
            "diagonal": {"values": _list_of(_complex, d)},
            "random_hermitian": {"norm": _real(0.0), "seed": _int(0)},
            "random_hpd": {"condition_target": _real(1.0), "seed": _int(0)},
        }[kind]
        out = _object(v, path, {"kind": _str}, opt)
        needed = {"explicit": "entries", "scalar": "value", "diagonal": "values"}.get(kind)
        if needed and needed not in out:
            raise ScenarioError("missing required key", f"{path}.{needed}")
        return out

    return check


def _weights(n):
    def check(v, path):
        if isinstance(v, list):
            return {"values": _list_of(_complex, n)(v, path)}
        out = _object(
            v,
            path,
            {},
            {
                "values": _list_of(_complex, n),
                "lo": _real(0.0, lo_open=True),
                "hi": _real(0.0, lo_open=True),
                "seed": _int(0),
                "complex_phase": _bool,
            },
        )
        if "values" in out and ("lo" in out or "hi" in out):
            raise ScenarioError("give either 'values' or 'lo'/'hi', not both", path)
        if ("lo" in out) != ("hi" in out):
            raise ScenarioError("'lo' and 'hi' go together", path)
        if "lo" in out and out["lo"] > out["hi"]:
            raise ScenarioError("need lo <= hi", path)
        return out

    return check


def _sequence_spec(d, n):
    def check(v, path):
        if not isinstance(v, dict):
            raise ScenarioError("expected an object", path)
        kind = _choice("same", "scaled", "noise", "zero", "random", "explicit")(v.get("kind"), f"{path}.kind")
        opt = {
            "same": {},
            "scaled": {"factor": _complex},
            "noise": {"scale": _real(0.0), "seed": _int(0)},
            "zero": {},
            "random": {"codomain_dims": _list_of(_int(1), n), "scale": _real(0.0), "seed": _int(0)},
            "explicit": {"operators": _list_of(_matrix(cols=d), n)},
        }[kind]
        out = _object(v, path, {"kind": _str}, opt)
        if kind == "scaled" and "factor" not in out:
            raise ScenarioError("missing required key", f"{path}.factor")
        if kind == "explicit" and "operators" not in out:
            raise ScenarioError("missing required key", f"{path}.operators")
        return out

    return check


def _pair_spec(v, path):
    return _object(
        v,
        path,
        {"p1": _int(1), "p2": _int(1)},
        {"rotate": _bool, "seed": _int(0)},
    )


def _check(d, n):
    seq = _sequence_spec(d, n)
    mat = _matrix_spec(d)
    wts = _weights(n)
    alpha = _real(0.0, 0.5, hi_open=True)
    common = {"name": _str, "description": _str}
    params = {
        "check_perturbation": {
            "gamma": seq, "a": wts, "b": wts, "alpha": alpha, "beta": alpha, "assert_conclusion": _bool,
        },
        "check_perturbation_simple": {"gamma": seq, "alpha": alpha, "assert_conclusion": _bool},
        "check_um_family": {"U": mat, "m_max": _int(1), "side": _choice("right", "left")},
        "check_composition_selfadjoint": {"U": mat, "m_max": _int(0)},
        "check_inv_sqrt_parseval": {},
        "check_closed_range": {"U": mat, "primary_is": _choice("lambda", "lambda_u")},
        "check_sum_bessel": {"gamma": seq, "pair": _pair_spec, "U1": mat, "U2": mat},
        "check_sum_frame_combos": {"gamma": seq, "pair": _pair_spec, "a": wts, "b": wts},
        "check_example22": {},
        "check_example23": {},
        "check_canonical_dual": {"samples": _int(1), "seed": _int(0)},
    }
    required = {
        "check_perturbation": ("gamma", "alpha"),
        "check_perturbation_simple": ("gamma", "alpha"),
        "check_um_family": ("U",),
        "check_composition_selfadjoint": ("U",),
        "check_closed_range": ("U",),
        "check_sum_bessel": ("U1", "U2"),
    }

    def check(v, path):
        if not isinstance(v, dict):
            raise ScenarioError("expected an object", path)
        name = _choice(*CHECK_NAMES)(v.get("name"), f"{path}.name")
        out = _object(v, path, {"name": _str}, {**common, **params[name]})
        for key in required.get(name, ()):
            if key not in out:
                raise ScenarioError("missing required key", f"{path}.{key}")
        if name in ("check_sum_bessel", "check_sum_frame_combos") and "gamma" in out and "pair" in out:
            raise ScenarioError("give either 'gamma' or 'pair', not both", path)
        return out

    return check


def validate_scenario(obj):
    """Validate a decoded JSON object and return a :class:`ScenarioFile`."""
    if not isinstance(obj, dict):
        raise ScenarioError("a scenario is a JSON object")
    if "schema_version" not in obj:
        raise ScenarioError("missing required key", "$.schema_version")
    version = _int()(obj["schema_version"], "$.schema_version")
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"unsupported schema_version {version}, expected {SCHEMA_VERSION}", "$.schema_version")
    head = _object(
        {k: obj[k] for k in ("dimension_d", "term_count_N") if k in obj},
        "$",
        {"dimension_d": _int(1), "term_count_N": _int(1)},
    )
    d, n = head["dimension_d"], head["term_count_N"]
    body = _object(
        obj,
        "$",
        {
            "schema_version": _int(),
            "dimension_d": _int(1),
            "term_count_N": _int(1),
            "generator": _generator(d, n),
            "transform": _transform(n),
        },
        {
            "checks": _list_of(_check(d, n)),
            "tolerances": lambda v, p: _object(v, p, {}, {k: _real(0.0, lo_open=True) for k in TOLERANCE_KEYS}),
            "seed": _int(0),
            "description": _str,
        },
    )
    return ScenarioFile(
        dimension_d=d,
        term_count_N=n,
        generator=body["generator"],
        transform=body["transform"],
        checks=body.get("checks", []),
        tolerances=body.get("tolerances", {}),
        seed=body.get("seed", 0),
        description=body.get("description", ""),
    )


def parse_scenario(text):
    """Parse scenario JSON text; errors carry the path of the offending key."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None
    return validate_scenario(obj)


# -- deterministic serialization --------------------------------------------------


def _format_float(x):
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def jsonable(obj):
    """Convert numpy arrays/scalars and complex numbers into plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if hasattr(obj, "as_dict"):
        return jsonable(obj.as_dict())
    return obj


def dumps(obj, indent=0):
    """Sorted-key JSON with floats written to 17 significant digits."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dumps(obj[k], indent + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(x, (dict, list)) for x in obj) or all(
            isinstance(x, list) and all(not isinstance(y, (dict, list)) for y in x) for x in obj
        ):
            return "[" + ", ".join(dumps(x, indent + 1) for x in obj) + "]"
        return "[\n" + ",\n".join(f"{inner}{dumps(x, indent + 1)}" for x in obj) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_scenario(sc):
    return dumps(jsonable(sc.as_dict())) + "\n"


def emit_report(report):
    """Serialize a report dict (see :func:`egframes.runner.run_scenario`)."""
    return dumps(jsonable(report)) + "\n"
