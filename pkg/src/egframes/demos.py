"""Built-in scenarios behind ``egframes demo``; each prints the claimed value next to the measured one."""

from .scenario import validate_scenario

DEMOS = {
    "example22": {
        "schema_version": 1,
        "description": "Functionals of a random frame, mixed by the difference matrix: Bessel bound 4B",
        "dimension_d": 4,
        "term_count_N": 8,
        "seed": 22,
        "generator": {"kind": "random_frame_functionals", "condition_target": 5.0},
        "transform": {"kind": "delta"},
        "checks": [{"name": "check_example22"}],
    },
    "example23": {
        "schema_version": 1,
        "description": "Random frame interleaved with zeros, mixed by the difference matrix: bounds in [A, 2B]",
        "dimension_d": 4,
        "term_count_N": 16,
        "seed": 23,
        "generator": {"kind": "interleaved_zeros", "condition_target": 5.0},
        "transform": {"kind": "delta"},
        "checks": [{"name": "check_example23"}],
    },
    "perturb": {
        "schema_version": 1,
        "description": "Gamma = 1.1 Lambda with alpha = 0.01, beta = 0 and equal weights in [1/2, 2]",
        "dimension_d": 4,
        "term_count_N": 8,
        "seed": 21,
        "generator": {"kind": "random_operator_sequence", "codomain_dims": [2, 2, 2, 2, 2, 2, 2, 2]},
        "transform": {"kind": "delta"},
        "checks": [
            {
                "name": "check_perturbation",
                "gamma": {"kind": "scaled", "factor": 1.1},
                "a": {"lo": 0.5, "hi": 2.0, "seed": 5},
                "b": {"lo": 0.5, "hi": 2.0, "seed": 5},
                "alpha": 0.01,
                "beta": 0.0,
            }
        ],
    },
    "dual": {
        "schema_version": 1,
        "description": "Canonical dual of a random frame: bounds (1/B, 1/A) and exact reconstruction",
        "dimension_d": 4,
        "term_count_N": 8,
        "seed": 7,
        "generator": {"kind": "random_frame_functionals", "condition_target": 8.0},
        "transform": {"kind": "delta"},
        "checks": [{"name": "check_canonical_dual", "samples": 100}],
    },
    "parseval_sqrt": {
        "schema_version": 1,
        "description": "{Lambda_n S^-1/2} is Parseval",
        "dimension_d": 4,
        "term_count_N": 8,
        "seed": 12,
        "generator": {"kind": "random_operator_sequence"},
        "transform": {"kind": "dense", "random_spread": 0.3},
        "checks": [{"name": "check_inv_sqrt_parseval"}],
    },
}


def demo_scenario(name):
    return validate_scenario(DEMOS[name])


def _fmt(x):
    return f"{x:.10g}"


def claim_lines(name, report):
    """Claimed-vs-measured lines for a demo report."""
    det = report["checks"][0]["details"]
    if name == "example22":
        a, b = det["frame_bounds"]
        return [
            f"frame bounds (A, B)          : ({_fmt(a)}, {_fmt(b)})",
            f"claimed Delta-Bessel bound 4B: {_fmt(det['predicted_upper'])}",
            f"measured Delta upper bound   : {_fmt(det['delta_bounds'][1])}",
        ]
    if name == "example23":
        lo, hi = det["claimed_interval"]
        s_lo, s_hi = det["sharp_values"]
        m_lo, m_hi = det["delta_bounds"]
        return [
            f"claimed Delta bounds [A, 2B]  : [{_fmt(lo)}, {_fmt(hi)}]",
            f"sharp Delta bounds (2A, 2B)   : ({_fmt(s_lo)}, {_fmt(s_hi)})",
            f"measured Delta bounds         : ({_fmt(m_lo)}, {_fmt(m_hi)})",
            f"inside claim / matches sharp  : {det['claim_contained']} / {det['sharp_match']}",
        ]
    if name == "perturb":
        return [
            f"hypothesis margin             : {det['hypothesis_margin']:.3e}",
            f"predicted Gamma bounds        : [{_fmt(det['predicted_lower'])}, {_fmt(det['predicted_upper'])}]",
            f"measured Gamma bounds         : ({_fmt(det['measured_lower'])}, {_fmt(det['measured_upper'])})",
        ]
    if name == "dual":
        e_lo, e_hi = det["expected_dual_bounds"]
        m_lo, m_hi = det["dual_bounds"]
        return [
            f"primal bounds (A, B)          : ({_fmt(det['primal_bounds'][0])}, {_fmt(det['primal_bounds'][1])})",
            f"claimed dual bounds (1/B, 1/A): ({_fmt(e_lo)}, {_fmt(e_hi)})",
            f"measured dual bounds          : ({_fmt(m_lo)}, {_fmt(m_hi)})",
            f"worst reconstruction residual : {det['reconstruction_residual']:.3e}",
        ]
    return [
        f"||S_Gamma - I||_F             : {det['identity_residual']:.3e}",
        f"Gamma bounds                  : ({_fmt(det['bounds'][0])}, {_fmt(det['bounds'][1])})",
        f"Gamma classification          : {det['classification']}",
    ]
