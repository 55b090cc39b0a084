"""Command line front end.

Exit status: 0 all checks passed, 1 a check or self-test property failed,
2 the input was invalid, 3 a numerical precondition failed.
"""

import argparse
import json
import sys

from . import selftest
from .demos import DEMOS, claim_lines, demo_scenario
from .errors import EGFrameError, PreconditionError, ScenarioError, SingularityError
from .numerics import DEFAULT_TOL
from .runner import run_scenario
from .scenario import dumps, emit_report, jsonable, parse_scenario

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_PRECONDITION = 0, 1, 2, 3


def _status(c):
    if "error" in c:
        return "ERROR"
    if not c["passed"]:
        return "FAIL"
    return "pass" if c["hypothesis_holds"] else "skip"


def _check_line(c):
    det = c["details"]
    name = c["name"]
    if "error" in c:
        return c["error"]["message"]
    if name in ("check_perturbation", "check_perturbation_simple"):
        return (
            f"margin {det['hypothesis_margin']:.3e}; predicted [{det['predicted_lower']:.6g}, "
            f"{det['predicted_upper']:.6g}] measured ({det['measured_lower']:.6g}, {det['measured_upper']:.6g})"
        )
    if name == "check_um_family":
        return "; ".join(
            f"m={s['m']} alpha={s['alpha']:.3g} hyp={'y' if s['verdict']['hypothesis_holds'] else 'n'} {s['classification']}"
            for s in det["steps"]
        )
    if name == "check_example22":
        return f"Delta-Bessel upper {det['delta_bounds'][1]:.10g} <= 4B = {det['predicted_upper']:.10g}"
    if name == "check_example23":
        lo, hi = det["claimed_interval"]
        return (
            f"Delta bounds ({det['delta_bounds'][0]:.10g}, {det['delta_bounds'][1]:.10g}) in "
            f"[A, 2B] = [{lo:.10g}, {hi:.10g}]; sharp (2A, 2B) match: {det['sharp_match']}"
        )
    if name == "check_canonical_dual":
        return (
            f"dual bounds ({det['dual_bounds'][0]:.6g}, {det['dual_bounds'][1]:.6g}) vs (1/B, 1/A) = "
            f"({det['expected_dual_bounds'][0]:.6g}, {det['expected_dual_bounds'][1]:.6g}); "
            f"recon {det['reconstruction_residual']:.2e}"
        )
    scalars = [f"{k}={v:.4g}" for k, v in sorted(det.items()) if isinstance(v, float)]
    return ", ".join(scalars[:4])


def summary_lines(report):
    fr = report["frame_report"]
    lines = [
        f"classification : {fr['classification']}",
        f"optimal bounds : ({fr['lower_opt']:.10g}, {fr['upper_opt']:.10g})",
    ]
    for c in report["checks"]:
        msg = f"  [{c['message']}]" if c["message"] else ""
        lines.append(f"{_status(c):5s} {c['name']}: {_check_line(c)}{msg}")
    lines.append(f"overall        : {'PASS' if report['overall_pass'] else 'FAIL'}")
    return lines


def _exit_code(report):
    if report["precondition_failure"]:
        return EXIT_PRECONDITION
    return EXIT_OK if report["overall_pass"] else EXIT_FAIL


def _machine_summary(report):
    return {
        "overall_pass": report["overall_pass"],
        "classification": report["frame_report"]["classification"],
        "bounds": [report["frame_report"]["lower_opt"], report["frame_report"]["upper_opt"]],
        "checks": [{"name": c["name"], "status": _status(c)} for c in report["checks"]],
    }


def cmd_analyze(args):
    try:
        with open(args.scenario, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.scenario}: {exc.strerror}", file=sys.stderr)
        return EXIT_INVALID
    try:
        sc = parse_scenario(text)
        report = run_scenario(sc, args.tol_scale, args.seed, args.timings)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (PreconditionError, SingularityError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except EGFrameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(emit_report(report))
    if args.json:
        print(dumps(jsonable(_machine_summary(report))))
    else:
        print("\n".join(summary_lines(report)))
    return _exit_code(report)


def cmd_demo(args):
    sc = demo_scenario(args.name)
    report = run_scenario(sc, args.tol_scale, args.seed)
    if args.json:
        print(dumps(jsonable(_machine_summary(report))))
    else:
        print(f"demo {args.name}: {sc.description}")
        print("\n".join(claim_lines(args.name, report)))
        print(f"result: {'PASS' if report['overall_pass'] else 'FAIL'}")
    return _exit_code(report)


def cmd_selftest(args):
    tol = DEFAULT_TOL.scaled(args.tol_scale)
    echo = (lambda *_: None) if args.json else print
    failures = selftest.run(args.seed or 0, args.trials, tol, args.budget, echo)
    if args.json:
        print(json.dumps({"failures": [{"seed": s, "property": p} for s, p, _ in failures]}, sort_keys=True))
    return EXIT_FAIL if failures else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="egframes", description="Verify E-g-frame constructions numerically.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        p.add_argument("--tol-scale", type=float, default=1.0, help="multiply every default tolerance")
        p.add_argument("--json", action="store_true", help="print a machine-readable summary")

    p = sub.add_parser("analyze", help="run a scenario file")
    p.add_argument("scenario")
    p.add_argument("--report", help="write the full report to this path")
    p.add_argument("--timings", action="store_true", help="record wall time per check (breaks byte-identity)")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("demo", help="run a built-in scenario")
    p.add_argument("name", choices=sorted(DEMOS))
    common(p)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("selftest", help="randomized property sweep")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--budget", type=float, default=60.0, help="time budget in seconds")
    common(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.tol_scale <= 0:
        print("error: --tol-scale must be positive", file=sys.stderr)
        return EXIT_INVALID
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
