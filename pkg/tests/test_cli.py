import json
import pathlib
import re

import pytest

from egframes.cli import main

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "docs" / "fixtures"


def write(tmp_path, obj, name="s.json"):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def basic(**extra):
    obj = {
        "schema_version": 1,
        "dimension_d": 2,
        "term_count_N": 2,
        "generator": {"kind": "standard_basis_functionals"},
        "transform": {"kind": "delta"},
    }
    obj.update(extra)
    return obj


@pytest.mark.parametrize("name", ["example22.json", "example23.json", "perturbation.json"])
def test_fixtures_pass(name, capsys):
    assert main(["analyze", str(FIXTURES / name)]) == 0
    assert "overall        : PASS" in capsys.readouterr().out


def test_example22_summary_line(capsys):
    main(["analyze", str(FIXTURES / "example22.json")])
    assert re.search(r"Delta-Bessel upper [0-9.]+ <= 4B = [0-9.]+", capsys.readouterr().out)


def test_malformed_file(tmp_path, capsys):
    assert main(["analyze", write(tmp_path, "{oops")]) == 2
    assert "invalid JSON" in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert main(["analyze", str(tmp_path / "absent.json")]) == 2


def test_unknown_key_exit_and_path(tmp_path, capsys):
    assert main(["analyze", write(tmp_path, basic(extra=1))]) == 2
    assert "$.extra" in capsys.readouterr().err


def test_failed_check_exit_one(tmp_path):
    path = write(tmp_path, basic(checks=[{"name": "check_inv_sqrt_parseval"}], tolerances={"bound": 1e-300}))
    assert main(["analyze", path]) == 1


def test_precondition_exit_three(tmp_path):
    obj = basic(
        generator={"kind": "explicit", "operators": [[[1, 0]], [[0, 0]]]},
        transform={"kind": "identity"},
        checks=[{"name": "check_canonical_dual"}],
    )
    assert main(["analyze", write(tmp_path, obj)]) == 3


def test_skipped_hypothesis_is_sound(tmp_path, capsys):
    obj = basic(
        dimension_d=4,
        term_count_N=8,
        generator={"kind": "random_frame_functionals", "condition_target": 2.0},
        checks=[
            {
                "name": "check_perturbation",
                "gamma": {"kind": "random", "scale": 5.0, "seed": 1},
                "alpha": 0.49,
                "beta": 0.49,
                "assert_conclusion": True,
            }
        ],
    )
    assert main(["analyze", write(tmp_path, obj)]) == 0
    assert "hypothesis not met, conclusion skipped" in capsys.readouterr().out


def test_report_file_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    fixture = str(FIXTURES / "perturbation.json")
    assert main(["analyze", fixture, "--report", str(a)]) == 0
    assert main(["analyze", fixture, "--report", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_json_summary(capsys):
    main(["analyze", str(FIXTURES / "example23.json"), "--json"])
    out = json.loads(capsys.readouterr().out)
    assert out["overall_pass"] is True
    assert {c["status"] for c in out["checks"]} == {"pass"}


@pytest.mark.parametrize("name", ["example22", "example23", "perturb", "dual", "parseval_sqrt"])
def test_demos(name, capsys):
    assert main(["demo", name]) == 0
    assert "result: PASS" in capsys.readouterr().out


def test_demo_texts(capsys):
    main(["demo", "example23"])
    out = capsys.readouterr().out
    assert "[A, 2B]" in out and "(2A, 2B)" in out
    main(["demo", "dual"])
    assert "(1/B, 1/A)" in capsys.readouterr().out


def test_unknown_demo():
    with pytest.raises(SystemExit) as info:
        main(["demo", "nope"])
    assert info.value.code == 2


def test_selftest_default_passes(capsys):
    assert main(["selftest", "--trials", "30"]) == 0
    assert "0 failures" in capsys.readouterr().out


def test_selftest_tight_tolerance_reports_seed_and_replays(capsys):
    assert main(["selftest", "--trials", "3", "--tol-scale", "1e-8"]) == 1
    out = capsys.readouterr().out
    seed = int(re.search(r"FAIL \S+ seed=(\d+)", out).group(1))
    assert main(["selftest", "--trials", "1", "--seed", str(seed), "--tol-scale", "1e-8"]) == 1
    assert f"seed={seed}" in capsys.readouterr().out


def test_nonpositive_tol_scale(tmp_path):
    assert main(["analyze", write(tmp_path, basic()), "--tol-scale", "0"]) == 2
