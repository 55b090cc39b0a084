import copy
import json
import pathlib

import numpy as np
import pytest

from egframes.errors import ScenarioError
from egframes.runner import run_scenario
from egframes.scenario import dumps, emit_report, emit_scenario, parse_scenario, to_array, to_complex

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "docs" / "fixtures"

MINIMAL = {
    "schema_version": 1,
    "dimension_d": 2,
    "term_count_N": 2,
    "generator": {"kind": "standard_basis_functionals"},
    "transform": {"kind": "delta"},
}


def scenario(**extra):
    obj = copy.deepcopy(MINIMAL)
    obj.update(extra)
    return json.dumps(obj)


def test_minimal_scenario_bounds():
    report = run_scenario(parse_scenario(scenario()))
    fr = report["frame_report"]
    assert fr["lower_opt"] == pytest.approx((3 - np.sqrt(5)) / 2, abs=1e-12)
    assert fr["upper_opt"] == pytest.approx((3 + np.sqrt(5)) / 2, abs=1e-12)
    assert report["checks"] == [] and report["overall_pass"]


def test_version_two_rejected():
    with pytest.raises(ScenarioError) as info:
        parse_scenario(scenario(schema_version=2))
    assert info.value.path == "$.schema_version"


def test_complex_pair_is_imaginary_unit():
    assert to_complex([0, 1]) == 1j
    sc = parse_scenario(
        scenario(
            dimension_d=1,
            term_count_N=1,
            generator={"kind": "explicit", "operators": [[[[0, 1]]]]},
            transform={"kind": "identity"},
        )
    )
    assert to_array(sc.generator["operators"][0])[0, 0] == 1j


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda o: o.update(colour=1), "$.colour"),
        (lambda o: o["generator"].update(sede=1), "$.generator.sede"),
        (lambda o: o["transform"].update(kind="toeplitz"), "$.transform.kind"),
        (lambda o: o.update(checks=[{"name": "check_inv_sqrt_parseval", "alpha": 0.1}]), "$.checks[0].alpha"),
        (lambda o: o.update(checks=[{"name": "check_nothing"}]), "$.checks[0].name"),
        (lambda o: o.update(tolerances={"eig": -1.0}), "$.tolerances.eig"),
        (lambda o: o.update(tolerances={"eigen": 1.0}), "$.tolerances.eigen"),
        (lambda o: o.pop("generator"), "$.generator"),
        (lambda o: o.update(dimension_d=0), "$.dimension_d"),
    ],
)
def test_invalid_input_names_the_key(mutate, path):
    obj = copy.deepcopy(MINIMAL)
    mutate(obj)
    with pytest.raises(ScenarioError) as info:
        parse_scenario(json.dumps(obj))
    assert info.value.path == path
    assert path in str(info.value)


def test_unknown_key_fuzz():
    rng = np.random.default_rng(0)
    text = (FIXTURES / "perturbation.json").read_text()
    base = json.loads(text)
    for _ in range(50):
        obj = copy.deepcopy(base)
        check = obj["checks"][int(rng.integers(len(obj["checks"])))]
        key = "x" + "".join(rng.choice(list("abcdefgh"), 5))
        check[key] = 1
        with pytest.raises(ScenarioError) as info:
            parse_scenario(json.dumps(obj))
        assert info.value.path.endswith("." + key)


def test_invalid_json():
    with pytest.raises(ScenarioError):
        parse_scenario("{not json")


@pytest.mark.parametrize("name", ["example22.json", "example23.json", "perturbation.json"])
def test_round_trip(name):
    sc = parse_scenario((FIXTURES / name).read_text())
    again = parse_scenario(emit_scenario(sc))
    assert again == sc
    assert emit_scenario(again) == emit_scenario(sc)


def test_reports_are_byte_identical():
    text = (FIXTURES / "perturbation.json").read_text()
    a = emit_report(run_scenario(parse_scenario(text)))
    b = emit_report(run_scenario(parse_scenario(text)))
    assert a == b


def test_seed_override_changes_and_is_echoed():
    text = (FIXTURES / "example22.json").read_text()
    report = run_scenario(parse_scenario(text), seed=5)
    assert report["scenario"]["seed"] == 5


def test_failed_check_means_overall_false():
    sc = parse_scenario(scenario(checks=[{"name": "check_inv_sqrt_parseval"}], tolerances={"bound": 1e-300}))
    report = run_scenario(sc)
    assert not report["checks"][0]["passed"]
    assert not report["overall_pass"]


def test_float_formatting():
    assert dumps(1.0) == "1.0"
    assert dumps(0.1) == "0.10000000000000001"
    assert dumps(float("nan")) == '"nan"'
    assert dumps({"b": [1, 2], "a": True}) == '{\n  "a": true,\n  "b": [1, 2]\n}'
