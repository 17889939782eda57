import json

import numpy as np
import pytest
import yaml

from riemsub.cli import main, run_scenario
from riemsub.scenario import (
    ScenarioValidationError,
    bundled_scenario_names,
    load_scenario,
    resolve_scenario_path,
)

MINIMAL = {
    "name": "mini",
    "source": {
        "dim": 4,
        "metric": "euclidean-r4",
        "domain": {"intervals": [[-2.0, 2.0]] * 4},
    },
    "target": {
        "dim": 3,
        "metric": "euclidean",
        "domain": {"intervals": [[-10.0, 10.0]] * 3},
    },
    "phi": "canonical-phi",
    "map": "map-example-i",
    "clairaut": {"f": "0"},
    "sampling": {"count": 10, "seed": 1},
}


def _write(tmp_path, doc, name="scenario.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(doc))
    return path


def test_bundled_scenarios_present():
    names = bundled_scenario_names()
    assert "example-i" in names
    assert "example-ii" in names


def test_load_bundled_example_ii():
    bundle = load_scenario(resolve_scenario_path("example-ii"))
    sc = bundle.scenario
    assert sc.name == "example-ii"
    assert sc.M.dim == 4
    assert sc.N.dim == 3
    assert len(bundle.geodesics) == 5
    assert sc.M.domain.tubes[0].radius == 0.1


def test_unknown_key_rejected(tmp_path):
    doc = dict(MINIMAL)
    doc["surprise"] = 1
    with pytest.raises(ScenarioValidationError) as err:
        load_scenario(_write(tmp_path, doc))
    assert "surprise" in str(err.value)


def test_nested_unknown_key_has_path(tmp_path):
    doc = yaml.safe_load(yaml.safe_dump(MINIMAL))
    doc["sampling"]["weird"] = True
    with pytest.raises(ScenarioValidationError) as err:
        load_scenario(_write(tmp_path, doc))
    assert "sampling.weird" in str(err.value)


def test_bad_expression_reports_field(tmp_path):
    doc = yaml.safe_load(yaml.safe_dump(MINIMAL))
    doc["clairaut"]["f"] = "ln(x1 +"
    with pytest.raises(ScenarioValidationError) as err:
        load_scenario(_write(tmp_path, doc))
    assert "clairaut.f" in str(err.value)


def test_missing_required_key(tmp_path):
    doc = yaml.safe_load(yaml.safe_dump(MINIMAL))
    del doc["map"]
    with pytest.raises(ScenarioValidationError) as err:
        load_scenario(_write(tmp_path, doc))
    assert "map" in str(err.value)


def test_explicit_matrix_metric(tmp_path):
    doc = yaml.safe_load(yaml.safe_dump(MINIMAL))
    doc["source"]["metric"] = [
        ["1", "0", "0", "0"],
        ["0", "1", "0", "0"],
        ["0", "0", "1", "0"],
        ["0", "0", "0", "1"],
    ]
    bundle = load_scenario(_write(tmp_path, doc))
    assert bundle.scenario.M.is_flat_constant


def test_run_scenario_mini_passes(tmp_path):
    report = run_scenario(_write(tmp_path, MINIMAL))
    assert report.overall == "pass"
    names = [c.name for c in report.checks]
    assert names[0] == "structure"
    assert "bishop-clairaut" in names


def test_cli_check_exit_codes(tmp_path, capsys):
    path = _write(tmp_path, MINIMAL)
    assert main(["check", str(path)]) == 0
    out = capsys.readouterr().out
    assert "overall: pass" in out

    bad = yaml.safe_load(yaml.safe_dump(MINIMAL))
    bad["clairaut"]["f"] = "x3"  # breaks nothing for example-i (T = 0, grad f != 0)
    bad["map"] = "map-example-ii"
    bad["source"]["domain"]["exclude"] = [
        {"expr": "sqrt(x1^2 + x2^2)", "radius": 0.1}
    ]
    bad_path = _write(tmp_path, bad, "bad.yaml")
    assert main(["check", str(bad_path)]) == 1

    assert main(["check", str(tmp_path / "missing.yaml")]) == 2


def test_cli_validation_error_message(tmp_path, capsys):
    doc = yaml.safe_load(yaml.safe_dump(MINIMAL))
    doc["sampling"]["count"] = "many"
    assert main(["check", str(_write(tmp_path, doc))]) == 2
    assert "sampling.count" in capsys.readouterr().err


def test_cli_machine_report_and_file(tmp_path, capsys):
    path = _write(tmp_path, MINIMAL)
    report_path = tmp_path / "report.json"
    code = main(["check", str(path), "--format", "machine", "--report", str(report_path)])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["overall"] == "pass"
    assert payload["checks"][0]["ref"] == "eq-ka1"
    assert json.loads(report_path.read_text()) == payload


def test_check_records_carry_ref_tags(tmp_path):
    report = run_scenario(_write(tmp_path, MINIMAL))
    refs = {c.name: c.ref for c in report.checks}
    assert refs["oneill-skew"] == "EQ2.14"
    assert refs["structure"] == "eq-ka1"
    assert refs["bishop-clairaut"] == "th-bis"


def test_cli_geodesic_writes_rows(tmp_path):
    out = tmp_path / "traj.csv"
    code = main(
        [
            "geodesic",
            "example-ii",
            "--p0",
            "1,0,0,0",
            "--v0",
            "0,1,0,0",
            "--length",
            "2.0",
            "--step",
            "0.001",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    header = lines[0].split(",")
    assert header == [
        "s", "x1", "x2", "x3", "x4", "v1", "v2", "v3", "v4", "sin_theta", "invariant",
    ]
    data = np.array([[float(c) for c in line.split(",")] for line in lines[1:]])
    assert len(data) == 2001
    assert abs(data[:, -1] - 1.0).max() < 1e-6  # invariant column constant 1
    assert abs(data[0, 1] - 1.0) < 1e-15


def test_cli_geodesic_horizontal_sin_theta_zero(tmp_path):
    out = tmp_path / "traj.csv"
    code = main(
        [
            "geodesic",
            "example-ii",
            "--p0",
            "1,0,0.5,0",
            "--v0",
            "0.7071067811865476,0,0.7071067811865476,0",
            "--length",
            "1.0",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    data = np.array([[float(c) for c in line.split(",")] for line in lines[1:]])
    assert abs(data[:, -2]).max() < 1e-10


def test_cli_geodesic_rejects_excluded_start(capsys):
    code = main(
        ["geodesic", "example-ii", "--p0", "0,0,1,0", "--v0", "1,0,0,0", "--length", "1"]
    )
    assert code == 2
    assert "outside sampling domain" in capsys.readouterr().err


def test_cli_presets_catalog(capsys):
    assert main(["presets"]) == 0
    out = capsys.readouterr().out
    for name in (
        "euclidean-r4",
        "canonical-phi",
        "twisted-phi",
        "conformal-r2",
        "map-example-i",
        "map-example-ii",
    ):
        assert name in out


def test_run_scenario_overrides(tmp_path):
    path = _write(tmp_path, MINIMAL)
    report = run_scenario(path, seed=7, samples=25)
    assert report.seed == 7
    assert report.sample_count == 25
    assert report.checks[0].samples == 25


def test_tolerance_scale_wired_through(tmp_path):
    path = _write(tmp_path, MINIMAL)
    base = run_scenario(path)
    scaled = run_scenario(path, tolerance_scale=10.0)
    ref = {c.name: c.tolerance for c in base.checks}
    for c in scaled.checks:
        if c.verdict != "skip":
            assert c.tolerance == pytest.approx(10.0 * ref[c.name])


def test_bad_overrides_rejected(tmp_path):
    path = _write(tmp_path, MINIMAL)
    with pytest.raises(ScenarioValidationError):
        run_scenario(path, samples=0)
    with pytest.raises(ScenarioValidationError):
        run_scenario(path, tolerance_scale=0.0)


def test_report_table_format(tmp_path):
    report = run_scenario(_write(tmp_path, MINIMAL))
    table = report.to_table()
    assert "overall: pass" in table
    assert "structure" in table
