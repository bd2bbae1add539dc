"""Command line front end: thin wrapping, serialization, exit codes."""
import json
import subprocess
import sys

import numpy as np
import pytest

from divfree import (
    assemble_gas,
    build_model,
    euclidean_metric,
    run_case,
    invariance_symmetry_check,
)
from divfree.cli import dumps_report, main, parse_params, _parse_state
from divfree.models import EMState, GasState, RelativisticState
from divfree.exterior import PFormValue


def run_cli(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def test_models_command_lists_the_registry(capsys):
    code, out = run_cli(capsys, ["models"])
    assert code == 0
    report = json.loads(out)
    names = {entry["name"] for entry in report["models"]}
    assert {"gas", "relativistic", "maxwell-linear", "iso-p1"} <= names


def test_tensor_command_matches_the_library(capsys):
    code, out = run_cli(capsys, ["tensor", "--model", "gas",
                                 "--state", '{"rho": 1.0, "q": [1.0]}'])
    assert code == 0
    report = json.loads(out)
    gas = build_model("gas")
    T, Tp = assemble_gas(gas, GasState(rho=1.0, q=[1.0]))
    assert np.abs(np.array(report["tensor"]) - T.entries).max() == 0.0
    assert np.abs(np.array(report["tensor_prime"]) - Tp.entries).max() == 0.0
    assert report["pressure"] == 0.5
    assert report["density"] == 0.0


def test_tensor_command_reports_metric_symmetry(capsys):
    code, out = run_cli(capsys, ["tensor", "--model", "iso-p1",
                                 "--state", '{"coeffs": [3, 4]}',
                                 "--metric", "euclidean"])
    assert code == 0
    report = json.loads(out)
    assert report["symmetry_defect"] == 0.0
    assert np.abs(np.array(report["tensor"])
                  - np.array([[3.5, -12.0], [-12.0, -3.5]])).max() == 0.0


def test_invariance_command_matches_the_library(capsys):
    code, out = run_cli(capsys, ["invariance", "--model", "iso-p1",
                                 "--metric", "euclidean", "--seed", "4",
                                 "--n-states", "32"])
    assert code == 0
    report = json.loads(out)
    direct = invariance_symmetry_check(build_model("iso-p1"), euclidean_metric(2),
                            n_states=32, seed=4)
    assert report["agreement"] is True
    assert report["verdict"] == direct["verdict"]
    assert report["invariance_defect"] == direct["invariance_defect"]
    assert report["symmetry_defect"] == direct["symmetry_defect"]


def test_invariance_broken_model_still_agrees(capsys):
    code, out = run_cli(capsys, ["invariance", "--model", "gas",
                                 "--metric", "euclidean"])
    assert code == 0
    assert json.loads(out)["verdict"] == "broken-asymmetric"


def test_verify_manufactured_case(capsys):
    code, out = run_cli(capsys, ["verify", "--manufactured", "uniform-gas",
                                 "-n", "5"])
    assert code == 0
    report = json.loads(out)
    assert report["residual"] == 0.0
    direct = run_case("uniform-gas", 5)
    assert report["rows"] == list(direct["rows"])


def test_verify_list_mode(capsys):
    code, out = run_cli(capsys, ["verify", "--manufactured", "list"])
    assert code == 0
    names = set(json.loads(out)["cases"])
    assert "maxwell-plane-wave" in names and "entropy-shear" in names


def test_verify_refinement_reports_orders(capsys):
    code, out = run_cli(capsys, ["verify", "--manufactured", "closed-cubic",
                                 "--refine", "-n", "8", "--levels", "2"])
    assert code == 0
    report = json.loads(out)
    assert report["orders"] == [2.0]  # residual is exactly h^2


def test_verify_field_file(tmp_path, capsys):
    from divfree import GridField, save_grid

    g = GridField.from_function(
        lambda Y: np.stack([np.full(Y.shape[:-1], -0.4),
                            np.full(Y.shape[:-1], 1.3)], axis=-1),
        d=2, p=1, dims=(5, 5), spacing=(0.2, 0.2))
    path = tmp_path / "uniform.json"
    save_grid(g, path)
    code, out = run_cli(capsys, ["verify", "--field", str(path),
                                 "--model", "gas", "--tol", "1e-12"])
    assert code == 0
    report = json.loads(out)
    assert report["closedness_residual"] == 0.0
    assert report["div_residual"] == 0.0


def test_verify_field_tol_failure_exits_2(tmp_path, capsys):
    from divfree import GridField, save_grid

    def fn(Y):
        rho = 1.0 + Y[..., 1] ** 2
        return np.stack([np.zeros(Y.shape[:-1]), rho], axis=-1)

    g = GridField.from_function(fn, d=2, p=1, dims=(9, 9),
                                spacing=(1.0 / 9, 1.0 / 9))
    path = tmp_path / "imbalanced.json"
    save_grid(g, path)
    code, out = run_cli(capsys, ["verify", "--field", str(path),
                                 "--model", "gas", "--tol", "1e-12"])
    assert code == 2
    assert json.loads(out)["div_residual"] > 0.1


def test_jump_search_mode(capsys):
    code, out = run_cli(capsys, ["jump", "--m-left", "[2.0, 0.3, -0.1, 0.2]"])
    assert code == 0
    report = json.loads(out)
    assert abs(report["theta"] - np.pi / 4.0) < 1e-8
    assert report["residual"] < 1e-10
    assert report["model"] == "relativistic-limit"


def test_jump_pair_mode_flags_an_unbalanced_interface(capsys):
    code, out = run_cli(capsys, ["jump", "--model", "gas",
                                 "--left", '{"rho": 1.0, "q": [0.0]}',
                                 "--right", '{"rho": 2.0, "q": [0.0]}',
                                 "--normal", "[0, 1]", "--tol", "1e-8"])
    assert code == 2
    assert json.loads(out)["row_residuals"] == [0.0, 1.5]


def test_variation_command(capsys):
    code, out = run_cli(capsys, ["variation", "--d", "2", "--p", "1",
                                 "-n", "16", "--levels", "2"])
    assert code == 0
    report = json.loads(out)
    assert min(report["orders"]) > 1.9
    assert len(report["levels"]) == 2


def test_usage_errors_exit_1(capsys):
    assert main(["tensor", "--model", "nope", "--state", "{}"]) == 1
    capsys.readouterr()
    assert main(["frobnicate"]) == 1
    capsys.readouterr()
    assert main(["verify", "--manufactured", "no-such-case"]) == 1
    capsys.readouterr()
    assert main(["tensor", "--model", "gas", "--state", "not json"]) == 1
    capsys.readouterr()
    assert main([]) == 1
    capsys.readouterr()


def test_pretty_output_renders_scalars(capsys):
    code, out = run_cli(capsys, ["tensor", "--model", "gas",
                                 "--state", '{"rho": 1.0, "q": [1.0]}',
                                 "--output", "pretty"])
    assert code == 0
    assert "pressure: 0.5" in out


def test_parse_params():
    assert parse_params("") == {}
    assert parse_params("gamma=1.4,mu=1.0,n=3,name=foo") == {
        "gamma": 1.4, "mu": 1.0, "n": 3, "name": "foo"}
    with pytest.raises(ValueError):
        parse_params("oops")


def test_parse_state_selects_the_right_type():
    gas = build_model("gas")
    st = _parse_state(gas, '{"rho": 1.5, "q": [0.2], "s": 0.3}')
    assert isinstance(st, GasState) and st.s == 0.3
    mx = build_model("maxwell-linear")
    st = _parse_state(mx, '{"E": [1, 0, 0], "B": [0, 1, 0]}')
    assert isinstance(st, EMState)
    rel = build_model("relativistic")
    st = _parse_state(rel, '{"m": [2.0, 0.3, -0.1, 0.2]}')
    assert isinstance(st, RelativisticState)
    iso = build_model("iso-p1")
    st = _parse_state(iso, '{"coeffs": [3, 4]}')
    assert isinstance(st, PFormValue)


def test_report_serialization_is_canonical():
    report = {"b": float("nan"), "a": np.array([1.5, 0.1]),
              "c": float("inf"), "d": True, "e": None, "f": "txt", "g": 3}
    text = dumps_report(report)
    assert text == ('{"a":[1.5,0.10000000000000001],"b":"nan","c":"inf",'
                    '"d":true,"e":null,"f":"txt","g":3}')
    nested = dumps_report({"x": {"zz": 1.0, "aa": np.float64(2.0)}})
    assert nested == '{"x":{"aa":2,"zz":1}}'
    assert dumps_report(report) == text  # stable across calls


def test_two_processes_emit_identical_bytes(tmp_path):
    cmd = [sys.executable, "-m", "divfree.cli", "invariance", "--model",
           "maxwell-lorentz", "--metric", "minkowski", "--seed", "12"]
    outs = []
    for k in range(2):
        target = tmp_path / f"run{k}.json"
        done = subprocess.run(cmd + ["--out", str(target)],
                              capture_output=True, text=True)
        assert done.returncode == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
