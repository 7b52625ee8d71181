import json
from pathlib import Path

import pytest

import ltlab
from ltlab.cli import main, selftest_exit_code

CONFIGS = Path(ltlab.__file__).with_name("configs")
GM = str(CONFIGS / "gm_z3.json")
PI = str(CONFIGS / "pi_z3.json")


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def leading(series):
    return series["z_low"], [c["coords"][0] for c in series["coeffs"]]


def test_lt_mult_on_multiplicative_group(capsys):
    code, doc = run(capsys, "lt-mult", "--config", GM, "--a", "2")
    assert code == 0
    low, coeffs = leading(doc["result"]["mult"])
    assert low == 1 and coeffs[:2] == ["2", "1"] and set(coeffs[2:]) == {"0"}


def test_psi_of_phi(capsys):
    f = '{"coeffs":[1,2,0,1],"z_low":-1,"z_high":10}'
    code, doc = run(capsys, "coleman-psi", "--config", PI, "--f", f, "--apply-phi")
    assert code == 0
    # q / pi = 1 over Z_3 with pi = 3
    assert leading(doc["result"]["psi_L"]) == (-1, ["1", "2", "0", "1"])
    assert leading(doc["result"]["psi_Col"]) == (-1, ["3", "6", "0", "3"])


def test_ghost_components(capsys):
    code, doc = run(capsys, "witt-ghost", "--config", PI, "--components", "[[0],[1]]", "--precision", "2")
    assert code == 0
    assert [g["coords"] for g in doc["result"]["ghost"]] == [["0"], ["3"]]


@pytest.mark.parametrize("argv, key", [
    (["lt-build", "--config", PI], "g_lt"),
    (["coleman-delta", "--config", GM, "--f", "[1,1]"], "delta"),
    (["nabla", "--config", GM, "--g", "[1,1]", "--a", "1"], "nabla"),
    (["pairing-bracket", "--config", PI, "--f", "[1]", "--omega", '{"coeffs":[1],"z_low":-1}', "--n", "1"], "bracket"),
    (["witt-smap", "--config", PI, "--b", "3", "--n", "2"], "smap"),
    (["witt-wmap", "--config", PI, "--components", "[[0],[1]]"], "wmap"),
    (["witt-omega", "--config", PI, "--components", '[{"coeffs":[1],"z_low":-1},[]]'], "minus"),
    (["sw-brace", "--config", PI, "--f", "[[1],[0]]", "--h", '{"coeffs":[1],"z_low":1}'], "brace"),
])
def test_other_commands(capsys, argv, key):
    code, doc = run(capsys, *argv)
    assert code == 0 and key in doc["result"]


def test_worked_values_through_the_cli(capsys):
    _, doc = run(capsys, "witt-smap", "--config", PI, "--b", "3", "--n", "2")
    assert doc["result"]["smap"]["components"] == [["0"], ["1"]]
    _, doc = run(capsys, "witt-wmap", "--config", PI, "--components", "[[0],[1]]")
    assert doc["result"]["wmap"]["coords"] == ["3"]
    _, doc = run(capsys, "nabla", "--config", GM, "--g", "[1,1]", "--a", "1")
    assert leading(doc["result"]["nabla"])[1][:2] == ["1", "0"]


def test_flags_override_config(capsys):
    _, doc = run(capsys, "lt-mult", "--config", GM, "--a", "2", "--precision", "2", "--zwindow", "0:4")
    assert doc["config"]["pi_prec"] == 2 and doc["config"]["z_high"] == 4
    assert doc["result"]["mult"]["z_high"] == 4


def test_config_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("LTLAB_CONFIG", GM)
    code, doc = run(capsys, "lt-mult", "--a", "2")
    assert code == 0 and doc["config"]["pi_prec"] == 4


def test_out_flag_writes_file(capsys, tmp_path):
    out = tmp_path / "out.json"
    assert main(["witt-ghost", "--config", PI, "--components", "[[0],[1]]", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["command"] == "witt-ghost"


def test_output_is_deterministic(capsys):
    argv = ["coleman-lift", "--config", str(CONFIGS / "ram_q2e2.json"), "--u", '{"coeffs":[1,1,0,1],"z_low":-1}']
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


@pytest.mark.parametrize("argv, error", [
    (["witt-ghost", "--config", PI, "--components", "[[0],"], "InvalidInput"),
    (["lt-mult", "--config", "/nonexistent.json", "--a", "2"], "InvalidInput"),
    (["coates-wiles", "--config", GM, "--g", '{"coeffs":[1,1],"z_low":-1}'], "DomainMismatch"),
    (["witt-ghost", "--config", PI, "--components", "[[0],[1]]", "--precision", "99"], "InvalidSpec"),
])
def test_errors_are_documents(capsys, argv, error):
    code, doc = run(capsys, *argv)
    assert code == 2
    assert doc["error"] == error and isinstance(doc["detail"], str)


def test_missing_config(capsys, monkeypatch):
    monkeypatch.delenv("LTLAB_CONFIG", raising=False)
    code, doc = run(capsys, "lt-mult", "--a", "2")
    assert code == 2 and doc["error"] == "InvalidSpec"


def test_selftest_exit_codes(capsys):
    assert selftest_exit_code({"passed": True}) == 0
    assert selftest_exit_code({"passed": False}) == 1
    code, doc = run(capsys, "selftest", "--only", "99")
    assert code == 2 and doc["error"] == "InvalidInput"
    code, doc = run(capsys, "selftest", "--only", "6", "--quick")
    assert code == 0 and doc["passed"] and [c["criterion"] for c in doc["criteria"]] == [6]
