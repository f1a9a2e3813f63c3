import json

import pytest

from announce.assets import data_path
from announce.cli import main

FIG1 = str(data_path("figure1.json"))
UNIFORM = str(data_path("uniform.json"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_true(capsys):
    code, out, _ = run(capsys, "check", "--model", FIG1, "--point", "w01",
                       "--formula", "~K a q & <!> K a q")
    rep = json.loads(out)
    assert code == 0 and rep["value"] is True and rep["point"] == "w01"
    assert set(rep) == {"formula", "point", "value", "candidates_enumerated", "elapsed_ms"}


def test_check_false_uses_file_point(capsys):
    code, out, _ = run(capsys, "check", "--model", FIG1, "--formula", "K a q", "--pretty")
    assert code == 1 and json.loads(out)["point"] == "w11"


def test_check_errors(capsys, tmp_path):
    code, _, err = run(capsys, "check", "--model", FIG1, "--formula", "K a (q")
    assert code == 2 and "FormulaSyntaxError" in err
    code, _, err = run(capsys, "check", "--model", str(tmp_path / "none.json"),
                       "--formula", "p")
    assert code == 2
    code, _, _ = run(capsys, "check", "--model", FIG1, "--point", "zz", "--formula", "p")
    assert code == 2


def test_cal_literal_flag(capsys):
    args = ["check", "--model", FIG1, "--point", "w00", "--formula", "[C{a}] false"]
    assert run(capsys, *args)[0] == 1
    assert run(capsys, *args, "--cal-literal")[0] == 0


def test_budget_error_on_cb(capsys, tmp_path):
    grid = tmp_path / "g.json"
    cb = tmp_path / "cb.txt"
    assert run(capsys, "gen", "--kind", "grid", "--tiles", UNIFORM, "--width", "2",
               "--height", "2", "--out", str(grid))[0] == 0
    assert json.loads(grid.read_text())["point"] == "0_0_mid"
    assert len(json.loads(grid.read_text())["states"]) == 20
    assert run(capsys, "gen", "--kind", "cb-gal", "--out", str(cb))[0] == 0
    code, _, err = run(capsys, "check", "--model", str(grid), "--formula",
                       cb.read_text(), "--budget", "1")
    assert code == 2 and "QuantifierBudgetExceeded" in err


def test_bisim(capsys):
    code, out, _ = run(capsys, "bisim", "--model", FIG1, "-n", "0")
    assert code == 0 and len(json.loads(out)["blocks"]) == 4
    code, out, _ = run(capsys, "bisim", "--model", FIG1, "-n", "0", "--distinguish", "w11")
    assert json.loads(out)["formula"] == "p & q"
    code, out, _ = run(capsys, "bisim", "--model", FIG1, "-n", "2", "--atoms", "p")
    assert len(json.loads(out)["blocks"]) == 2


def test_bisim_singleton(capsys, tmp_path):
    path = tmp_path / "one.json"
    path.write_text(json.dumps({"states": ["w"], "agents": {"a": [["w"]]}}))
    code, out, _ = run(capsys, "bisim", "--model", str(path), "-n", "3")
    assert json.loads(out)["blocks"] == [["w"]]


def test_gen_formulas(capsys, tmp_path):
    out = tmp_path / "f.txt"
    assert run(capsys, "gen", "--kind", "cb-apal", "--out", str(out))[0] == 0
    assert out.read_text().startswith("K e K s (")
    assert run(capsys, "gen", "--kind", "local", "--out", str(out))[0] == 0
    assert run(capsys, "gen", "--kind", "sat", "--tiles", UNIFORM, "--out", str(out))[0] == 0
    assert "red" in out.read_text()


def test_gen_errors(capsys, tmp_path):
    white = tmp_path / "white.json"
    white.write_text(json.dumps({"colours": ["white"], "tiles": [
        {"up": "white", "right": "white", "down": "white", "left": "white"}]}))
    code, _, err = run(capsys, "gen", "--kind", "sat", "--tiles", str(white),
                       "--out", str(tmp_path / "x"))
    assert code == 2 and "PaletteClash" in err
    code, _, err = run(capsys, "gen", "--kind", "grid", "--tiles",
                       str(data_path("mismatch.json")), "--width", "2", "--height", "2",
                       "--out", str(tmp_path / "x"))
    assert code == 2 and "InvalidTiling" in err
    assert run(capsys, "gen", "--kind", "sat", "--out", str(tmp_path / "x"))[0] == 2


def test_tile_search(capsys):
    code, out, _ = run(capsys, "tile-search", "--tiles", UNIFORM, "--width", "4",
                       "--height", "4")
    assert code == 0 and json.loads(out)["grid"]["cells"] == [[0] * 4] * 4
    code, out, _ = run(capsys, "tile-search", "--tiles", str(data_path("mismatch.json")),
                       "--width", "2", "--height", "2")
    assert code == 1 and json.loads(out)["found"] is False


def test_suite_properties(capsys):
    code, out, _ = run(capsys, "suite", "--seed", "3", "--sizes", "2,3",
                       "--properties-only")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["seed"] == 3
    again = json.loads(run(capsys, "suite", "--seed", "3", "--sizes", "2,3",
                           "--properties-only")[1])
    strip = lambda r: [{k: v for k, v in x.items() if k != "elapsed_ms"} for x in r["results"]]
    assert strip(rep) == strip(again)


def test_suite_empty_sizes(capsys):
    code, out, err = run(capsys, "suite", "--sizes", "", "--properties-only")
    assert code == 0 and "warning" in err and json.loads(out)["results"] == []


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["check"])
    assert exc.value.code == 2
