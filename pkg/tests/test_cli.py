import csv
import io
import json

import pytest
from click.testing import CliRunner

from hulthen_monopole.cli import main


def run(*args, input=None):
    return CliRunner().invoke(main, list(args), input=input, catch_exceptions=False)


def parse_csv(text: str) -> tuple[dict, list[dict]]:
    first, rest = text.split("\n", 1)
    assert first.startswith("# config: ")
    config = json.loads(first[len("# config: "):])
    return config, list(csv.DictReader(io.StringIO(rest)))


def test_energies_csv_layout():
    res = run("energies", "--alpha", "1.2", "--xi", "0.05", "--l", "0", "--l", "1", "--n", "0", "--n", "1")
    assert res.exit_code == 0
    config, rows = parse_csv(res.stdout)
    assert config["alpha"] == 1.2 and config["l"] == [0, 1]
    assert len(rows) == 4
    assert {"E_nl", "E_formula", "n_max", "S_alpha", "K_alpha", "terms_used", "tail_estimate"} <= set(rows[0])
    assert all(r["status"] == "OK" and float(r["E_nl"]) < 0 for r in rows)


def test_no_bound_row():
    res = run("energies", "--alpha", "1.0", "--xi", "0.1", "--n", "7")
    assert res.exit_code == 0
    _, rows = parse_csv(res.stdout)
    assert rows[0]["status"] == "NO_BOUND" and rows[0]["E_nl"] == "" and rows[0]["n_max"] == "4"


def test_table1_preset_has_published_column():
    res = run("energies", "--preset", "table1")
    _, rows = parse_csv(res.stdout)
    assert len(rows) == 10
    assert float(rows[0]["E_published"]) == -0.0472842
    assert all(abs(float(r["rel_deviation"])) < 0.1 for r in rows)


def test_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run("energies", "--preset", "fig5a", "--out", str(path)).exit_code == 0
    assert a.read_bytes() == b.read_bytes()
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".tmp-")]


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"alpha": 0.8, "xi": 0.05, "l": [1], "format": "json"}))
    res = run("energies", "--config", str(cfg), "--alpha", "0.9")
    payload = json.loads(res.stdout)
    assert payload["config"]["alpha"] == 0.9 and payload["config"]["xi"] == 0.05
    assert payload["columns"][0] == "n" and len(payload["rows"]) == 1


@pytest.mark.parametrize(
    "args",
    [
        ["energies", "--alpha", "-1"],
        ["energies", "--xi", "0"],
        ["energies", "--l", "-1"],
        ["energies", "--preset", "nope"],
        ["energies", "--preset", "fig1a"],
        ["energies", "--alpha", "0.7", "--tol", "1e-30"],
        ["phase", "--energy", "-0.5"],
        ["scan", "--r-min", "0"],
        ["scan", "--n-points", "1"],
        ["wavefunction", "--preset", "fig3a"],
        ["verify", "--criterion", "42"],
    ],
)
def test_invalid_input_exit_code(args):
    assert run(*args).exit_code == 2


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"alpha": 0.8, "colour": "red"}))
    res = run("energies", "--config", str(cfg))
    assert res.exit_code == 2 and "colour" in res.output


def test_missing_config_file(tmp_path):
    assert run("energies", "--config", str(tmp_path / "none.json")).exit_code == 2


def test_phase_unitarity_and_oracle():
    res = run("phase", "--alpha", "0.8", "--xi", "0.3", "--l", "1", "--e-min", "0.2", "--e-max", "1.0",
              "--n-energies", "3", "--oracle")
    assert res.exit_code == 0
    _, rows = parse_csv(res.stdout)
    assert len(rows) == 3
    for r in rows:
        assert float(r["abs_S_minus_1"]) < 1e-12
        assert abs(float(r["delta_difference"])) < 1e-4


def test_scan_columns():
    res = run("scan", "--alpha", "0.7", "--l", "1", "--n-points", "5", "--format", "json")
    payload = json.loads(res.stdout)
    assert payload["columns"][-1] == "additivity_error" and len(payload["rows"]) == 5


def test_wavefunction_preset(tmp_path):
    out = tmp_path / "wf.csv"
    res = run("wavefunction", "--preset", "fig3b", "--out", str(out))
    assert res.exit_code == 0
    _, rows = parse_csv(out.read_text())
    # three states (n = 0, 1, 2) of which the preset range n = 1..5 keeps two
    assert {int(r["n"]) for r in rows} == {1, 2}
    assert "NO_BOUND" in res.stderr


def test_verify_subset(tmp_path):
    out = tmp_path / "report.json"
    res = run("verify", "--criterion", "2", "--criterion", "8", "--out", str(out))
    assert res.exit_code == 0
    report = json.loads(out.read_text())
    assert report["passed"] and [c["number"] for c in report["criteria"]] == [2, 8]
    assert "[PASS] 2." in res.stderr


def test_published_values_are_verbatim_text():
    res = run("energies", "--preset", "table1")
    _, rows = parse_csv(res.stdout)
    assert [r["E_published"] for r in rows][:2] == ["-0.0472842", "-0.0236029"]
    assert rows[-1]["E_published"] == "-0.0021561"
