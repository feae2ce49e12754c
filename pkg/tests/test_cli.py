import json
from pathlib import Path

import jsonschema
import pytest

from ratiokit.cli import run
from ratiokit.params import SpectralParams

SCHEMAS = Path(__file__).resolve().parents[1] / "docs" / "schemas"
GOLDEN = ["--p", "1", "--q", "1", "--N", "1", "--xs", "2,0", "3,0", "--ys", "0.5,0", "4,0"]


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def test_eval_golden_json(capsys):
    assert run(["eval", "--mode", "thm1", *GOLDEN]) == 0
    out = json.loads(capsys.readouterr().out)
    jsonschema.validate(out, schema("eval_output"))
    assert abs(out["value"][0] - 6 / 7) < 1e-12 and out["value"][1] == 0
    jsonschema.validate(out["params"], schema("params"))
    assert SpectralParams.from_json(json.dumps(out["params"])) == SpectralParams(1, 1, 1, (2, 3), (0.5, 4))


def test_eval_domain_error_names_index(capsys):
    bad = GOLDEN[:-2] + ["1.5,0", "4,0"]
    assert run(["eval", "--mode", "thm1", *bad]) == 1
    assert "index 1" in capsys.readouterr().err


def test_params_file(tmp_path, capsys):
    f = tmp_path / "p.json"
    f.write_text(SpectralParams(1, 1, 1, (2, 3), (0.5, 4)).to_json())
    assert run(["eval", "--params", str(f), "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "mode,value_re,value_im,method,condition"
    assert float(lines[1].split(",")[1]) == pytest.approx(6 / 7, abs=1e-12)


def test_both_param_sources_is_usage_error(tmp_path):
    f = tmp_path / "p.json"
    f.write_text("{}")
    assert run(["eval", "--params", str(f), "--p", "1"]) == 64


@pytest.mark.parametrize("argv", [["eval", "--bogus"], [], ["eval", "--p", "1"], ["verify", "--suite", "nope"]])
def test_usage_errors(argv):
    assert run(argv) == 64


@pytest.mark.parametrize("mode,extra,expected", [
    ("compact", ["--p", "1", "--q", "1", "--N", "2", "--xs", "0.3", "0.7"], 0.79),
    ("stable", ["--p", "1", "--q", "1", "--N", "3", "--ys", "0.5", "2"], 1 / 6),
    ("series", GOLDEN, 6 / 7),
    ("confluent", ["--p", "1", "--q", "1", "--N", "1", "--xs", "2", "2", "--ys", "0.5", "4"], 5 / 7),
])
def test_eval_modes(capsys, mode, extra, expected):
    assert run(["eval", "--mode", mode, *extra]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"][0] == pytest.approx(expected, abs=1e-8)


def test_cor12_mode(capsys):
    argv = ["eval", "--mode", "cor12", "--p", "0", "--q", "0", "--pprime", "1", "--qprime", "1",
            "--N", "1", "--ys", "0.5", "2"]
    assert run(argv) == 0
    assert json.loads(capsys.readouterr().out)["value"][0] == pytest.approx(4 / 3, abs=1e-12)


def test_mc_seeded(capsys):
    assert run(["mc", "--samples", "100000", "--seed", "24397", *GOLDEN]) == 0
    out = json.loads(capsys.readouterr().out)
    jsonschema.validate(out, schema("mc_output"))
    assert abs(out["mean"][0] - 6 / 7) < 4 * out["stderr"]


def test_mc_env_seed(monkeypatch, capsys):
    monkeypatch.setenv("RATIOKIT_SEED", "0x2a")
    assert run(["mc", "--samples", "1000", *GOLDEN]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 42


def test_sweep_csv_and_json(capsys, tmp_path):
    assert run(["sweep", "--vary", "xre1", "--values", "7", "14", *GOLDEN]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert rows[0] == "point,value_re,value_im,condition"
    # 5/7 + x1/14 at x1 = 7 and x1 = 14
    assert float(rows[1].split(",")[1]) == pytest.approx(17 / 14, abs=1e-13)
    assert float(rows[2].split(",")[1]) == pytest.approx(12 / 7, abs=1e-13)
    out = tmp_path / "s.json"
    assert run(["sweep", "--vary", "psi1", "--grid", "0", "1", "3", "--format", "json",
                "--out", str(out), *GOLDEN]) == 0
    jsonschema.validate(json.loads(out.read_text()), schema("sweep_output"))


def test_verify_quick_report(capsys):
    assert run(["verify", "--suite", "1,2,5,6", "--seed", "7"]) == 0
    cap = capsys.readouterr()
    report = json.loads(cap.out)
    jsonschema.validate(report, schema("verify_report"))
    assert report["passed"] and [r["id"] for r in report["results"]] == [1, 2, 5, 6]
    assert cap.err.count("PASS") == 4


def test_verify_bytes_stable_across_workers(capsys):
    outs = []
    for w in ("1", "2", "8"):
        run(["verify", "--suite", "golden,stable,mc-small", "--seed", "3", "--workers", w])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] == outs[2]


def test_extended_params_schema():
    from ratiokit.params import ExtendedParams
    jsonschema.validate(ExtendedParams(1, 0, 2, 0, 1, (0.4,), (0.2, 0.3)).to_dict(),
                        schema("extended_params"))
