import csv
import io
import json

import pytest
from hypothesis import given, strategies as st

from plancherel.cli import InvalidInput, main, parse_sigma


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_parse_sigma_grammar():
    assert parse_sigma("5") == 5
    assert parse_sigma("3i") == 3j
    assert parse_sigma("1.5") == 1.5
    assert parse_sigma("-2.5", allow_negative=True) == -2.5
    for bad in ("1+2i", "abc", "", "i", "2j", "-3"):
        with pytest.raises(InvalidInput):
            parse_sigma(bad)


@given(st.floats(0, 1e6, allow_nan=False, allow_infinity=False))
def test_parse_sigma_round_trip(x):
    assert parse_sigma(repr(x)) == x
    assert parse_sigma(repr(x) + "i") == complex(0, x)


def test_spectrum_single_atom(capsys):
    code, out = run(capsys, "spectrum", "--sigma", "5", "--mu", "1")
    data = json.loads(out)
    assert code == 0
    assert [(a["j"], a["tau"]) for a in data["atoms"]] == [(0, 4.0)]
    assert data["atoms"][0]["weight"] == pytest.approx(0.75, abs=1e-10)


def test_spectrum_no_atoms_for_imaginary_sigma(capsys):
    code, out = run(capsys, "spectrum", "--sigma", "3i", "--mu", "2")
    assert code == 0 and json.loads(out)["atoms"] == []


@pytest.mark.parametrize("argv", [
    ["spectrum", "--sigma", "5", "--mu", "0"],
    ["transform", "--sigma", "5x", "--mu", "1"],
    ["transform", "--sigma", "5", "--mu", "1", "--fn", "nosuch"],
    ["verify", "nosuch"],
    ["verify", "unitarity", "--tol", "-1"],
    ["kernel", "--sigma", "-3", "--tau", "-1.2", "--n", "2", "--m", "1", "--k", "0",
     "--points", "1,2,3"],
])
def test_invalid_input_exits_with_two(capsys, argv):
    assert main(argv) == 2


def test_transform_atom_and_zero(capsys):
    code, out = run(capsys, "transform", "--sigma", "5", "--mu", "1", "--fn", "exp")
    data = json.loads(out)
    assert code == 0
    assert data["atoms"][0]["re"] == pytest.approx(1.0160729238492727, rel=1e-10)
    assert data["norm_spectral"] == pytest.approx(data["norm_weighted"], rel=1e-9)
    code, out = run(capsys, "transform", "--sigma", "5", "--mu", "1", "--fn", "zero")
    data = json.loads(out)
    assert all(c["re"] == 0 and c["im"] == 0 for c in data["continuous"])
    assert all(a["re"] == 0 for a in data["atoms"])


def test_verify_unitarity_with_two_atoms(capsys):
    code, out = run(capsys, "verify", "unitarity", "--sigma", "6", "--mu", "1", "--profile",
                    "quick", "--fn", "exp")
    data = json.loads(out)
    assert code == 0 and data["status"] == "PASS"
    assert "atoms=2" in data["suites"][0]["rows"][0]["detail"]


def test_verify_unreachable_tolerance_fails(capsys):
    code, _ = run(capsys, "verify", "unitarity", "--sigma", "1.5", "--mu", "5", "--fn",
                  "expcos", "--profile", "quick", "--tol", "1e-15")
    assert code == 1


def test_verify_output_is_deterministic(capsys, tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (first, second):
        assert main(["verify", "specfun", "--format", "csv", "--out", str(path)]) == 0
    assert first.read_bytes() == second.read_bytes()
    rows = list(csv.DictReader(io.StringIO(first.read_text())))
    assert {r["status"] for r in rows} == {"PASS"}
    assert set(rows[0]) >= {"check", "value", "reference", "rel_err", "tol", "status"}


def test_config_file_and_flag_override(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"sigma": "6", "mu": 1}))
    code, out = run(capsys, "spectrum", "--config", str(cfg))
    assert code == 0 and len(json.loads(out)["atoms"]) == 2
    code, out = run(capsys, "spectrum", "--config", str(cfg), "--sigma", "3i")
    assert code == 0 and json.loads(out)["atoms"] == []
    cfg.write_text(json.dumps({"sigma": "6", "nested": {"a": 1}}))
    assert main(["spectrum", "--config", str(cfg)]) == 2


def test_kernel_subcommand(capsys):
    code, out = run(capsys, "kernel", "--sigma", "-3", "--tau", "-1.2", "--n", "2", "--m", "1",
                    "--k", "0", "--points", "0.5,0.8;1,1.5")
    data = json.loads(out)
    assert code == 0 and len(data["points"]) == 2 and data["mu"] == 1
    assert data["constant"]["re"] > 0


def test_spectrum_density_samples_are_pairs(capsys):
    code, out = run(capsys, "spectrum", "--sigma", "5", "--mu", "1")
    samples = json.loads(out)["density_samples"]
    assert code == 0 and all(len(s) == 2 and s[1] > 0 for s in samples)
