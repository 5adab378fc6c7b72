import csv
import io
import json
import os

import jsonschema
import pytest

from necroswap.cli import main, schema_path
from necroswap.statevec import Circuit, h, x

FIG3 = Circuit(3, 0, (x(0), x(1), x(2), h(1), h(2), x(1), x(2)))


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--threads", "1", *argv)
    report = json.loads(out) if out else None
    if report is not None:
        schema = json.loads(schema_path(report["schema"].split(".", 1)[1]).read_text())
        jsonschema.validate(report, schema)
    return code, report, err


@pytest.fixture
def fig3_file(tmp_path):
    p = tmp_path / "fig3.json"
    p.write_text(FIG3.to_json())
    return str(p)


@pytest.fixture
def h_file(tmp_path):
    p = tmp_path / "h.json"
    p.write_text(Circuit(1, 0, (h(0),)).to_json())
    return str(p)


def test_every_schema_is_valid_json_schema():
    for kind in ("circuit", "state", "distinguish", "swap-from-distinguisher", "search",
                 "tightness", "haar", "audit", "reproduce-all"):
        jsonschema.Draft202012Validator.check_schema(json.loads(schema_path(kind).read_text()))


def test_distinguish(capsys, fig3_file):
    code, rep, _ = run_json(capsys, "distinguish", "--swap-unitary", fig3_file,
                            "--pair", "000:1--")
    assert code == 0 and rep["pass"]
    assert abs(rep["bias"] - 1) <= 1e-10
    code, rep, _ = run_json(capsys, "distinguish", "--swap-unitary", fig3_file,
                            "--pair", "000:1--", "--theta", "3.141592653589793")
    assert code == 0 and abs(rep["bias"] + 1) <= 1e-10


def test_swap_from_distinguisher(capsys, h_file, tmp_path):
    emitted = tmp_path / "sw.json"
    code, rep, _ = run_json(capsys, "swap-from-distinguisher", "--distinguisher", h_file,
                            "--pair", "0:1", "--emit-circuit", str(emitted))
    assert code == 0 and rep["pass"] and abs(rep["bias"] - 1) <= 1e-10
    jsonschema.validate(json.loads(emitted.read_text()),
                        json.loads(schema_path("circuit").read_text()))


def test_search_relative_and_witness(capsys, tmp_path):
    w = tmp_path / "w.json"
    code, rep, _ = run_json(capsys, "search", "--objective", "relative", "--pair", "00:11",
                            "--emit-witness", str(w), "--expect-size", "2")
    assert code == 0 and rep["size"] == 2 and rep["pass"]
    assert len(json.loads(w.read_text())["gates"]) == 2


def test_search_zero_error_vs_symmetric(capsys):
    code, rep, _ = run_json(capsys, "search", "--objective", "swap", "--pair", "000:1--",
                            "--zero-error", "--max-depth", "7")
    assert code == 0 and rep["size"] == 7 and rep["phase"] == "exact"
    code, rep, _ = run_json(capsys, "search", "--objective", "swap", "--pair", "000:1--",
                            "--max-depth", "7")
    assert code == 0 and rep["size"] == 6 and rep["phase"] == "symmetric"


def test_search_prep_all_witnesses(capsys):
    code, rep, _ = run_json(capsys, "search", "--objective", "prep", "--target", "1+",
                            "--all-witnesses")
    assert code == 0 and rep["size"] == 2
    assert len(rep["witnesses"]) == rep["witness_count"] >= 2


def test_search_exhausted_exit_code(capsys):
    code, rep, _ = run_json(capsys, "search", "--objective", "swap", "--pair", "000:1--",
                            "--zero-error", "--max-depth", "3")
    assert code == 3 and rep["status"] == "exhausted"


def test_search_expect_size_mismatch(capsys):
    code, rep, _ = run_json(capsys, "search", "--objective", "relative", "--pair", "0:1",
                            "--expect-size", "2")
    assert code == 1 and rep["pass"] is False


def test_tightness_single_and_grid(capsys):
    code, rep, _ = run_json(capsys, "tightness", "--a", "0.7", "--b", "0.2", "--optimize",
                            "--inner-mode", "basis")
    assert code == 0 and rep["pass"] and abs(rep["rows"][0]["restricted_max"] - 0.9) <= 1e-6
    code, rep, _ = run_json(capsys, "tightness", "--grid", "3", "--inner-qubits", "4")
    assert code == 0 and len(rep["rows"]) == 6


def test_haar(capsys):
    code, rep, _ = run_json(capsys, "haar", "--n", "4", "--eps", "0.2", "--samples", "20000")
    assert code == 0 and rep["sigmas"] <= 3


def test_audit_inequality_and_triangle(capsys):
    code, rep, _ = run_json(capsys, "audit", "--kind", "inequality", "--pair", "0:1",
                            "--max-depth", "5")
    assert code == 0 and rep["result"]["complete"]
    code, rep, _ = run_json(capsys, "audit", "--kind", "triangle", "--states",
                            "000,011,1--", "--phase", "exact", "--max-depth", "7")
    assert code == 0 and rep["result"]["holds"] is False
    assert rep["result"]["values"]["0->2"] == 7


def test_reproduce_all_subset_and_negative_control(capsys):
    code, rep, err = run_json(capsys, "reproduce-all", "--only", "thm1-roundtrip,thm2i-bias-law")
    assert code == 0 and len(rep["rows"]) == 2 and rep["pass"]
    assert err.count("[PASS]") == 2
    code, rep, err = run_json(capsys, "reproduce-all", "--only", "thm1-roundtrip",
                              "--negative-control", "drop-z")
    assert code == 1 and not rep["pass"] and "[FAIL]" in err


@pytest.mark.parametrize("argv", [
    ["reproduce-all", "--only", "no-such-claim"],
    ["search", "--objective", "relative"],
    ["swap-from-distinguisher", "--distinguisher", "H_FILE", "--pair", "0:+"],
    ["distinguish", "--swap-unitary", "/nonexistent.json", "--pair", "0:1"],
    ["tightness", "--a", "0.2", "--b", "0.5"],
])
def test_usage_errors_exit_2(capsys, h_file, argv):
    code, _, err = run(capsys, *[h_file if a == "H_FILE" else a for a in argv])
    assert code == 2 and "error" in err


def test_argparse_usage_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["search"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["--threads", "0", "haar", "--n", "2", "--eps", "0.1"])
    assert exc.value.code == 2


def _strip_time(text):
    d = json.loads(text)
    d.pop("wall_time", None)
    return d


def test_deterministic_output(capsys):
    argv = ["--seed", "5", "search", "--objective", "swap", "--pair", "01:10",
            "--all-witnesses"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, "--threads", "3", *argv)
    assert _strip_time(a) == _strip_time(b)
    _, a, _ = run(capsys, "haar", "--n", "3", "--eps", "0.3", "--samples", "2000", "--seed", "7")
    _, b, _ = run(capsys, "haar", "--n", "3", "--eps", "0.3", "--samples", "2000", "--seed", "7")
    assert a == b


def test_out_file_atomic_and_csv(capsys, tmp_path):
    out = tmp_path / "r.csv"
    code, stdout, _ = run(capsys, "--format", "csv", "--out", str(out), "tightness",
                          "--grid", "2", "--inner-mode", "basis")
    assert code == 0 and stdout == ""
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == 3 and {"a", "b", "bias", "pass"} <= set(rows[0])
    assert [p for p in os.listdir(tmp_path) if p.endswith(".tmp")] == []
    code, _, _ = run(capsys, "--format", "csv", "haar", "--n", "2", "--eps", "0.5",
                     "--samples", "1000")
    assert code == 0


def test_global_flags_after_subcommand(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "haar", "--n", "2", "--eps", "0.5", "--samples", "1000",
                     "--out", str(out), "--seed", "3")
    assert code == 0 and json.loads(out.read_text())["seed"] == 3


def test_max_qubits_env(capsys, monkeypatch):
    monkeypatch.setenv("NECROSWAP_MAX_QUBITS", "2")
    code, _, err = run(capsys, "search", "--objective", "relative", "--pair", "000:111")
    assert code == 2 and "error" in err
