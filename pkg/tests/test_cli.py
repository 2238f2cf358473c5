import json
import logging

import jsonschema
import pytest

from spreadlab.cli import main
from spreadlab.report import Record, VerificationReport, load_schema, strip_volatile


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse exits directly on usage errors
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--format", "json", *argv)
    body = json.loads(out)
    jsonschema.validate(body, load_schema("report"))
    return code, body


@pytest.fixture(autouse=True)
def no_env_cache(monkeypatch):
    monkeypatch.delenv("SPREADLAB_CACHE", raising=False)


# --- exit codes ---------------------------------------------------------------------

def test_spread_passes_with_expectation(capsys):
    code, body = run_json(capsys, "spread", "Alt(5)", "--expect", "2")
    assert code == 0
    (rec,) = body["records"]
    assert rec["status"] == "pass" and rec["computed"] == 2 and rec["expected"] == 2


def test_spread_mismatch_exits_two(capsys):
    code, body = run_json(capsys, "spread", "Alt(5)", "--expect", "3")
    assert code == 2 and body["records"][0]["status"] == "fail"


def test_infinite_spread(capsys):
    code, body = run_json(capsys, "spread", "Cyclic(6)", "--expect", "inf")
    assert code == 0 and body["records"][0]["computed"] == "inf"


def test_uspread_reports_witness_class(capsys):
    code, body = run_json(capsys, "uspread", "Sym(5)", "--expect", "2")
    assert code == 0
    computed = body["records"][0]["computed"]
    assert computed["value"] == 2
    assert all({"class", "cycle_type", "order"} <= set(w) for w in computed["witnesses"])


def test_witness_failure_exits_two(capsys):
    code, _, _ = run(capsys, "witness", "Sym(6)", "2A", "1")
    assert code == 2


def test_witness_with_atlas_name(capsys):
    code, body = run_json(capsys, "witness", "PGammaL(2,8)", "9D", "6", "--atlas")
    assert code == 0
    assert body["records"][0]["status"] == "pass"


@pytest.mark.parametrize("argv", [
    ["spread", "Alt(1000000)"],
    ["spread", "NoSuchGroup(3)"],
    ["frobnicate"],
    ["spread"],
    ["--seed", "-1", "spread", "Alt(5)"],
    ["--timeout", "0", "spread", "Alt(5)"],
    ["overgroups", "Alt(5)", "(1,6)"],
    ["witness", "Alt(5)", "9Z", "1"],
])
def test_usage_and_computation_errors_exit_one(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err


def test_global_flags_after_subcommand(capsys):
    code, body = run_json(capsys, "spread", "Alt(5)", "--seed", "7", "--timeout", "30")
    assert code == 0 and body["fingerprint"]["config"]["seed"] == 7


def test_table_format(capsys):
    code, out, _ = run(capsys, "spread", "Alt(5)")
    assert code == 0 and "PASS" in out


# --- report schema and determinism -------------------------------------------------------

def test_report_round_trip(capsys):
    _, out, _ = run(capsys, "--format", "json", "fpr", "Alt(5)", "(1,2,3)")
    rep = VerificationReport.loads(out)
    assert json.loads(rep.dumps()) == json.loads(out)


def test_reports_are_deterministic_up_to_runtime(capsys):
    bodies = [run_json(capsys, "--seed", "3", "uspread", "Alt(6)")[1] for _ in range(2)]
    assert strip_volatile(bodies[0]) == strip_volatile(bodies[1])


def test_record_rejects_unknown_tags():
    with pytest.raises(ValueError):
        Record("c", "a", 1, 1, "GUESS", "pass", 0.0)
    with pytest.raises(ValueError):
        Record("c", "a", 1, 1, "TRIVIAL", "maybe", 0.0)


def test_schema_rejects_bad_provenance(capsys):
    _, body = run_json(capsys, "spread", "Alt(5)")
    body["records"][0]["provenance"] = "GUESS"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(body, load_schema("report"))


# --- cache ---------------------------------------------------------------------------------

def test_cache_hit_and_config_miss(capsys, tmp_path, monkeypatch, caplog):
    monkeypatch.setenv("SPREADLAB_CACHE", str(tmp_path))
    code, first = run_json(capsys, "spread", "Sym(5)")
    assert code == 0 and len(list(tmp_path.glob("*.json"))) == 1
    with caplog.at_level(logging.INFO, logger="spreadlab"):
        code, second = run_json(capsys, "spread", "Sym(5)")
    assert code == 0 and any("cache hit" in r.message for r in caplog.records)
    assert strip_volatile(first) == strip_volatile(second)
    run_json(capsys, "--timeout", "100", "spread", "Sym(5)")
    assert len(list(tmp_path.glob("*.json"))) == 2


def test_tampered_cache_entry_is_recomputed(capsys, tmp_path, caplog):
    run_json(capsys, "--cache-dir", str(tmp_path), "spread", "Alt(5)")
    (path,) = tmp_path.glob("*.json")
    body = json.loads(path.read_text())
    body["certificate"]["value"] = 5
    path.write_text(json.dumps(body))
    with caplog.at_level(logging.WARNING, logger="spreadlab"):
        code, rep = run_json(capsys, "--cache-dir", str(tmp_path), "spread", "Alt(5)", "--expect", "2")
    assert code == 0 and rep["records"][0]["computed"] == 2
    assert any("discarding" in r.message for r in caplog.records)


# --- other subcommands -----------------------------------------------------------------------

@pytest.mark.parametrize("fmt", ["dimacs", "json"])
def test_gengraph_export_to_file(capsys, tmp_path, fmt):
    dest = tmp_path / f"graph.{fmt}"
    code, _ = run_json(capsys, "gengraph", "Alt(5)", "--export", fmt, "--output", str(dest))
    assert code == 0
    text = dest.read_text()
    if fmt == "json":
        jsonschema.validate(json.loads(text), load_schema("generating-graph"))
    else:
        assert any(line.startswith("p ") for line in text.splitlines())


def test_gengraph_export_to_stdout(capsys):
    code, out, err = run(capsys, "gengraph", "Alt(5)", "--export", "json")
    assert code == 0
    jsonschema.validate(json.loads(out), load_schema("generating-graph"))
    assert "pass" in err


def test_prg_and_overgroups(capsys):
    code, body = run_json(capsys, "prg", "Alt(5)", "3")
    assert code == 0 and body["records"][0]["status"] == "pass"
    code, body = run_json(capsys, "overgroups", "Alt(5)", "(1,2,3,4,5)")
    assert code == 0


def test_shintani_command(capsys):
    code, body = run_json(capsys, "shintani", "2", "2")
    assert code == 0
    assert len(body["records"]) == 7
    assert all(r["status"] == "pass" for r in body["records"])


def test_verify_only_with_threads_keeps_order(capsys):
    names = ["u-alt5", "s-alt5", "elem-abelian"]
    argv = ["verify"] + [a for n in names for a in ("--only", n)]
    code, body = run_json(capsys, "--threads", "2", *argv)
    assert code == 0
    assert len(body["records"]) == 3
    code1, body1 = run_json(capsys, *argv)
    assert [r["claim"] for r in body["records"]] == [r["claim"] for r in body1["records"]]


def test_verify_unknown_check_is_usage_error(capsys):
    code, _, _ = run(capsys, "verify", "--only", "no-such-check")
    assert code == 1
