"""
Tests for result records, dataset writers, the engine's record production
and the command-line entry point.
"""

import ast
import io
import json
from pathlib import Path

import pandas as pd
import pytest
from mpmath import mp, mpc, mpf

import config
import src.core
from main import build_parser, main
from src.cli.commands import SweepRequest, cmd_eps, parse_box, parse_list
from src.cli.writers import build_metadata, read_guides, write_csv, write_jsonl
from src.core.engine import Engine
from src.core.records import (COLUMNS, STATUS_RUNG, ResultRecord, any_failed, format_value,
                              make_record)
from src.numerics.errors import ConvergenceError, InvalidInputError
from src.numerics.precision import to_scalar
from src.rayleigh_ritz.exceptional import ExceptionalPoint
from src.rayleigh_ritz.matrix import Parity


def read_csv_text(text):
    return pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)


# ------------------------------------------------------------------ records

def test_format_value():
    assert format_value(None, 10) == ""
    assert format_value(True, 10) == "true"
    assert format_value(7, 10) == "7"
    assert format_value((0, 2), 10) == "0/2"
    assert format_value(mpf("0.5"), 5) == "0.50000"


def test_make_record_splits_complex_values():
    record = make_record("exceptional", "RPM", sector="even", lam=mpc(-2, 3), energy=mpc(1, -1))
    row = record.to_row(10)
    assert list(row) == COLUMNS
    assert row["lambda_re"].startswith("-2.0") and row["lambda_im"].startswith("3.0")
    assert row["energy_im"].startswith("-1.0")
    assert row["status"] == "ok"
    assert row["state"] == ""


def test_records_reject_unknown_kinds_and_fields():
    with pytest.raises(ValueError):
        ResultRecord("spectrum")
    with pytest.raises(ValueError):
        ResultRecord("critical", {"colour": "red"})


def test_any_failed():
    ok = make_record("hft", "RR", state=0)
    bad = make_record("critical", "RPM", state=0, status="disagree")
    assert not any_failed([ok])
    assert any_failed([ok, bad])


# ------------------------------------------------------------------ writers

def test_decimal_strings_reparse_at_working_precision():
    digits = 25
    with mp.workdps(digits):
        value = mpf(1) / 3
        row = make_record("critical", "RR", state=0, lam=value).to_row(digits)
        assert abs(mpf(row["lambda_re"]) - value) < mpf(10) ** -24


def test_jsonl_carries_metadata_first():
    stream = io.StringIO()
    metadata = build_metadata(["hft", "--n", "0"], 20, "1.0")
    write_jsonl([make_record("hft", "RR", state=0, residual_1=mpf("1e-9"))], 20, metadata,
                stream=stream)
    lines = stream.getvalue().splitlines()
    assert json.loads(lines[0])["metadata"]["precision"] == 20
    assert json.loads(lines[1])["kind"] == "hft"
    assert len(lines) == 2


def test_csv_metadata_goes_to_sidecar(tmp_path):
    path = str(tmp_path / "out.csv")
    metadata = build_metadata(["sweep"], 20, "1.0")
    write_csv([make_record("sweep_point", "PT", state=0, lam=0, energy=mpf("0.5"))], 20,
              metadata, path)
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    assert list(frame.columns) == COLUMNS
    assert "timestamp" not in frame.columns
    with open(path + ".meta.json", encoding="utf-8") as handle:
        assert json.load(handle)["command"] == ["sweep"]


def test_read_guides_keeps_successful_exceptional_points(tmp_path):
    path = tmp_path / "even.jsonl"
    lines = [
        {"metadata": {"precision": 50}},
        {"kind": "exceptional", "sector": "even", "branch": "0/2", "modulus": "3.330012076",
         "status": "ok"},
        {"kind": "exceptional", "sector": "even", "branch": "", "modulus": "", "status": "failed"},
    ]
    path.write_text("\n".join(json.dumps(line) for line in lines) + "\n", encoding="utf-8")
    guides = read_guides(str(path))
    assert guides == [{"sector": "even", "branch": "0/2", "modulus": "3.330012076"}]


# ----------------------------------------------------------------- commands

def test_resolve_digits_precedence(monkeypatch):
    monkeypatch.delenv(config.DIGITS_ENV_VAR, raising=False)
    assert config.resolve_digits("critical") == 50
    monkeypatch.setenv(config.DIGITS_ENV_VAR, "40")
    assert config.resolve_digits("critical") == 40
    assert config.resolve_digits("critical", 60) == 60
    monkeypatch.setenv(config.DIGITS_ENV_VAR, "-3")
    with pytest.raises(ValueError):
        config.resolve_digits("sweep")


def test_sweep_grid_includes_both_endpoints():
    request = SweepRequest("-1", "1", 5, (0,), ("rr",), 20)
    assert request.methods == ("RR",)
    grid = request.grid()
    assert len(grid) == 5
    assert grid[0] == -1 and grid[-1] == 1 and grid[2] == 0


def test_sweep_request_validation():
    with pytest.raises(InvalidInputError):
        SweepRequest("1", "-1", 5, (0,), ("RR",), 20)
    with pytest.raises(InvalidInputError):
        SweepRequest("-1", "1", 1, (0,), ("RR",), 20)
    with pytest.raises(InvalidInputError):
        SweepRequest("-1", "1", 5, (0,), ("WKB",), 20)


def test_argument_parsing_helpers():
    assert parse_list("0, 1,2", int) == (0, 1, 2)
    assert parse_box("-4,0,0,4") == ("-4", "0", "0", "4")
    with pytest.raises(InvalidInputError):
        parse_box("1,2,3")


# ------------------------------------------------------------------- engine

def test_sweep_point_skips_perturbation_theory_above_first_excited_state():
    records = Engine().sweep_point("0.5", [0, 2], ["PT"], 20)
    assert len(records) == 1
    assert records[0].payload["state"] == 0


def test_sweep_point_orders_records_by_state_then_method():
    records = Engine().sweep_point("1", [1, 0], ["PT", "RR"], 20)
    assert [(r.payload["state"], r.payload["method"]) for r in records] == [
        (1, "PT"), (1, "RR"), (0, "PT"), (0, "RR")]


def test_exceptional_records_merge_conjugate_pairs():
    point = ExceptionalPoint(Parity.EVEN, (0, 2), mpc(-2, -2), mpc(1, -1),
                             (mpf(0), mpf(0)), 20, 12)
    records = Engine().exceptional_records(
        "even", [point, point.conjugate(), ConvergenceError("no convergence")], 20)
    assert len(records) == 2
    row = records[0].to_row(20)
    assert row["conjugate_pair"] == "true"
    assert not row["lambda_im"].startswith("-")
    assert row["branch"] == "0/2"
    assert records[1].payload["status"] == "failed"


def test_critical_pt_record():
    records = Engine().critical(1, "pt", 30)
    assert len(records) == 1
    assert records[0].to_row(30)["lambda_re"].startswith("3.35")


def test_hft_record_carries_residual():
    record = Engine().hft(0, "1", 20)
    assert record.payload["status"] == "ok"
    assert record.payload["residual_1"] < 1e-8


# -------------------------------------------------------------- entry point

SWEEP_ARGS = ["-q", "sweep", "--lmin", "-1", "--lmax", "1", "--steps", "3", "--states", "0,1",
              "--methods", "RR,PT", "--digits", "20"]


@pytest.mark.integration
def test_sweep_writes_csv_to_stdout(capsys):
    assert main(SWEEP_ARGS) == 0
    frame = read_csv_text(capsys.readouterr().out)
    assert len(frame) == 3 * 2 * 2
    assert set(frame["method"]) == {"RR", "PT"}
    assert (frame["status"] == "ok").all()
    zero = frame[(frame["lambda_re"].map(lambda v: mpf(v) == 0)) & (frame["state"] == "0")]
    assert all(mpf(value) == mpf("0.5") for value in zero["energy_re"])


@pytest.mark.integration
def test_identical_command_lines_give_identical_data(capsys):
    main(SWEEP_ARGS)
    first = capsys.readouterr().out
    main(SWEEP_ARGS)
    assert capsys.readouterr().out == first


@pytest.mark.integration
def test_sweep_guides_land_in_metadata(tmp_path):
    guides = tmp_path / "even.jsonl"
    guides.write_text(json.dumps({"kind": "exceptional", "sector": "even", "branch": "0/2",
                                  "modulus": "3.33", "status": "ok"}) + "\n", encoding="utf-8")
    out = str(tmp_path / "sweep.csv")
    assert main(["-q", "sweep", "--lmin", "0", "--lmax", "1", "--steps", "2", "--states", "0",
                 "--methods", "PT", "--guides", str(guides), "--out", out]) == 0
    with open(out + ".meta.json", encoding="utf-8") as handle:
        metadata = json.load(handle)
    assert [entry["position"] for entry in metadata["guides"]] == ["-3.33", "+3.33"]


@pytest.mark.integration
def test_eps_with_empty_box_writes_no_rows(tmp_path):
    out = str(tmp_path / "eps.csv")
    assert main(["-q", "eps", "--sector", "odd", "--box", "1,1,0,2", "--digits", "20",
                 "--out", out]) == 0
    frame = pd.read_csv(out, dtype=str, keep_default_na=False)
    assert frame.empty and list(frame.columns) == COLUMNS


@pytest.mark.integration
def test_critical_pt_as_jsonl(capsys, monkeypatch):
    monkeypatch.delenv(config.DIGITS_ENV_VAR, raising=False)
    assert main(["-q", "critical", "--n", "0", "--method", "pt", "--format", "jsonl"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert json.loads(lines[0])["metadata"]["precision"] == 50
    assert json.loads(lines[1])["lambda_re"].startswith("0.684")


@pytest.mark.integration
def test_hft_command(tmp_path):
    out = str(tmp_path / "hft.jsonl")
    assert main(["-q", "hft", "--n", "1", "--lambda", "2", "--digits", "20", "--format", "jsonl",
                 "--out", out]) == 0
    with open(out, encoding="utf-8") as handle:
        row = json.loads(handle.read().splitlines()[1])
    assert row["kind"] == "hft" and mpf(row["residual_1"]) < 1e-8


@pytest.mark.parametrize("argv", [
    ["critical"],
    ["eps", "--sector", "even", "--box", "1,2,3"],
    ["sweep", "--methods", "WKB"],
    ["hft", "--n", "0", "--lambda", "1", "--digits", "5"],
])
def test_invalid_arguments_exit_with_two(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_help_describes_the_hamiltonian():
    assert "-½ d²/dx² + ½ x² - λ·exp(-x²)" in build_parser().description


def test_core_does_not_import_the_front_end():
    for path in Path(src.core.__file__).parent.glob("*.py"):
        tree = ast.parse(path.read_text(encoding="utf-8"))
        for node in ast.walk(tree):
            if isinstance(node, ast.ImportFrom):
                assert "cli" not in (node.module or "").split("."), path.name
            elif isinstance(node, ast.Import):
                assert not any(".cli" in alias.name for alias in node.names), path.name


# ------------------------------------------------------- reference values

@pytest.mark.slow
def test_critical_both_methods_agree_for_first_excited_state():
    records = Engine().critical(1, "both", 50)
    finals = [r for r in records if r.payload["status"] != STATUS_RUNG]
    assert [r.payload["method"] for r in finals] == ["RR", "RPM"]
    assert all(r.payload["status"] == "ok" for r in finals)
    with mp.workdps(50):
        expected = mpf(config.REFERENCE_VALUES['critical_lambda'][1])
        value = mpf(finals[1].to_row(50)["lambda_re"])
        assert abs(value - expected) < expected * mpf(10) ** -24


@pytest.mark.slow
@pytest.mark.parametrize("sector, box, index", [
    ("even", ("-4", "0", "0", "4"), 0),
    ("odd", ("-3", "1", "3", "8"), 1),
])
def test_exceptional_points_match_reference_values(sector, box, index):
    rows = [r.to_row(50) for r in cmd_eps(Engine(), sector, box, 50)
            if r.payload["status"] == "ok"]
    with mp.workdps(50):
        expected = to_scalar(config.REFERENCE_VALUES['exceptional_lambda'][index])
        found = [mpc(mpf(row["lambda_re"]), mpf(row["lambda_im"])) for row in rows]
        closest = min(range(len(found)), key=lambda i: abs(found[i] - expected))
        lam = found[closest]
        assert abs(lam.real - expected.real) < abs(expected.real) * mpf(10) ** -12
        assert abs(lam.imag - expected.imag) < abs(expected.imag) * mpf(10) ** -12
        modulus = mp.nstr(mpf(rows[closest]["modulus"]), 10)
    assert modulus == config.REFERENCE_VALUES['exceptional_modulus'][index]
