from __future__ import annotations

import json

import jsonschema
import pytest
from click.testing import CliRunner

from quaplectic.cli import REPORT_SCHEMA, SUITES, main, read_config_file


@pytest.fixture
def runner():
    return CliRunner()


def run(runner, *args):
    return runner.invoke(main, list(args), catch_exceptions=False)


def test_verify_jacobi_example(runner):
    res = run(runner, "verify", "--suite", "jacobi", "--preset", "C(1,3)")
    assert res.exit_code == 0
    report = json.loads(res.output)
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["ok"] and report["command"] == "verify jacobi"


def test_verify_central_quartic_example(runner):
    res = run(runner, "verify", "--suite", "central", "--preset", "C(2)", "--order", "4")
    assert res.exit_code == 0


@pytest.mark.parametrize(
    "args",
    [
        ("--suite", "w-relations", "--preset", "C(1,2)"),
        ("--suite", "fock-brackets", "--preset", "C(1,2)-real-n", "--nmax", "6"),
        ("--suite", "fock-brackets", "--preset", "C(2)", "--nmax", "6"),
        ("--suite", "gt-brackets"),
        ("--suite", "reductions", "--nmax", "6"),
    ],
)
def test_shipped_suites_pass(runner, args):
    res = run(runner, "verify", *args)
    assert res.exit_code == 0, res.output
    jsonschema.validate(json.loads(res.output), REPORT_SCHEMA)


def test_printed_coefficients_fail_the_reduction_suite(runner):
    res = run(runner, "verify", "--suite", "reductions", "--nmax", "6", "--coefficients", "printed")
    assert res.exit_code == 1
    report = json.loads(res.output)
    assert not report["ok"] and any(not r["ok"] for r in report["results"])


@pytest.mark.parametrize(
    "args",
    [
        ("verify", "--preset", "C(9,x)"),
        ("verify", "--suite", "bogus"),
        ("verify", "--s", "1"),
        ("verify", "--s", "two"),
        ("verify", "--nmax", "-1"),
        ("spectrum", "--label", "0,1"),
        ("spectrum", "--preset", "poincare(1,3)"),
        ("dump",),
        ("dump", "--gt"),
    ],
)
def test_invalid_configuration_exits_2(runner, args):
    assert run(runner, *args).exit_code == 2


def test_unwritable_output_exits_1(runner):
    res = run(runner, "dump", "--preset", "C(1)", "-o", "/nonexistent-dir/out.json")
    assert res.exit_code == 1
    assert "cannot write" in res.output


def test_spectrum_compact_example(runner):
    res = run(runner, "spectrum", "--preset", "C(2)", "--s", "2", "--label", "0,0", "--nmax", "8")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    jsonschema.validate(payload, REPORT_SCHEMA)
    blocks = payload["spectra"]["C2"]["blocks"]
    assert blocks[0]["grade"] == 0 and blocks[0]["eigenvalues"] == pytest.approx([2.0], abs=1e-12)
    for b in blocks:
        assert b["eigenvalues"] == pytest.approx([2 * b["grade"] + 2] * b["dim"], abs=1e-10)


def test_spectrum_noncompact_example(runner):
    res = run(runner, "spectrum", "--preset", "C(1,3)", "--s", "2")
    assert res.exit_code == 0
    blocks = json.loads(res.output)["spectra"]["C2"]["blocks"]
    assert any(b["grade"] < 0 for b in blocks)
    for b in blocks:
        assert b["eigenvalues"] == pytest.approx([2 * b["grade"] + 2] * b["dim"], abs=1e-10)


def test_spectrum_zero_truncation(runner):
    res = run(runner, "spectrum", "--preset", "C(2)", "--nmax", "0")
    blocks = json.loads(res.output)["spectra"]["C2"]["blocks"]
    assert len(blocks) == 1 and blocks[0]["dim"] == 1


def test_spectrum_with_c4_and_formats(runner):
    base = ("spectrum", "--preset", "C(2)", "--label", "1,0", "--nmax", "4", "--with-c4")
    data = json.loads(run(runner, *base).output)
    assert set(data["spectra"]) == {"C2", "C4"}
    md = run(runner, *base, "--format", "md").output
    assert md.startswith("## C2") and "## C4" in md
    csv_text = run(runner, *base, "--format", "csv").output
    assert csv_text.splitlines()[:2] == ["# C2", "grade,index,eigenvalue"]


def test_dump_is_byte_stable(runner, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(runner, "dump", "--preset", "poincare(1,3)", "-o", str(a))
    run(runner, "dump", "--preset", "poincare(1,3)", "-o", str(b))
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert data["name"] and len(data["basis"]) == 10


def test_dump_formats(runner):
    csv_text = run(runner, "dump", "--preset", "C(1)", "--format", "csv").output
    assert csv_text.splitlines()[0] == "a,b,coeff,target"
    md = run(runner, "dump", "--preset", "C(1)", "--format", "md").output
    assert md.startswith("# ") and "| [a, b] | coeff | target |" in md


def test_dump_gt_spin_half(runner):
    data = json.loads(run(runner, "dump", "--gt", "--label", "1,0").output)
    assert data["dim"] == 2
    assert data["matrices"]["Z12"] == [[0, 1, "1"]]
    assert data["matrices"]["Z21"] == [[1, 0, "1"]]
    md = run(runner, "dump", "--gt", "--label", "1,0", "--format", "md").output
    assert "## Z12" in md


def test_config_file_precedence(runner, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nsuite = central\npreset = C(1)\nnmax = 4\n")
    assert read_config_file(str(cfg)) == {"suite": "central", "preset": "C(1)", "nmax": "4"}
    res = run(runner, "verify", "--config", str(cfg))
    assert json.loads(res.output)["config"]["preset"] == "C(1)"
    res = run(runner, "verify", "--config", str(cfg), "--preset", "C(2)")
    report = json.loads(res.output)
    assert report["config"]["preset"] == "C(2)" and report["config"]["suite"] == "central"


def test_config_file_unknown_key(runner, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run(runner, "verify", "--config", str(cfg)).exit_code == 2


def test_verify_markdown_and_csv(runner):
    md = run(runner, "verify", "--preset", "C(1)", "--format", "md").output
    assert "| jacobi C(1) | pass | max_residual=0; triples=4 |" in md
    csv_text = run(runner, "verify", "--preset", "C(1)", "--format", "csv").output
    assert csv_text.splitlines() == ["check,status,detail", "jacobi C(1),pass,max_residual=0; triples=4"]


def test_suite_names_are_stable():
    assert SUITES == ("jacobi", "central", "w-relations", "fock-brackets", "gt-brackets", "reductions")
