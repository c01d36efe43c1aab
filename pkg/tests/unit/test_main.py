"""
Unit tests for the command line entry point
"""

import json

import pytest

from src.core.main import (
    EXIT_ARGUMENT,
    EXIT_CHECK_FAILED,
    EXIT_INTERNAL,
    EXIT_IO,
    EXIT_OK,
    cmd_cohom_cert,
    cmd_lemma25,
    cmd_slopes,
    main,
    render,
)
from src.core.errors import ContractViolation
from src.models import ReportDocument


def _run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


class TestCommands:
    """Test command functions directly"""

    def test_slopes_document(self):
        doc = cmd_slopes(5, 2, 1, 2, 3)
        row = doc.results[0]
        assert doc.ok
        assert row["case_tag"] == "HIGH_RANK"
        assert row["gap"] == "4/5"
        assert row["composition_ok"] is True
        assert doc.parameters == {"p": 5, "g": 2, "n": 1, "r": 2, "d": 3}
        assert [f["name"] for f in row["filtrations"]] == ["canonical", "pushforward_tensor"]
        assert all(f["conserved"] for f in row["filtrations"])

    def test_cohom_cert_document(self):
        doc = cmd_cohom_cert(3, 2, 2)
        assert doc.results[0]["d"] == 1
        assert doc.results[0]["valid"] is True

    def test_lemma25_document(self):
        doc = cmd_lemma25(20)
        assert [r["p"] for r in doc.results] == [2, 3, 5, 7, 11, 13, 17, 19]
        assert doc.ok

    def test_render_rows(self):
        doc = ReportDocument(command="x", results=[{"a": 1}], failures=[{"check": "c"}])
        lines = render(doc, "rows").splitlines()
        assert lines[0] == "kind,a,check"
        assert lines[1] == "result,1,"
        assert lines[2] == "failure,,c"


class TestMain:
    """Test exit codes and output"""

    def test_verify_local_ok(self, capsys):
        code, out = _run(capsys, ["verify-local", "--p", "3", "--seed", "7"])
        assert code == EXIT_OK
        data = json.loads(out)
        assert data["command"] == "verify-local"
        assert data["failures"] == []

    def test_verify_local_deterministic(self, capsys):
        _, first = _run(capsys, ["verify-local", "--p", "5", "--r", "2", "--seed", "3"])
        _, second = _run(capsys, ["verify-local", "--p", "5", "--r", "2", "--seed", "3"])
        assert first == second

    def test_composite_prime_is_argument_error(self, capsys):
        code, out = _run(capsys, ["verify-local", "--p", "4"])
        assert code == EXIT_ARGUMENT
        assert out == ""

    def test_prime_above_limit(self, capsys):
        code, _ = _run(capsys, ["verify-local", "--p", "17"])
        assert code == EXIT_ARGUMENT

    def test_unknown_subcommand(self, capsys):
        code, _ = _run(capsys, ["frobnicate"])
        assert code == EXIT_ARGUMENT

    def test_cohom_cert_level_one(self, capsys):
        code, _ = _run(capsys, ["cohom-cert", "--p", "3", "--g", "2", "--n", "1"])
        assert code == EXIT_ARGUMENT

    def test_slopes_rows(self, capsys):
        code, out = _run(
            capsys,
            ["slopes", "--p", "3", "--g", "2", "--n", "1", "--r", "1", "--d", "0", "--format", "rows"],
        )
        assert code == EXIT_OK
        header, row = out.splitlines()[:2]
        assert header.startswith("kind,case_tag")
        assert "LINE_ODD" in row

    def test_sweep_summary_default(self, capsys):
        code, out = _run(
            capsys,
            ["sweep", "--pmax", "3", "--nmax", "2", "--rmax", "2", "--gmax", "3", "--dmax", "1"],
        )
        assert code == EXIT_OK
        summary = json.loads(out)["results"][0]
        assert summary["points"] == 2 * 2 * 2 * 2 * 3
        assert summary["failures"] == 0
        assert summary["boundary_gaps"] == ["0"]

    def test_out_file(self, capsys, temp_output_dir):
        target = temp_output_dir / "cert.json"
        code, out = _run(
            capsys,
            ["cohom-cert", "--p", "2", "--g", "2", "--n", "2", "--out", str(target)],
        )
        assert code == EXIT_OK
        assert json.loads(target.read_text(encoding="utf-8"))["results"][0]["valid"] is True
        assert json.loads(out)["results"] == [{"rows": 1, "failures": 0}]

    def test_unwritable_out(self, capsys, temp_output_dir):
        blocker = temp_output_dir / "file"
        blocker.write_text("x", encoding="utf-8")
        code, _ = _run(
            capsys,
            ["lemma25", "--pmax", "5", "--out", str(blocker / "nested" / "out.json")],
        )
        assert code == EXIT_IO

    def test_check_failure_exit_code(self, capsys, monkeypatch):
        monkeypatch.setattr("src.core.main.check_lemma25", lambda p: p != 3)
        code, out = _run(capsys, ["lemma25", "--pmax", "5"])
        assert code == EXIT_CHECK_FAILED
        assert json.loads(out)["failures"] == [{"check": "lemma25", "p": 3}]

    def test_internal_error_exit_code(self, capsys, monkeypatch):
        def broken(*args, **kwargs):
            raise ContractViolation("broken")

        monkeypatch.setattr("src.core.main.cohom_certificate", broken)
        code, _ = _run(capsys, ["cohom-cert", "--p", "3", "--g", "2", "--n", "2"])
        assert code == EXIT_INTERNAL

    @pytest.mark.parametrize("fmt", ["document", "rows", "summary"])
    def test_corollary_formats(self, capsys, fmt):
        code, out = _run(
            capsys,
            ["corollary", "--pmax", "3", "--nmax", "2", "--gmax", "2", "--dmax", "1", "--format", fmt],
        )
        assert code == EXIT_OK
        assert out

    def test_sweep_single_point(self, capsys):
        code, out = _run(
            capsys,
            ["sweep", "--pmax", "2", "--nmax", "1", "--rmax", "1", "--gmax", "2", "--dmax", "0"],
        )
        assert code == EXIT_OK
        summary = json.loads(out)["results"][0]
        assert summary["points"] == 1
        assert summary["destabilized"] == 0
        assert summary["cases"]["LINE_CHAR2"] == 1

    def test_verify_local_char_two_symmetry_row(self, capsys):
        code, out = _run(capsys, ["verify-local", "--p", "2"])
        assert code == EXIT_OK
        rows = {row["check"]: row for row in json.loads(out)["results"]}
        details = rows["symmetry_classification"]["details"]
        assert details["subtop_symmetric_k"] == [0]

    def test_line_char2_slopes(self, capsys):
        code, out = _run(
            capsys, ["slopes", "--p", "2", "--g", "3", "--n", "3", "--r", "1", "--d", "7"]
        )
        assert code == EXIT_OK
        row = json.loads(out)["results"][0]
        assert row["gap"] == "3/2"
        assert row["destabilized"] is True
