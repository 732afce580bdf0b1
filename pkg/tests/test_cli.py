"""
Tests for the command-line interface: exit codes and output formats.
"""

import json
import logging

import pytest

from cli import EXIT_ERRORS, EXIT_OK, EXIT_USAGE, main
from config import settings
from corpus import load_manifest, required_paths
from pipeline import SOURCE_SUFFIXES, TypecheckOrchestrator
from syntax import literate
from tests.conftest import PRELUDE

GOOD = PRELUDE + "\n#def A0 : U := U → U\n"
BAD = "#lang rzk-1\n#def bad : U := nowhere\n#def good : U := U\n"


@pytest.fixture
def good_file(tmp_path):
    path = tmp_path / "good.rzk"
    path.write_text(GOOD, encoding="utf-8")
    return str(path)


@pytest.fixture
def bad_file(tmp_path):
    path = tmp_path / "bad.rzk"
    path.write_text(BAD, encoding="utf-8")
    return str(path)


@pytest.fixture(autouse=True)
def restore_bound(monkeypatch):
    # --max-cube-vars writes through to the shared settings object
    monkeypatch.setattr(settings, "max_cube_vars", settings.max_cube_vars)


def json_lines(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


class TestTypecheck:
    """Test the typecheck command."""

    def test_clean_file(self, good_file, capsys):
        assert main(["typecheck", "--no-color", good_file]) == EXIT_OK
        out = capsys.readouterr().out
        assert "✓ hom" in out
        assert "Summary: 7 checked, 0 failed, 0 errors, 0 warnings" in out

    def test_errors_exit_one(self, bad_file, capsys):
        """Test that one failed declaration fails the run but not the file."""
        assert main(["typecheck", "--no-color", bad_file]) == EXIT_ERRORS
        out = capsys.readouterr().out
        assert "✗ bad" in out
        assert "error[E-UNBOUND]" in out
        assert "✓ good" in out

    def test_machine_output(self, bad_file, capsys):
        """Test that --machine emits only JSON lines, summary last."""
        assert main(["typecheck", "--machine", "--no-timing", bad_file]) == EXIT_ERRORS
        records = json_lines(capsys.readouterr().out)
        assert records[0]["code"] == "E-UNBOUND"
        assert records[0]["location"]["line"] == 2
        assert records[-1] == {"summary": True, "checked": 1, "failed": 1, "errors": 1, "warnings": 0}

    def test_machine_output_is_deterministic(self, good_file, bad_file, capsys):
        main(["typecheck", "--machine", "--no-timing", good_file, bad_file])
        first = capsys.readouterr().out
        main(["typecheck", "--machine", "--no-timing", good_file, bad_file])
        assert capsys.readouterr().out == first

    @pytest.mark.slow
    def test_corpus_output_is_deterministic(self, capsys):
        """Test two machine runs over the Required library for identical output."""
        paths = required_paths(load_manifest())
        assert main(["typecheck", "--machine", "--no-timing", *paths]) == EXIT_OK
        first = capsys.readouterr().out
        assert main(["typecheck", "--machine", "--no-timing", *paths]) == EXIT_OK
        assert capsys.readouterr().out == first
        assert json_lines(first)[-1]["errors"] == 0

    def test_files_are_concatenated(self, good_file, tmp_path, capsys):
        """Test that later files see the declarations of earlier ones."""
        later = tmp_path / "later.rzk"
        later.write_text("#def B0 : U := A0\n", encoding="utf-8")
        assert main(["typecheck", good_file, str(later)]) == EXIT_OK
        assert main(["typecheck", str(later)]) == EXIT_ERRORS

    def test_missing_file(self, tmp_path, capsys):
        assert main(["typecheck", str(tmp_path / "absent.rzk")]) == EXIT_USAGE
        assert "E-IO" in capsys.readouterr().err

    def test_wrong_suffix(self, tmp_path, capsys):
        path = tmp_path / "notes.txt"
        path.write_text("", encoding="utf-8")
        assert main(["typecheck", str(path)]) == EXIT_USAGE
        assert "E-USAGE" in capsys.readouterr().err


class TestOrchestrator:
    """Test the pipeline shared by the CLI and the service."""

    def test_suffixes_match_literate_detection(self, tmp_path):
        """Test that every accepted suffix loads, literate files included."""
        assert SOURCE_SUFFIXES is literate.SOURCE_SUFFIXES
        path = tmp_path / "notes.rzk.md"
        path.write_text("# Notes\n\n```rzk\n#def A0 : U := U\n```\n", encoding="utf-8")
        report, env = TypecheckOrchestrator().typecheck_paths([str(path)])
        assert report.errors == 0
        assert "A0" in env

    def test_entailment_cache_is_logged(self, good_file, caplog):
        with caplog.at_level(logging.DEBUG, logger="topes.solver"):
            TypecheckOrchestrator().typecheck_paths([good_file])
        assert "Entailment cache:" in caplog.text


class TestUsage:
    """Test argument handling."""

    def test_no_command(self, capsys):
        assert main([]) == EXIT_USAGE

    def test_unknown_command(self, capsys):
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_typecheck_needs_paths(self, capsys):
        assert main(["typecheck"]) == EXIT_USAGE

    def test_version(self, capsys):
        assert main(["--version"]) == EXIT_OK
        assert settings.app_version in capsys.readouterr().out


class TestNormalize:
    """Test the normalize command."""

    def test_unfolds_definitions(self, good_file, capsys):
        assert main(["normalize", "--no-color", "--show-type", "A0", good_file]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "U → U"
        assert lines[1] == ": U"

    def test_machine(self, good_file, capsys):
        assert main(["normalize", "--machine", "hom", good_file]) == EXIT_OK
        record = json_lines(capsys.readouterr().out)[0]
        assert record["type"] == "(A : U) → A → A → U"

    def test_ill_typed_expression(self, good_file, capsys):
        assert main(["normalize", "--machine", "A0 U", good_file]) == EXIT_ERRORS
        assert json_lines(capsys.readouterr().out)[0]["code"] == "E-NOT-FUNCTION"

    def test_context_with_errors(self, bad_file, capsys):
        assert main(["normalize", "good", bad_file]) == EXIT_ERRORS


class TestTope:
    """Test the tope command."""

    def test_entailed(self, capsys):
        assert main(["tope", "--no-color", "t s | s ≤ t ∧ t ≡ 0₂ |- s ≡ 0₂"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "ENTAILED"

    def test_not_entailed_with_countermodel(self, capsys):
        """Test that a negative answer still exits 0."""
        assert main(["tope", "--no-color", "t | |- t ≡ 0₂ ∨ t ≡ 1₂"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "NOT-ENTAILED" in out
        assert "countermodel: 0 = ∅ < {t} < 1" in out

    def test_machine(self, capsys):
        assert main(["tope", "--machine", "t s | s <= t |- s <= t"]) == EXIT_OK
        assert json_lines(capsys.readouterr().out) == [{"entailed": True, "countermodel": None}]

    def test_malformed_query(self, capsys):
        assert main(["tope", "t s s ≤ t"]) == EXIT_USAGE
        assert "E-PARSE" in capsys.readouterr().err

    def test_bound_exceeded(self, capsys):
        assert main(["tope", "--machine", "--max-cube-vars", "2", "a b c | |- a ≤ b"]) == EXIT_ERRORS
        assert json_lines(capsys.readouterr().out)[0]["code"] == "E-TOPE-BOUND"


class TestParse:
    """Test the parse command."""

    def test_print_back(self, good_file, capsys):
        assert main(["parse", good_file]) == EXIT_OK
        out = capsys.readouterr().out
        assert "#def A0\n  : U\n  := U → U" in out
        assert out.startswith("#lang rzk-1")

    def test_dump_ast(self, good_file, capsys):
        """Test that the structural dump is stable across runs."""
        assert main(["parse", "--dump-ast", good_file]) == EXIT_OK
        first = capsys.readouterr().out
        assert main(["parse", "--dump-ast", good_file]) == EXIT_OK
        assert capsys.readouterr().out == first
        assert "Define" in first

    def test_parse_error(self, tmp_path, capsys):
        path = tmp_path / "broken.rzk"
        path.write_text("#def x : U :=\n", encoding="utf-8")
        assert main(["parse", "--machine", str(path)]) == EXIT_ERRORS
        assert json_lines(capsys.readouterr().out)[0]["code"] == "E-PARSE"
