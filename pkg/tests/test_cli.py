"""End-to-end tests for the attribcalc command line."""

from __future__ import annotations

import io
import sys
from pathlib import Path

import pytest

import main as cli
from engine.calculus import equivalent
from engine.xml_document import parse_document
from main import EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, main
from tests.emerald import DATA, EMERALD_NS

SCHEMA = str(DATA / "emerald.xsd")
CONCEPT_C = str(DATA / "concept_c.xml")
CONCEPT_C_VL1 = "[headShape=round][jacketColor=red] v [headShape=square][holding=balloon]"

TWO_CONCEPTS = """<emerald>
  <concept name="notSword">
    <rule holding="balloon"/>
    <rule holding="flag"/>
  </concept>
  <concept name="c">
    <rule headShape="round" jacketColor="red"/>
    <rule headShape="square" holding="balloon"/>
  </concept>
  <concept name="nothing"/>
</emerald>
"""


def _write(tmp_path: Path, name: str, text: str) -> str:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def _run(capsys, *argv: str) -> tuple[int, list[str], str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.splitlines(), captured.err


class _Terminal(io.StringIO):
    def isatty(self) -> bool:
        return True


# ── schema ─────────────────────────────────────────────────────────────

class TestSchemaCommand:
    def test_definition_to_xsd(self, capsys):
        code, out, _ = _run(capsys, "schema", "--in", str(DATA / "emerald.universe"))
        assert code == EXIT_OK
        assert out[0] == '<?xml version="1.0" encoding="UTF-8"?>'
        assert '<xsd:attribute name="hasTie" type="HasTie"/>' in "\n".join(out)

    def test_writes_out_file(self, capsys, tmp_path):
        target = tmp_path / "emerald.xsd"
        code, out, _ = _run(capsys, "schema", "--in", SCHEMA, "--out", str(target))
        assert code == EXIT_OK
        assert out == []
        assert "<xsd:simpleType name=\"Color\">" not in target.read_text(encoding="utf-8")
        assert "<xsd:simpleType name=\"JacketColor\">" in target.read_text(encoding="utf-8")

    def test_duplicate_attribute(self, capsys, tmp_path):
        source = _write(tmp_path, "bad.universe", "universe: toy\na: x\na: y\n")
        code, out, err = _run(capsys, "schema", "--in", source)
        assert code == EXIT_USAGE
        assert out == []
        assert "duplicate attribute 'a'" in err

    def test_missing_input(self, capsys, tmp_path):
        code, _, err = _run(capsys, "schema", "--in", str(tmp_path / "absent.universe"))
        assert code == EXIT_USAGE
        assert err.startswith("error:")


# ── validate ───────────────────────────────────────────────────────────

class TestValidateCommand:
    def test_valid(self, capsys):
        code, out, _ = _run(capsys, "validate", "--schema", SCHEMA, "--in", CONCEPT_C)
        assert code == EXIT_OK
        assert out == ["VALID"]

    def test_invalid(self, capsys, tmp_path):
        doc = _write(tmp_path, "bad.xml", '<emerald><concept><rule jacketColor="purple"/></concept></emerald>')
        code, out, _ = _run(capsys, "validate", "--schema", SCHEMA, "--in", doc)
        assert code == EXIT_NEGATIVE
        assert out[0].startswith("ERROR /emerald/concept[1]/rule[1]/@jacketColor value-out-of-range")
        assert out[-1] == "INVALID (1 errors)"

    def test_warnings_do_not_invalidate(self, capsys, tmp_path):
        doc = _write(tmp_path, "empty.xml", "<emerald><concept/></emerald>")
        code, out, _ = _run(capsys, "validate", "--schema", SCHEMA, "--in", doc)
        assert code == EXIT_OK
        assert out[0].startswith("WARNING")
        assert out[-1] == "VALID"

    def test_truncated_xml(self, capsys, tmp_path):
        doc = _write(tmp_path, "broken.xml", "<emerald><concept>")
        code, out, err = _run(capsys, "validate", "--schema", SCHEMA, "--in", doc)
        assert code == EXIT_USAGE
        assert out == []
        assert "malformed XML" in err

    def test_xsd_reports_schema_violations(self, capsys, tmp_path):
        doc = _write(
            tmp_path, "purple.xml",
            f'<emerald xmlns="{EMERALD_NS}"><concept><rule jacketColor="purple"/></concept></emerald>',
        )
        code, out, _ = _run(capsys, "validate", "--schema", SCHEMA, "--in", doc, "--xsd")
        assert code == EXIT_NEGATIVE
        assert any(" value-out-of-range: " in line for line in out)
        assert any(" schema-violation: " in line for line in out)
        assert out[-1].startswith("INVALID")

    def test_xsd_accepts_lowered_document(self, capsys, tmp_path):
        lowered = tmp_path / "lowered.xml"
        assert main(["lower", "--schema", SCHEMA, CONCEPT_C_VL1, "--out", str(lowered)]) == EXIT_OK
        code, out, _ = _run(capsys, "validate", "--schema", SCHEMA, "--in", str(lowered), "--xsd")
        assert (code, out) == (EXIT_OK, ["VALID"])

    def test_color_on_terminal(self, monkeypatch, tmp_path):
        doc = _write(tmp_path, "empty.xml", "<emerald><concept/></emerald>")
        terminal = _Terminal()
        monkeypatch.setattr(sys, "stdout", terminal)
        monkeypatch.setattr(cli.settings, "no_color", False)
        assert main(["validate", "--schema", SCHEMA, "--in", doc]) == EXIT_OK
        assert terminal.getvalue().startswith("\x1b[33mWARNING\x1b[0m /emerald/concept[1] empty-concept")

    def test_no_color_setting_wins_on_terminal(self, monkeypatch, tmp_path):
        doc = _write(tmp_path, "empty.xml", "<emerald><concept/></emerald>")
        terminal = _Terminal()
        monkeypatch.setattr(sys, "stdout", terminal)
        monkeypatch.setattr(cli.settings, "no_color", True)
        assert main(["validate", "--schema", SCHEMA, "--in", doc]) == EXIT_OK
        assert "\x1b[" not in terminal.getvalue()
        assert terminal.getvalue().startswith("WARNING /emerald/concept[1] empty-concept")

    def test_use_color(self, monkeypatch):
        monkeypatch.setattr(cli.settings, "no_color", False)
        assert cli._use_color(_Terminal())
        assert not cli._use_color(io.StringIO())
        monkeypatch.setattr(cli.settings, "no_color", True)
        assert not cli._use_color(_Terminal())


# ── count / match / enumerate ──────────────────────────────────────────

class TestCountCommand:
    def test_concept_c(self, capsys):
        assert _run(capsys, "count", "--schema", SCHEMA, "--in", CONCEPT_C)[:2] == (EXIT_OK, ["84/432"])

    def test_empty_and_full(self, capsys, tmp_path):
        doc = _write(tmp_path, "two.xml", "<emerald><concept/><concept><rule/></concept></emerald>")
        assert _run(capsys, "count", "--schema", SCHEMA, "--in", doc)[1] == ["0/432"]
        assert _run(capsys, "count", "--schema", SCHEMA, "--in", doc, "--concept", "1")[1] == ["432/432"]

    def test_streaming_count_agrees(self, capsys):
        code, out, _ = _run(capsys, "count", "--schema", SCHEMA, "--in", CONCEPT_C, "--ie-rule-limit", "1")
        assert (code, out) == (EXIT_OK, ["84/432"])

    def test_invalid_document_is_a_usage_error(self, capsys, tmp_path):
        doc = _write(tmp_path, "bad.xml", '<emerald><concept><rule antenna="yes"/></concept></emerald>')
        code, _, err = _run(capsys, "count", "--schema", SCHEMA, "--in", doc)
        assert code == EXIT_USAGE
        assert "undeclared-attribute" in err

    def test_unknown_concept(self, capsys):
        code, _, err = _run(capsys, "count", "--schema", SCHEMA, "--in", CONCEPT_C, "--concept", "missing")
        assert code == EXIT_USAGE
        assert "missing" in err


class TestMatchCommand:
    def test_positive(self, capsys):
        code, out, _ = _run(capsys, "match", "--schema", SCHEMA, "--in", CONCEPT_C, "round,round,true,sword,red,yes")
        assert (code, out) == (EXIT_OK, ["positive"])

    def test_negative(self, capsys):
        code, out, _ = _run(capsys, "match", "--schema", SCHEMA, "--in", CONCEPT_C, "octagon,round,true,sword,red,yes")
        assert (code, out) == (EXIT_NEGATIVE, ["negative"])

    def test_value_out_of_range(self, capsys):
        code, out, err = _run(
            capsys, "match", "--schema", SCHEMA, "--in", CONCEPT_C, "round,round,true,sword,crimson,yes"
        )
        assert code == EXIT_USAGE
        assert out == []
        assert "crimson" in err


class TestEnumerateCommand:
    def test_concept_c(self, capsys):
        code, out, _ = _run(capsys, "enumerate", "--schema", SCHEMA, "--in", CONCEPT_C)
        assert code == EXIT_OK
        assert len(out) == 84
        assert out[0] == "round,round,true,sword,red,yes"
        assert len(set(out)) == 84

    def test_csv_header(self, capsys):
        _, out, _ = _run(capsys, "enumerate", "--schema", SCHEMA, "--in", CONCEPT_C, "--format", "csv")
        assert out[0] == "headShape,bodyShape,isSmiling,holding,jacketColor,hasTie"
        assert len(out) == 85


# ── equiv ──────────────────────────────────────────────────────────────

class TestEquivCommand:
    def test_not_equal_matches_explicit_rules(self, capsys, tmp_path):
        lowered = tmp_path / "lowered.xml"
        assert main(["lower", "--schema", SCHEMA, "[holding<>sword]", "--out", str(lowered)]) == EXIT_OK
        explicit = _write(tmp_path, "two.xml", TWO_CONCEPTS)
        code, out, _ = _run(
            capsys, "equiv", "--schema", SCHEMA, "--in", str(lowered),
            "--other-in", explicit, "--other-concept", "notSword",
        )
        assert (code, out) == (EXIT_OK, ["equivalent"])

    def test_differ_prints_first_witness(self, capsys, tmp_path):
        doc = _write(tmp_path, "two.xml", TWO_CONCEPTS)
        code, out, _ = _run(
            capsys, "equiv", "--schema", SCHEMA, "--in", doc, "--concept", "c", "--other-concept", "nothing"
        )
        assert code == EXIT_NEGATIVE
        assert out == ["differ", "round,round,true,sword,red,yes"]

    def test_same_concept_in_two_files(self, capsys, tmp_path):
        doc = _write(tmp_path, "two.xml", TWO_CONCEPTS)
        code, out, _ = _run(
            capsys, "equiv", "--schema", SCHEMA, "--in", CONCEPT_C, "--other-in", doc, "--other-concept", "c"
        )
        assert (code, out) == (EXIT_OK, ["equivalent"])

    def test_missing_other_file(self, capsys, tmp_path):
        code, _, _ = _run(
            capsys, "equiv", "--schema", SCHEMA, "--in", CONCEPT_C,
            "--other-in", str(tmp_path / "absent.xml"), "--other-concept", "0",
        )
        assert code == EXIT_USAGE


# ── dataset ────────────────────────────────────────────────────────────

class TestDatasetCommand:
    def test_concept_c(self, capsys):
        code, out, _ = _run(capsys, "dataset", "--schema", SCHEMA, "--in", CONCEPT_C)
        assert code == EXIT_OK
        assert out[0] == "headShape,bodyShape,isSmiling,holding,jacketColor,hasTie,label"
        assert len(out) == 433
        assert sum(line.endswith(",positive") for line in out[1:]) == 84
        assert out[1] == "round,round,true,sword,red,yes,positive"

    def test_zero_attribute_universe(self, capsys, tmp_path):
        universe = _write(tmp_path, "nothing.universe", "universe: nothing\n")
        doc = _write(tmp_path, "nothing.xml", "<nothing><concept><rule/></concept></nothing>")
        code, out, _ = _run(capsys, "dataset", "--schema", universe, "--in", doc)
        assert code == EXIT_OK
        assert out == ["label", "positive"]


# ── lower ──────────────────────────────────────────────────────────────

class TestLowerCommand:
    def test_reproduces_concept_c(self, capsys, tmp_path):
        definition = (DATA / "emerald.universe").read_text(encoding="utf-8")
        plain = "\n".join(line for line in definition.splitlines() if not line.startswith("namespace:"))
        universe = _write(tmp_path, "emerald.universe", plain)
        code = main(["lower", "--schema", universe, CONCEPT_C_VL1])
        assert code == EXIT_OK
        assert capsys.readouterr().out == (DATA / "concept_c.xml").read_text(encoding="utf-8")

    def test_namespace_and_name(self, capsys, concept_c, emerald):
        code = main(["lower", "--schema", SCHEMA, CONCEPT_C_VL1, "--name", "C"])
        assert code == EXIT_OK
        doc = parse_document(capsys.readouterr().out)
        assert doc.namespace == emerald.namespace
        assert doc.concepts[0].name == "C"
        assert equivalent(doc.concepts[0], concept_c, emerald)

    def test_single_selector(self, capsys):
        main(["lower", "--schema", SCHEMA, "[hasTie=yes]"])
        out = capsys.readouterr().out
        assert out.count("<rule") == 1
        assert '<rule hasTie="yes"/>' in out

    def test_not_equal_expands(self, capsys):
        main(["lower", "--schema", SCHEMA, "[holding<>sword]"])
        out = capsys.readouterr().out
        assert out.count("<rule") == 2
        assert '<rule holding="balloon"/>' in out
        assert '<rule holding="flag"/>' in out

    def test_expansion_limit(self, capsys):
        code, _, err = _run(capsys, "lower", "--schema", SCHEMA, "[holding<>sword]", "--expansion-limit", "1")
        assert code == EXIT_USAGE
        assert "limit 1" in err

    @pytest.mark.parametrize("expression", ["[hasTie=yes", "[antenna=yes]"])
    def test_bad_expression(self, capsys, expression):
        assert _run(capsys, "lower", "--schema", SCHEMA, expression)[0] == EXIT_USAGE
