"""Tests for the sb command-line interface."""
import json

import pytest
from click.testing import CliRunner

from sb_engine.cli import cli
from sb_engine.core.document import parse_instance, render_instance
from sb_engine.core.models import Mode

from .conftest import doubling_instance, finite, non_stopper_instance, successor_instance


@pytest.fixture(name="runner")
def runner_fixture():
    return CliRunner()


@pytest.fixture(name="write_doc")
def write_doc_fixture(tmp_path):
    """Write an instance document and return its path."""

    def write(inst=None, name="instance.json", text=None):
        path = tmp_path / name
        path.write_text(text if text is not None else render_instance(inst), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture(name="successor_doc")
def successor_doc_fixture(write_doc):
    return write_doc(successor_instance(), "successor.json")


@pytest.fixture(name="two_cycle_doc")
def two_cycle_doc_fixture(write_doc, two_cycle):
    return write_doc(two_cycle, "two_cycle.json")


@pytest.fixture(name="invalid_doc")
def invalid_doc_fixture(write_doc):
    inst = finite({"a", "b"}, {"x", "y"}, {"a": "x", "b": "x"}, {"x": "a", "y": "b"})
    return write_doc(inst, "invalid.json")


def test_validate_valid(runner, successor_doc):
    result = runner.invoke(cli, ["validate", successor_doc])
    assert result.exit_code == 0
    assert result.output.strip() == "valid"


def test_validate_invalid(runner, invalid_doc):
    result = runner.invoke(cli, ["validate", invalid_doc])
    assert result.exit_code == 1
    assert "[not-injective] f not injective: 'a' and 'b' both map to 'x'" in result.output


def test_validate_json(runner, invalid_doc):
    result = runner.invoke(cli, ["validate", "--json", invalid_doc])
    assert result.exit_code == 1
    report = json.loads(result.output)
    assert report["violations"][0]["kind"] == "not-injective"


def test_parse_error_location(runner, write_doc):
    text = '{\n  "mode": "finite",\n  "p": ["a"],\n  "q": ["x"],\n  "f": {"a": "x", "a": "y"},\n  "g": {"x": "a"}\n}\n'
    path = write_doc(name="dup.json", text=text)
    result = runner.invoke(cli, ["validate", path])
    assert result.exit_code == 2
    assert f"{path}:5:19: duplicate key 'a'" in result.output


def test_undecodable_document(runner, tmp_path):
    path = tmp_path / "binary.json"
    path.write_bytes(b"\xff\xfe{")
    result = runner.invoke(cli, ["validate", str(path)])
    assert result.exit_code == 2
    assert f"{path}:1:1: not valid UTF-8" in result.output


def test_witness(runner, successor_doc):
    result = runner.invoke(cli, ["witness", successor_doc, "--value", "1"])
    assert result.exit_code == 0
    assert result.output.strip() == "h(1) = 0 (branch: g-inverse)"


def test_witness_inverse(runner, successor_doc):
    result = runner.invoke(cli, ["witness", successor_doc, "--value", "0", "--inverse"])
    assert result.exit_code == 0
    assert result.output.strip() == "h^-1(0) = 1"


def test_witness_json_and_bias(runner, successor_doc):
    result = runner.invoke(cli, ["witness", successor_doc, "--value", "0", "--bias", "g-inverse", "--json"])
    assert result.exit_code == 0
    assert json.loads(result.output) == {"p": 0, "q": 1, "branch": "f"}


def test_witness_finite(runner, two_cycle_doc):
    result = runner.invoke(cli, ["witness", two_cycle_doc, "--value", "a"])
    assert result.output.strip() == "h(a) = x (branch: f)"


def test_witness_outside_carrier(runner, write_doc):
    path = write_doc(doubling_instance(), "doubling.json")
    result = runner.invoke(cli, ["witness", path, "--value", "3", "--inverse"])
    assert result.exit_code == 2


def test_witness_bad_value(runner, successor_doc):
    result = runner.invoke(cli, ["witness", successor_doc, "--value", "abc"])
    assert result.exit_code == 2


def test_witness_invalid_instance(runner, invalid_doc):
    result = runner.invoke(cli, ["witness", invalid_doc, "--value", "a"])
    assert result.exit_code == 2
    assert "is not a valid instance" in result.output


def test_witness_budget(runner, successor_doc):
    result = runner.invoke(cli, ["witness", successor_doc, "--value", "100"], env={"SB_BUDGET": "1"})
    assert result.exit_code == 3


def test_bad_budget_env(runner, successor_doc):
    result = runner.invoke(cli, ["validate", successor_doc], env={"SB_BUDGET": "lots"})
    assert result.exit_code == 2


def test_bad_log_level_env(runner, successor_doc):
    result = runner.invoke(cli, ["validate", successor_doc], env={"SB_LOG_LEVEL": "bogus"})
    assert result.exit_code == 2
    assert "SB_LOG_LEVEL" in result.output


def test_classify(runner, successor_doc):
    result = runner.invoke(cli, ["classify", successor_doc, "--polarity", "p", "--value", "4"])
    assert result.exit_code == 0
    assert result.output.strip() == "P:4: p-stopper (initial P:0)"


def test_classify_json(runner, two_cycle_doc):
    result = runner.invoke(cli, ["classify", two_cycle_doc, "--polarity", "q", "--value", "x", "--json"])
    assert json.loads(result.output) == {"element": "Q:x", "kind": "cyclic", "period": 2}


def test_classify_json_non_stopper(runner, write_doc):
    path = write_doc(non_stopper_instance(), "non_stopper.json")
    result = runner.invoke(cli, ["classify", path, "--polarity", "p", "--value", "0", "--json"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["kind"] == "non-stopper"
    assert set(payload) == {"element", "kind", "anchor", "period", "shift"}
    assert payload["period"] > 0
    assert payload["shift"] > 0


def test_classify_budget(runner, successor_doc):
    result = runner.invoke(
        cli, ["classify", successor_doc, "--polarity", "q", "--value", "100"], env={"SB_BUDGET": "1"}
    )
    assert result.exit_code == 3
    assert "unknown" in result.output


def test_classify_malformed(runner, write_doc):
    path = write_doc(doubling_instance(), "doubling.json")
    result = runner.invoke(cli, ["classify", path, "--polarity", "q", "--value", "3"])
    assert result.exit_code == 2


def test_check_finite(runner, two_cycle_doc):
    result = runner.invoke(cli, ["check", two_cycle_doc])
    assert result.exit_code == 0
    assert "bijective: yes" in result.output


def test_check_countable(runner, successor_doc):
    result = runner.invoke(cli, ["check", successor_doc, "--window", "1000", "--json"])
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["checked_window"] == "values < 1000"
    assert report["counterexamples"] == []


def test_check_requires_window(runner, successor_doc):
    result = runner.invoke(cli, ["check", successor_doc])
    assert result.exit_code == 2


def test_check_budget(runner, successor_doc):
    result = runner.invoke(cli, ["check", successor_doc, "--window", "20"], env={"SB_BUDGET": "1"})
    assert result.exit_code == 3
    assert "bijective: no" in result.output


def test_lemmas(runner, successor_doc):
    result = runner.invoke(cli, ["lemmas", successor_doc, "--window", "50"])
    assert result.exit_code == 0
    assert "pass initial-unique" in result.output
    assert "pass witness-preserves-chain" in result.output


def test_lemmas_budget(runner, successor_doc):
    result = runner.invoke(cli, ["lemmas", successor_doc, "--window", "20"], env={"SB_BUDGET": "1"})
    assert result.exit_code == 3


def test_decompose(runner, two_cycle_doc):
    result = runner.invoke(cli, ["decompose", two_cycle_doc])
    assert result.exit_code == 0
    assert "cyclic period 2: P:a Q:x" in result.output
    assert "cyclic=1" in result.output


def test_decompose_json(runner, successor_doc):
    result = runner.invoke(cli, ["decompose", successor_doc, "--window", "4", "--json"])
    report = json.loads(result.output)
    assert report["counts"]["p-stopper"] == 1
    assert report["chains"][1]["members"] == ["P:1", "P:3", "Q:0", "Q:2"]


def test_dot_stdout(runner, two_cycle_doc):
    result = runner.invoke(cli, ["dot", two_cycle_doc, "-o", "-"])
    assert result.exit_code == 0
    assert result.output.startswith("digraph chains {")


def test_dot_window_env(runner, successor_doc, tmp_path):
    out = tmp_path / "chains.dot"
    result = runner.invoke(cli, ["dot", successor_doc, "-o", str(out)], env={"SB_DOT_WINDOW": "2"})
    assert result.exit_code == 0
    text = out.read_text()
    assert '"P:1"' in text
    assert '"P:2"' not in text


def test_gen_reproducible(runner):
    first = runner.invoke(cli, ["gen", "--size", "5", "--seed", "7"])
    second = runner.invoke(cli, ["gen", "--size", "5", "--seed", "7"])
    assert first.exit_code == 0
    assert first.output == second.output
    assert parse_instance(first.output).report.valid


def test_gen_size_positive(runner):
    result = runner.invoke(cli, ["gen", "--size", "0", "--seed", "1"])
    assert result.exit_code == 2


def test_encode(runner, two_cycle_doc):
    result = runner.invoke(cli, ["encode", two_cycle_doc])
    assert result.exit_code == 0
    inst = parse_instance(result.output)
    assert inst.mode is Mode.COUNTABLE
    assert inst.report.valid


def test_encode_countable_rejected(runner, successor_doc):
    result = runner.invoke(cli, ["encode", successor_doc])
    assert result.exit_code == 2
