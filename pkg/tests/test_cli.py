"""Tests for the command-line interface in src/cli.py."""

import json
from pathlib import Path
from unittest.mock import patch

import pytest

from src import documents
from src.cli import EXIT_FALSE, EXIT_INPUT, EXIT_INVARIANT, EXIT_TRUE, main_cli
from src.preservers import SUPPORT_MAP_FAILURE
from src.reproductions import biop_map, complexification_form

MIXED = {"points": ["t0", "t1", "t2"], "sigma": {"t1": "t2"}}
CROSS_ORBIT = {"space": MIXED, "matrix": [["0", "1", "0"], ["0", "0", "0"], ["0", "0", "0"]]}


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Keeps .env files and ORTHOFORMS_* variables out of the tests."""
    for name in ("ORTHOFORMS_SEED", "ORTHOFORMS_TRIALS", "ORTHOFORMS_LOG_LEVEL", "ORTHOFORMS_TOLERANCE"):
        monkeypatch.delenv(name, raising=False)
    with patch("src.config.load_dotenv"):
        yield


def _write(tmp_path: Path, name: str, doc) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def _run(capsys, *argv) -> tuple[int, dict]:
    code = main_cli(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None


def test_check_form_orthogonal(tmp_path, capsys):
    """Test that the example form is reported orthogonal with exit code 0."""
    path = _write(tmp_path, "form.json", documents.form_to_doc(complexification_form()))

    code, doc = _run(capsys, "check-form", path)

    assert code == EXIT_TRUE
    assert doc == {"command": "check-form", "orthogonal": True, "counterexample": None}


def test_check_form_zero_form(tmp_path, capsys):
    """Test that the zero form passes check-form."""
    zero = {"space": MIXED, "matrix": [["0"] * 3 for _ in range(3)]}

    code, doc = _run(capsys, "check-form", _write(tmp_path, "zero.json", zero))

    assert code == EXIT_TRUE
    assert doc["orthogonal"] is True


def test_check_form_not_orthogonal(tmp_path, capsys):
    """Test that a cross-orbit form yields exit code 1 and a counterexample pair."""
    code, doc = _run(capsys, "check-form", _write(tmp_path, "form.json", CROSS_ORBIT))

    assert code == EXIT_FALSE
    assert doc["orthogonal"] is False
    assert len(doc["counterexample"]) == 2


def test_decompose_writes_output(tmp_path, capsys):
    """Test that decompose prints and writes the same document."""
    path = _write(tmp_path, "form.json", documents.form_to_doc(complexification_form()))
    out = tmp_path / "results" / "decomposition.json"

    code, doc = _run(capsys, "decompose", path, "--out", str(out))

    assert code == EXIT_TRUE
    assert doc["phi2"]["coefficients"] == ["1", "0"]
    assert doc["representation_space_dim"] == 0
    assert json.loads(out.read_text(encoding="utf-8")) == doc


def test_decompose_not_orthogonal(tmp_path, capsys):
    """Test that decompose refuses non-orthogonal forms with exit code 1."""
    code, doc = _run(capsys, "decompose", _write(tmp_path, "form.json", CROSS_ORBIT))
    assert code == EXIT_FALSE
    assert doc["orthogonal"] is False


def test_complexify_example(tmp_path, capsys):
    """Test that the extension of the example form is not orthogonal."""
    path = _write(tmp_path, "form.json", documents.form_to_doc(complexification_form()))

    code, doc = _run(capsys, "complexify", path)

    assert code == EXIT_FALSE
    assert doc["extension_orthogonal"] is False
    assert doc["complex_form"]["matrix"][0][1] == ["1/2", "0"]
    assert doc["functional"] is None


def test_analyze_map(tmp_path, capsys):
    """Test that analyze-map reports the support map of the example."""
    code, doc = _run(capsys, "analyze-map", _write(tmp_path, "map.json", documents.map_to_doc(biop_map())))

    assert code == EXIT_TRUE
    assert doc["structure"]["phi"]["s4"] == "t3"
    assert doc["structure"]["z2"] == []


def test_check_biop_example(tmp_path, capsys):
    """Test that the example map is rejected with the support-map reason."""
    code, doc = _run(capsys, "check-biop", _write(tmp_path, "map.json", documents.map_to_doc(biop_map())))

    assert code == EXIT_FALSE
    assert doc["biorthogonality_preserving"] is False
    assert doc["reason"] == SUPPORT_MAP_FAILURE
    assert doc["certificate"] is None


def test_check_biop_identity(tmp_path, capsys):
    """Test that the identity map is certified."""
    identity = {"domain": MIXED, "codomain": MIXED, "matrix": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]}

    code, doc = _run(capsys, "check-biop", _write(tmp_path, "map.json", identity))

    assert code == EXIT_TRUE
    assert doc["certificate"]["orbit_map"] == {"t0": "t0", "t1": "t1"}


@pytest.mark.parametrize(
    "example, key, value",
    [("complexification", "extension_value", ["1/2", "0"]), ("biop", "reason", SUPPORT_MAP_FAILURE)],
)
def test_reproduce(capsys, example, key, value):
    """Test that both worked examples reproduce with exit code 0."""
    code, doc = _run(capsys, "reproduce", "--example", example)

    assert code == EXIT_TRUE
    assert doc[key] == value


def test_reproduce_is_byte_identical(capsys):
    """Test that repeated runs print identical bytes."""
    main_cli(["reproduce", "--example", "biop"])
    first = capsys.readouterr().out
    main_cli(["reproduce", "--example", "biop"])
    assert capsys.readouterr().out == first


def test_fuzz_single_suite(capsys):
    """Test that a single-suite fuzz run prints its report."""
    code, doc = _run(capsys, "fuzz", "--suite", "forms.soundness", "--trials", "3", "--seed", "7")

    assert code == EXIT_TRUE
    assert doc == {"suite": "forms.soundness", "seed": 7, "trials": 3, "status": "pass", "counterexample": None}


def test_fuzz_mutate_fails(capsys):
    """Test that injected defects make the run fail with exit code 1."""
    code, doc = _run(capsys, "fuzz", "--suite", "forms.soundness", "--trials", "3", "--mutate")

    assert code == EXIT_FALSE
    assert doc["status"] == "fail"
    assert doc["counterexample"]["trial"] == 0


def test_fuzz_unknown_suite(capsys):
    """Test that an unknown suite is an input error."""
    code, doc = _run(capsys, "fuzz", "--suite", "nope")
    assert code == EXIT_INPUT
    assert doc is None


def test_malformed_json_reports_position(tmp_path, capsys):
    """Test that JSON syntax errors exit with 2 and name the position."""
    path = tmp_path / "form.json"
    path.write_text('{"space": ', encoding="utf-8")

    code = main_cli(["check-form", str(path)])

    assert code == EXIT_INPUT
    assert "(line 1, column" in " ".join(capsys.readouterr().err.split())


@pytest.mark.parametrize(
    "argv",
    [
        ["--tolerance", "1e-6", "reproduce", "--example", "biop"],
        ["frobnicate"],
        ["check-form", "missing.json"],
        ["--log-level", "chatty", "reproduce", "--example", "biop"],
    ],
)
def test_input_errors_exit_with_2(argv, capsys):
    """Test that invalid invocations exit with code 2."""
    assert main_cli(argv) == EXIT_INPUT
    assert capsys.readouterr().out == ""


def test_float_input(tmp_path, capsys):
    """Test that --float-input accepts JSON numbers."""
    doc = {"space": MIXED, "matrix": [[0.5, 0, 0], [0, 1, 0], [0, 0, 1]]}
    path = _write(tmp_path, "form.json", doc)

    assert main_cli(["check-form", path]) == EXIT_INPUT
    capsys.readouterr()
    code, out = _run(capsys, "--float-input", "--tolerance", "1e-6", "check-form", path)
    assert code == EXIT_TRUE
    assert out["orthogonal"] is True


@patch("src.cli.orthogonality_oracle", return_value=None)
def test_cross_check_failure_exits_with_3(mock_oracle, tmp_path, capsys):
    """Test that a disagreement between criterion and oracle exits with code 3."""
    code = main_cli(["check-form", _write(tmp_path, "form.json", CROSS_ORBIT)])

    assert code == EXIT_INVARIANT
    mock_oracle.assert_called_once()


def test_analyze_map_into_empty_space(tmp_path, capsys):
    """Test that a map into a space without points is analyzed rather than crashing."""
    doc = {"domain": {"points": ["a", "b"]}, "codomain": {"points": []}, "matrix": []}

    code, out = _run(capsys, "analyze-map", _write(tmp_path, "map.json", doc))

    assert code == EXIT_TRUE
    assert out["structure"]["z1"] == []


@patch("src.cli.analyze", side_effect=KeyError("t9"))
def test_unexpected_error_exits_with_3(mock_analyze, tmp_path, capsys):
    """Test that an unexpected exception is reported as an internal failure, not as a false property."""
    code = main_cli(["analyze-map", _write(tmp_path, "map.json", documents.map_to_doc(biop_map()))])

    assert code == EXIT_INVARIANT
    assert capsys.readouterr().out == ""
    mock_analyze.assert_called_once()
