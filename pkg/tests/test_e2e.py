"""E2E-style tests running the command-line flows end to end at acceptance scale."""

import json
from unittest.mock import patch

import pytest

from src.cli import EXIT_FALSE, EXIT_TRUE, main_cli
from src.genfuzz import SUITES

# Trial counts for the suites with a stated acceptance size; the rest run DEFAULT_TRIALS.
ACCEPTANCE_TRIALS = {
    "forms.completeness": 1000,
    "forms.soundness": 1000,
    "forms.complexification": 500,
    "forms.symmetric_sa": 500,
    "forms.lemma23": 200,
    "preservers.analyze_roundtrip": 500,
    "preservers.reconstruct_roundtrip": 500,
    "preservers.biop_criterion": 500,
    "preservers.invert_biop": 500,
    "preservers.inverse_invertibles": 200,
    "preservers.f2_empty": 200,
}
DEFAULT_TRIALS = 200


@pytest.fixture(autouse=True)
def no_dotenv():
    with patch("src.config.load_dotenv"):
        yield


@pytest.mark.slow
@pytest.mark.timeout(1800)
@pytest.mark.parametrize("suite", sorted(SUITES))
def test_e2e_suite_passes_at_acceptance_size(suite, capsys):
    """Test that every suite passes its acceptance trial count on spaces with up to 10 points."""
    trials = ACCEPTANCE_TRIALS.get(suite, DEFAULT_TRIALS)
    argv = ["fuzz", "--suite", suite, "--trials", str(trials), "--seed", "1", "--max-f", "4", "--max-cycles", "3"]

    code = main_cli(argv)
    doc = json.loads(capsys.readouterr().out)

    assert code == EXIT_TRUE, doc
    assert doc["status"] == "pass"
    assert doc["trials"] == trials


@pytest.mark.slow
@pytest.mark.timeout(600)
@pytest.mark.parametrize(
    "suite", ["forms.soundness", "forms.completeness", "preservers.analyze_roundtrip", "genfuzz.generator_soundness"]
)
def test_e2e_mutation_is_detected(suite, capsys):
    """Test that injected defects are reported as failures with a counterexample."""
    code = main_cli(["fuzz", "--suite", suite, "--trials", "50", "--mutate"])
    doc = json.loads(capsys.readouterr().out)

    assert code == EXIT_FALSE
    counterexample = doc["counterexample"]
    assert "form" in counterexample or "map" in counterexample


@pytest.mark.timeout(120)
def test_e2e_all_suites_small(capsys):
    """Test a full multi-suite run on small spaces."""
    code = main_cli(["fuzz", "--trials", "5", "--max-f", "1", "--max-cycles", "1"])
    doc = json.loads(capsys.readouterr().out)

    assert code == EXIT_TRUE
    assert doc["status"] == "pass"
    assert [r["suite"] for r in doc["reports"]] == list(SUITES)


@pytest.mark.timeout(120)
def test_e2e_reproduce_both_examples(capsys):
    """Test that both worked examples reproduce from the command line."""
    assert main_cli(["reproduce", "--example", "complexification"]) == EXIT_TRUE
    complexification = json.loads(capsys.readouterr().out)
    assert main_cli(["reproduce", "--example", "biop"]) == EXIT_TRUE
    biop = json.loads(capsys.readouterr().out)

    assert complexification["extension_orthogonal"] is False
    assert biop["biorthogonality_preserving"] is False
