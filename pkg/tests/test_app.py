"""Tests for the FuzzApp class in src/app.py."""

from unittest.mock import MagicMock, patch

import pytest

from src.app import FuzzApp
from src.config import GenConfig
from src.errors import UnknownSuite
from src.genfuzz import SUITES, SuiteReport


@pytest.fixture
def cfg():
    """Provides a small generator configuration."""
    return GenConfig(seed=5, max_fixed=1, max_cycles=1, trials=3)


def test_unknown_suite_raises(cfg):
    """Test that FuzzApp refuses unregistered suites."""
    with pytest.raises(UnknownSuite):
        FuzzApp(cfg, "forms.unknown")


def test_all_selects_every_suite(cfg):
    """Test that "all" runs the registered suites in order."""
    assert FuzzApp(cfg).suites == list(SUITES)
    assert FuzzApp(cfg, "forms.prop33").suites == ["forms.prop33"]


@patch("src.app.run_suite")
def test_run_adds_one_task_per_suite(mock_run_suite, cfg):
    """Test that run creates a progress task per suite and collects the reports."""
    # Arrange
    mock_run_suite.side_effect = lambda name, c, on_trial: SuiteReport(name, c.seed, c.trials, "pass")
    progress = MagicMock()
    app = FuzzApp(cfg)

    # Act
    reports = app.run(progress)

    # Assert
    assert [r.suite for r in reports] == list(SUITES)
    assert progress.add_task.call_count == len(SUITES)
    assert mock_run_suite.call_count == len(SUITES)


def test_run_advances_progress_per_trial(cfg):
    """Test that every trial advances the suite's progress task."""
    progress = MagicMock()
    progress.add_task.return_value = "task"

    reports = FuzzApp(cfg, "algebra.orthogonality").run(progress)

    assert reports[0].passed
    advances = [c for c in progress.update.call_args_list if c.kwargs.get("advance") == 1]
    assert len(advances) == cfg.trials
    progress.update.assert_called_with("task", completed=cfg.trials)


def test_summary_status():
    """Test that the summary fails as soon as one suite fails."""
    passed = SuiteReport("a", 0, 1, "pass")
    failed = SuiteReport("b", 0, 1, "fail", {"trial": 0})

    assert FuzzApp.summary([passed])["status"] == "pass"
    summary = FuzzApp.summary([passed, failed])
    assert summary["status"] == "fail"
    assert summary["reports"][1]["counterexample"] == {"trial": 0}
