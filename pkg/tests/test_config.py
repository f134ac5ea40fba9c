"""Tests for configuration data classes in src/config.py."""

from unittest.mock import patch

import pytest

from src.config import CliDefaults, GenConfig
from src.errors import ConfigError


def test_gen_config_defaults():
    """Test that GenConfig carries the documented defaults."""
    cfg = GenConfig()

    assert cfg.seed == 0
    assert (cfg.max_fixed, cfg.max_cycles) == (3, 3)
    assert cfg.bound == 8
    assert cfg.trials == 100
    assert cfg.mutate is False


@pytest.mark.parametrize(
    "kwargs",
    [
        {"max_fixed": -1},
        {"max_fixed": 0, "max_cycles": 0},
        {"bound": 0},
        {"trials": -5},
        {"max_fixed": 1, "max_cycles": 1, "min_orbits": 3},
    ],
)
def test_gen_config_rejects_invalid_values(kwargs):
    """Test that invalid generator settings raise ConfigError."""
    with pytest.raises(ConfigError):
        GenConfig(**kwargs)


def test_gen_config_rng_is_deterministic():
    """Test that identical configurations produce identical streams."""
    first = [GenConfig(seed=7).rng().random() for _ in range(3)]
    second = [GenConfig(seed=7).rng().random() for _ in range(3)]
    assert first == second
    assert GenConfig(seed=7).rng().random() != GenConfig(seed=8).rng().random()


def test_gen_config_for_trial_derives_distinct_seeds():
    """Test that trial configurations differ by seed only and are reproducible."""
    cfg = GenConfig(seed=3, max_fixed=2)
    seeds = [cfg.for_trial(i).seed for i in range(5)]

    assert len(set(seeds)) == 5
    assert seeds == [cfg.for_trial(i).seed for i in range(5)]
    assert cfg.for_trial(0).max_fixed == 2


def test_gen_config_with_bounds_clamps_min_orbits():
    """Test that shrinking keeps min_orbits satisfiable."""
    cfg = GenConfig(max_fixed=3, max_cycles=3, min_orbits=4)
    smaller = cfg.with_bounds(1, 0)

    assert (smaller.max_fixed, smaller.max_cycles, smaller.min_orbits) == (1, 0, 1)
    assert smaller.seed == cfg.seed


@patch("src.config.load_dotenv")
def test_cli_defaults_from_env(mock_load_dotenv, monkeypatch):
    """Test that CliDefaults reads ORTHOFORMS_* variables."""
    monkeypatch.setenv("ORTHOFORMS_SEED", "42")
    monkeypatch.setenv("ORTHOFORMS_TRIALS", "7")
    monkeypatch.setenv("ORTHOFORMS_LOG_LEVEL", "debug")
    monkeypatch.setenv("ORTHOFORMS_TOLERANCE", "1e-6")

    defaults = CliDefaults.from_env()

    assert defaults == CliDefaults(seed=42, trials=7, log_level="DEBUG", tolerance=1e-6)
    mock_load_dotenv.assert_called_once()


@patch("src.config.load_dotenv")
def test_cli_defaults_without_env(mock_load_dotenv, monkeypatch):
    """Test that missing variables fall back to the defaults."""
    for name in ("ORTHOFORMS_SEED", "ORTHOFORMS_TRIALS", "ORTHOFORMS_LOG_LEVEL", "ORTHOFORMS_TOLERANCE"):
        monkeypatch.delenv(name, raising=False)

    assert CliDefaults.from_env() == CliDefaults()


@patch("src.config.load_dotenv")
def test_cli_defaults_invalid_env_raises(mock_load_dotenv, monkeypatch):
    """Test that a malformed variable raises ConfigError."""
    monkeypatch.setenv("ORTHOFORMS_SEED", "many")

    with pytest.raises(ConfigError):
        CliDefaults.from_env()
