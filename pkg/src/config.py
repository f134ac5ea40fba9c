"""Configuration data classes for the application.

This module defines the data structures used to hold configuration settings
for the random generators, the fuzz harness and the command-line front end.
"""

import os
import random
from dataclasses import dataclass, replace

from dotenv import load_dotenv

from src.errors import ConfigError


@dataclass(frozen=True)
class GenConfig:
    """Holds the settings of a seeded generator stream.

    Identical configurations always produce identical streams.

    Attributes:
        seed: The master seed (any 64-bit integer).
        max_fixed: Upper bound on the number of fixed points of a generated space.
        max_cycles: Upper bound on the number of 2-cycles of a generated space.
        bound: Bound on numerators (in absolute value) and denominators of rationals.
        trials: Number of trials a fuzz suite runs.
        min_orbits: Lower bound on the number of orbits of a generated space.
        mutate: Whether generators inject a single defect into their output.
    """

    seed: int = 0
    max_fixed: int = 3
    max_cycles: int = 3
    bound: int = 8
    trials: int = 100
    min_orbits: int = 1
    mutate: bool = False

    def __post_init__(self):
        if self.max_fixed < 0 or self.max_cycles < 0:
            raise ConfigError("Size bounds must be non-negative")
        if self.max_fixed + self.max_cycles == 0:
            raise ConfigError("At least one of max_fixed and max_cycles must be positive")
        if self.bound < 1:
            raise ConfigError("Rational bound must be at least 1")
        if self.trials < 0:
            raise ConfigError("Trial count must be non-negative")
        if self.min_orbits > self.max_fixed + self.max_cycles:
            raise ConfigError("min_orbits exceeds the largest possible number of orbits")

    def rng(self) -> random.Random:
        """Returns a fresh random stream seeded by this configuration."""
        return random.Random(f"orthoforms:{self.seed}")

    def for_trial(self, index: int) -> "GenConfig":
        """Derives the configuration of trial `index` from the master seed."""
        derived = random.Random(f"orthoforms:{self.seed}:{index}").getrandbits(64)
        return replace(self, seed=derived)

    def with_bounds(self, max_fixed: int, max_cycles: int) -> "GenConfig":
        """Returns a copy with smaller size bounds, keeping `min_orbits` satisfiable."""
        min_orbits = min(self.min_orbits, max_fixed + max_cycles)
        return replace(self, max_fixed=max_fixed, max_cycles=max_cycles, min_orbits=min_orbits)


@dataclass
class CliDefaults:
    """Holds defaults for the command-line front end.

    Attributes:
        seed: Default fuzz seed.
        trials: Default fuzz trial count.
        log_level: Name of the logging level.
        tolerance: Default rationalization tolerance for float input.
    """

    seed: int = 0
    trials: int = 100
    log_level: str = "WARNING"
    tolerance: float = 1e-9

    @classmethod
    def from_env(cls) -> "CliDefaults":
        """Builds defaults from ORTHOFORMS_* environment variables (and a .env file)."""
        load_dotenv()
        try:
            return cls(
                seed=int(os.getenv("ORTHOFORMS_SEED", "0")),
                trials=int(os.getenv("ORTHOFORMS_TRIALS", "100")),
                log_level=os.getenv("ORTHOFORMS_LOG_LEVEL", "WARNING").upper(),
                tolerance=float(os.getenv("ORTHOFORMS_TOLERANCE", "1e-9")),
            )
        except ValueError as e:
            raise ConfigError(f"Invalid ORTHOFORMS_* environment value: {e}") from e
