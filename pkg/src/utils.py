"""Utility functions for exact number parsing, file operations, and logging."""
import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Union

FRACTION_PATTERN = re.compile(r"^-?\d+(/\d+)?$")


def parse_fraction(text: str) -> Fraction:
    """Parses a fraction string of the form 'p' or 'p/q'.

    Args:
        text: The fraction string to parse.

    Returns:
        The exact rational value, in lowest terms.

    Raises:
        ValueError: If the string is not a fraction or has a zero denominator.
    """
    if not FRACTION_PATTERN.match(text.strip()):
        raise ValueError(f"Not a fraction string: {text!r}")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError as e:
        raise ValueError(f"Zero denominator in {text!r}") from e


def format_fraction(value: Fraction) -> str:
    """Formats a fraction canonically ('p/q' in lowest terms, 'p' for integers)."""
    return str(Fraction(value))


def rationalize(value: Union[int, float], tolerance: float) -> Fraction:
    """Converts a float to a nearby rational by continued fractions.

    The denominator bound starts at 1/tolerance and is widened until the convergent
    lies within the tolerance of the input.

    Args:
        value: The number to convert.
        tolerance: The maximum allowed absolute error (must be positive).

    Returns:
        A rational number within `tolerance` of `value`.

    Raises:
        ValueError: If the tolerance is not positive or the value is not finite.
    """
    if tolerance <= 0:
        raise ValueError("Tolerance must be positive")
    if isinstance(value, int):
        return Fraction(value)
    exact = Fraction(value)  # raises ValueError/OverflowError on nan/inf
    max_denominator = max(1, int(1 / tolerance))
    while True:
        candidate = exact.limit_denominator(max_denominator)
        if abs(candidate - exact) <= tolerance:
            return candidate
        max_denominator *= 2


def ensure_dir(path: Path) -> Path:
    """Ensures that a directory exists, creating it if necessary.

    Args:
        path: The directory path to check and create.

    Returns:
        The same Path object that was passed in.
    """
    path.mkdir(parents=True, exist_ok=True)
    return path


def setup_logging(level=logging.INFO) -> None:
    """Configures basic logging for the application.

    Sets up a basic configuration for the root logger to output messages
    to standard error, leaving standard output for JSON documents.

    Args:
        level: The minimum logging level to display (e.g., logging.INFO).
    """
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
