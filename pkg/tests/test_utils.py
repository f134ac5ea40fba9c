"""Tests for utility functions in src/utils.py."""

import logging
from fractions import Fraction
from pathlib import Path

import pytest

from src.utils import ensure_dir, format_fraction, parse_fraction, rationalize, setup_logging


@pytest.mark.parametrize(
    "text, expected",
    [("3", Fraction(3)), ("-2/4", Fraction(-1, 2)), ("0/5", Fraction(0)), (" 7/3 ", Fraction(7, 3))],
)
def test_parse_fraction_valid(text, expected):
    """Test that parse_fraction accepts integers and p/q strings."""
    assert parse_fraction(text) == expected


@pytest.mark.parametrize("text", ["1.5", "a/b", "1/-2", "", "1//2"])
def test_parse_fraction_invalid_raises(text):
    """Test that non-fraction strings raise ValueError."""
    with pytest.raises(ValueError):
        parse_fraction(text)


def test_parse_fraction_zero_denominator_raises():
    """Test that a zero denominator raises ValueError."""
    with pytest.raises(ValueError):
        parse_fraction("1/0")


def test_format_fraction_is_canonical():
    """Test that format_fraction emits lowest terms and bare integers."""
    assert format_fraction(Fraction(2, 4)) == "1/2"
    assert format_fraction(Fraction(-6, 3)) == "-2"
    assert format_fraction(Fraction(0)) == "0"


def test_rationalize_recovers_simple_fractions():
    """Test that floats close to simple rationals are mapped onto them."""
    assert rationalize(0.5, 1e-9) == Fraction(1, 2)
    assert rationalize(0.1, 1e-9) == Fraction(1, 10)
    assert rationalize(1 / 3, 1e-9) == Fraction(1, 3)
    assert rationalize(4, 1e-9) == Fraction(4)


def test_rationalize_respects_tolerance():
    """Test that the result lies within the requested tolerance."""
    value = 3.14159265358979
    for tolerance in (1e-2, 1e-6, 1e-12):
        assert abs(rationalize(value, tolerance) - Fraction(value)) <= tolerance


def test_rationalize_coarse_tolerance_gives_small_denominator():
    """Test that a coarse tolerance yields a coarse approximation."""
    assert rationalize(3.14159265358979, 1e-2).denominator <= 100


def test_rationalize_invalid_tolerance_raises():
    """Test that a non-positive tolerance raises ValueError."""
    with pytest.raises(ValueError):
        rationalize(0.5, 0)


def test_ensure_dir(tmp_path: Path):
    """Test that ensure_dir creates a directory if it doesn't exist."""
    dir_path = tmp_path / "new_dir" / "nested"
    assert not dir_path.exists()

    returned_path = ensure_dir(dir_path)

    assert dir_path.is_dir()
    assert returned_path == dir_path


def test_setup_logging(caplog):
    """Test that setup_logging configures the root logger."""
    setup_logging(level=logging.DEBUG)
    test_message = "This is a debug message."

    with caplog.at_level(logging.DEBUG):
        logging.debug(test_message)

    assert test_message in caplog.text
