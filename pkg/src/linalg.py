"""Exact rational matrix algebra on top of sympy.

Domain objects keep their matrices as tuples of `Fraction`; these helpers convert
to `sympy.Matrix` for rank, inversion, products and linear solves, and convert
the results back.
"""

from fractions import Fraction
from typing import Optional, Sequence

import sympy

Rows = tuple[tuple[Fraction, ...], ...]


def to_sympy(rows: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> sympy.Matrix:
    """Builds a sympy matrix of Rationals from rows of fractions."""
    if not rows:
        return sympy.zeros(0, ncols or 0)
    return sympy.Matrix(
        [[sympy.Rational(Fraction(v).numerator, Fraction(v).denominator) for v in row] for row in rows]
    )


def from_sympy(matrix: sympy.Matrix) -> Rows:
    """Converts a sympy matrix of Rationals back to rows of fractions."""
    return tuple(
        tuple(Fraction(int(sympy.Rational(matrix[i, j]).p), int(sympy.Rational(matrix[i, j]).q))
              for j in range(matrix.cols))
        for i in range(matrix.rows)
    )


def identity(n: int) -> Rows:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(nrows: int, ncols: int) -> Rows:
    return tuple(tuple(Fraction(0) for _ in range(ncols)) for _ in range(nrows))


def transpose(rows: Rows) -> Rows:
    return tuple(zip(*rows)) if rows else ()


def rank(rows: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> int:
    """Returns the exact rank of a rational matrix."""
    if not rows:
        return 0
    return to_sympy(rows, ncols).rank()


def inverse(rows: Rows) -> Optional[Rows]:
    """Returns the exact inverse of a square matrix, or None if it is singular."""
    n = len(rows)
    if n == 0:
        return ()
    if any(len(row) != n for row in rows):
        return None
    matrix = to_sympy(rows)
    if matrix.rank() < n:
        return None
    return from_sympy(matrix.inv())


def matmul(left: Rows, right: Rows) -> Rows:
    """Returns the exact product left @ right."""
    if not left or not right:
        return zeros(len(left), len(right[0]) if right else 0)
    return from_sympy(to_sympy(left) * to_sympy(right))


def matvec(rows: Rows, vector: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sum((a * b for a, b in zip(row, vector)), Fraction(0)) for row in rows)


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], ncols: int) -> Optional[tuple[Fraction, ...]]:
    """Solves rows @ x = rhs exactly.

    Free variables are set to zero.

    Args:
        rows: The coefficient matrix (may be empty).
        rhs: The right-hand side, one entry per row.
        ncols: Number of unknowns.

    Returns:
        A solution vector, or None if the system is inconsistent.
    """
    if not rows:
        return tuple(Fraction(0) for _ in range(ncols))
    augmented = to_sympy([list(row) + [b] for row, b in zip(rows, rhs)])
    reduced, pivots = augmented.rref()
    if ncols in pivots:
        return None
    solution = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        value = sympy.Rational(reduced[r, ncols])
        solution[c] = Fraction(int(value.p), int(value.q))
    return tuple(solution)
