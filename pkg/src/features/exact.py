# src/features/exact.py
"""
Exact arithmetic: Python integers are the arbitrary-precision BigInt, Fraction
is the always-reduced Rational, and RationalMatrix is a dense immutable grid of
Fractions.  Nothing here ever touches floating point.
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from src.utils.error_handler import (
    DimensionError,
    InvalidParameterError,
    SingularMatrixError,
)

logger = logging.getLogger(__name__)

BigInt = int
Rational = Fraction
Number = Union[int, Fraction]


class RationalMatrix:
    """Dense matrix of exact rationals; dimensions and entries fixed at construction."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, entries: Iterable[Iterable[Number]]):
        grid = tuple(tuple(Fraction(v) for v in row) for row in entries)
        if not grid or not grid[0]:
            raise DimensionError("a matrix needs at least one row and one column")
        width = len(grid[0])
        if any(len(row) != width for row in grid):
            raise DimensionError("rows of unequal length")
        self.rows = len(grid)
        self.cols = width
        self._entries = grid

    @classmethod
    def identity(cls, size: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(size)] for i in range(size)])

    @classmethod
    def diagonal(cls, values: Sequence[Number]) -> "RationalMatrix":
        size = len(values)
        return cls([[values[i] if i == j else 0 for j in range(size)] for i in range(size)])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self._entries[i][j]

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self._entries[i]

    def to_lists(self) -> List[List[Fraction]]:
        return [list(row) for row in self._entries]

    def __iter__(self):
        return iter(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return hash(self._entries)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(v) for v in row) for row in self._entries)
        return f"RationalMatrix([{body}])"

    def _check_same_shape(self, other: "RationalMatrix"):
        if self.shape != other.shape:
            raise DimensionError(f"shape {self.shape} does not match {other.shape}")

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_same_shape(other)
        return RationalMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._entries, other._entries)]
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_same_shape(other)
        return RationalMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self._entries, other._entries)]
        )

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        return mat_mul(self, other)

    def scale(self, factor: Number) -> "RationalMatrix":
        factor = Fraction(factor)
        return RationalMatrix([[factor * v for v in row] for row in self._entries])

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(list(zip(*self._entries)))

    def row_sums(self) -> List[Fraction]:
        return [sum(row, Fraction(0)) for row in self._entries]

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for row in self._entries for v in row)

    def is_nonnegative_integral(self) -> bool:
        return all(v.denominator == 1 and v >= 0 for row in self._entries for v in row)

    def to_json(self) -> List[List[Dict[str, int]]]:
        """Entries as {num, den} pairs."""
        return [[{"num": v.numerator, "den": v.denominator} for v in row]
                for row in self._entries]


def mat_mul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    """Exact product a·b."""
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    columns = list(zip(*b))
    return RationalMatrix(
        [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in columns] for row in a]
    )


def mat_det(a: RationalMatrix) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination, first nonzero pivot."""
    if not a.is_square:
        raise DimensionError(f"determinant of a non-square {a.rows}x{a.cols} matrix")
    m = a.to_lists()
    size = a.rows
    sign = 1
    previous = Fraction(1)
    for k in range(size - 1):
        pivot = next((i for i in range(k, size) if m[i][k] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / previous
        previous = m[k][k]
    return sign * m[size - 1][size - 1]


def mat_inverse(a: RationalMatrix) -> RationalMatrix:
    """Exact inverse by Gauss-Jordan elimination on [a | I], first nonzero pivot."""
    if not a.is_square:
        raise DimensionError(f"inverse of a non-square {a.rows}x{a.cols} matrix")
    size = a.rows
    aug = [list(row) + [Fraction(int(i == j)) for j in range(size)]
           for i, row in enumerate(a)]
    for col in range(size):
        pivot = next((i for i in range(col, size) if aug[i][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_pivot = 1 / aug[col][col]
        aug[col] = [v * inv_pivot for v in aug[col]]
        for i in range(size):
            factor = aug[i][col]
            if i != col and factor != 0:
                aug[i] = [v - factor * w for v, w in zip(aug[i], aug[col])]
    return RationalMatrix([row[size:] for row in aug])


def mat_rank(a: RationalMatrix) -> int:
    m = a.to_lists()
    rank = 0
    for col in range(a.cols):
        pivot = next((i for i in range(rank, a.rows) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for i in range(rank + 1, a.rows):
            factor = m[i][col] / m[rank][col]
            if factor:
                m[i] = [v - factor * w for v, w in zip(m[i], m[rank])]
        rank += 1
    return rank


def mod_pow(base: BigInt, exponent: BigInt, modulus: BigInt) -> BigInt:
    """base^exponent mod modulus in [0, modulus); negative bases are normalized first."""
    if modulus < 1:
        raise InvalidParameterError(f"modulus must be >= 1, got {modulus}")
    if exponent < 0:
        raise InvalidParameterError(f"exponent must be >= 0, got {exponent}")
    return pow(base % modulus, exponent, modulus)
