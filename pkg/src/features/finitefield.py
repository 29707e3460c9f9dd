# src/features/finitefield.py
"""
GF(p^m) arithmetic.

Elements are integer labels in [0, p^m): the coefficient vector of the
polynomial residue read as base-p digits, coefficient of x^0 least
significant.  The label map is what fixes the alphabet embedding of every
code file, so it must never change for a given modulus.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import Poly, isprime, symbols

from src.utils.error_handler import FieldMismatchError, InvalidParameterError

logger = logging.getLogger(__name__)

_X = symbols("x")


@dataclass(frozen=True)
class FieldSpec:
    """Field description; modulus is monic, coefficients listed from x^0 upwards."""
    p: int
    m: int
    modulus: Tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p ** self.m

    def describe(self) -> str:
        coeffs = " ".join(str(c) for c in self.modulus)
        return f"GF({self.p}^{self.m}) modulus {coeffs}"


def is_irreducible(p: int, coefficients: Sequence[int]) -> bool:
    """Irreducibility over GF(p) of the polynomial given low-degree first."""
    return Poly(list(reversed(coefficients)), _X, modulus=p).is_irreducible


def parse_modulus(text: str) -> Tuple[int, ...]:
    """Parse a CLI modulus such as "1 1 1" (low-degree first, commas allowed)."""
    try:
        return tuple(int(tok) for tok in text.replace(",", " ").split())
    except ValueError as e:
        raise InvalidParameterError(f"malformed modulus {text!r}: {e}") from e


def field_make(p: int, m: int, modulus: Optional[Sequence[int]] = None) -> FieldSpec:
    """Build a FieldSpec; the default modulus is the lexicographically smallest monic irreducible."""
    if not isprime(p):
        raise InvalidParameterError(f"p={p} is not prime")
    if m < 1:
        raise InvalidParameterError(f"extension degree must be >= 1, got {m}")

    if modulus is not None:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise InvalidParameterError(f"modulus must be monic of degree {m}, got {modulus}")
        if not is_irreducible(p, modulus):
            raise InvalidParameterError(f"modulus {modulus} is reducible over GF({p})")
        return FieldSpec(p, m, modulus)

    if m == 1:
        return FieldSpec(p, 1, (0, 1))

    # Tails are enumerated with the x^(m-1) coefficient most significant,
    # which is lexicographic order on the high-degree-first coefficient list.
    for tail in itertools.product(range(p), repeat=m):
        candidate = tuple(reversed(tail)) + (1,)
        if candidate[0] != 0 and is_irreducible(p, candidate):
            return FieldSpec(p, m, candidate)
    raise AssertionError(f"no irreducible polynomial of degree {m} over GF({p})")


class GaloisField:
    """Lookup tables for a FieldSpec, indexed by element label."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = spec.p
        self.m = spec.m
        self.q = spec.order
        self.digits = np.array(
            [[(label // self.p ** i) % self.p for i in range(self.m)] for label in range(self.q)],
            dtype=np.int64,
        )
        self._weights = np.array([self.p ** i for i in range(self.m)], dtype=np.int64)
        self._build_tables()

    def _label(self, coefficients: Sequence[int]) -> int:
        return int(np.dot(np.asarray(coefficients, dtype=np.int64) % self.p, self._weights))

    def _poly_mul(self, a: int, b: int) -> int:
        """Polynomial product of two labels reduced modulo spec.modulus."""
        da, db = self.digits[a], self.digits[b]
        product = [0] * (2 * self.m - 1)
        for i in range(self.m):
            if da[i]:
                for j in range(self.m):
                    product[i + j] += int(da[i]) * int(db[j])
        modulus = self.spec.modulus
        for deg in range(2 * self.m - 2, self.m - 1, -1):
            coef = product[deg] % self.p
            if coef:
                for i in range(self.m + 1):
                    product[deg - self.m + i] -= coef * modulus[i]
        return self._label(product[:self.m])

    def _build_tables(self) -> None:
        q = self.q
        sums = (self.digits[:, None, :] + self.digits[None, :, :]) % self.p
        self.add_table = sums @ self._weights
        self.neg_table = ((-self.digits) % self.p) @ self._weights
        self.mul_table = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                self.mul_table[a, b] = self.mul_table[b, a] = self._poly_mul(a, b)

        self.inv_table = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inverses = np.flatnonzero(self.mul_table[a] == 1)
            if inverses.size != 1:
                raise AssertionError(f"element {a} has no unique inverse in {self.spec.describe()}")
            self.inv_table[a] = inverses[0]

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"zero has no inverse in {self.spec.describe()}")
        return int(self.inv_table[a])

    def power(self, a: int, e: int) -> int:
        result = 1
        for _ in range(e):
            result = self.mul(result, a)
        return result

    def element_order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise InvalidParameterError("zero has no multiplicative order")
        order, value = 1, a
        while value != 1:
            value = self.mul(value, a)
            order += 1
        return order

    def primitive_element(self) -> int:
        """Smallest label generating the multiplicative group."""
        for a in range(1, self.q):
            if self.element_order(a) == self.q - 1:
                return a
        raise AssertionError("multiplicative group is not cyclic")

    def element(self, label: int) -> "FieldElement":
        return FieldElement(self.spec, label)

    def mat_vec(self, h: Sequence[Sequence[int]], v: Sequence[int]) -> List[int]:
        """h·v over the field."""
        out = []
        for row in h:
            acc = 0
            for hij, vj in zip(row, v):
                acc = self.add(acc, self.mul(hij, vj))
            out.append(acc)
        return out

    def rref(self, h: Sequence[Sequence[int]]) -> Tuple[List[List[int]], List[int]]:
        """Reduced row echelon form and pivot columns."""
        rows = [list(int(v) for v in row) for row in h]
        n = len(rows[0]) if rows else 0
        pivots: List[int] = []
        r = 0
        for col in range(n):
            pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
            if pivot is None:
                continue
            rows[r], rows[pivot] = rows[pivot], rows[r]
            scale = self.inv(rows[r][col])
            rows[r] = [self.mul(scale, v) for v in rows[r]]
            for i in range(len(rows)):
                factor = rows[i][col]
                if i != r and factor != 0:
                    rows[i] = [self.sub(v, self.mul(factor, w)) for v, w in zip(rows[i], rows[r])]
            pivots.append(col)
            r += 1
            if r == len(rows):
                break
        return rows[:r], pivots

    def rank(self, h: Sequence[Sequence[int]]) -> int:
        return len(self.rref(h)[1])

    def null_space(self, h: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
        """Basis of {v : h·v = 0}, one vector per free column."""
        if not h or not h[0]:
            raise InvalidParameterError("null_space needs a non-empty matrix")
        n = len(h[0])
        if any(len(row) != n for row in h):
            raise InvalidParameterError("rows of unequal length")
        if any(not 0 <= v < self.q for row in h for v in row):
            raise InvalidParameterError(f"entry outside [0, {self.q})")
        reduced, pivots = self.rref(h)
        basis = []
        for free in (c for c in range(n) if c not in pivots):
            v = [0] * n
            v[free] = 1
            for row, col in zip(reduced, pivots):
                v[col] = self.neg(row[free])
            basis.append(tuple(v))
        return basis


@lru_cache(maxsize=None)
def get_field(spec: FieldSpec) -> GaloisField:
    return GaloisField(spec)


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    label: int

    def __post_init__(self):
        if not 0 <= self.label < self.spec.order:
            raise InvalidParameterError(f"label {self.label} outside [0, {self.spec.order})")

    @property
    def coefficients(self) -> Tuple[int, ...]:
        return tuple(int(c) for c in get_field(self.spec).digits[self.label])

    def _same_field(self, other: "FieldElement") -> GaloisField:
        if not isinstance(other, FieldElement) or other.spec != self.spec:
            raise FieldMismatchError("elements belong to different fields")
        return get_field(self.spec)

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return field_add(self, other)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return field_add(self, field_neg(other))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return field_mul(self, other)

    def __neg__(self) -> "FieldElement":
        return field_neg(self)

    def inverse(self) -> "FieldElement":
        return field_inv(self)


def field_add(a: FieldElement, b: FieldElement) -> FieldElement:
    gf = a._same_field(b)
    return FieldElement(a.spec, gf.add(a.label, b.label))


def field_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    gf = a._same_field(b)
    return FieldElement(a.spec, gf.mul(a.label, b.label))


def field_neg(a: FieldElement) -> FieldElement:
    return FieldElement(a.spec, get_field(a.spec).neg(a.label))


def field_inv(a: FieldElement) -> FieldElement:
    return FieldElement(a.spec, get_field(a.spec).inv(a.label))


def null_space(h: Sequence[Sequence[int]], spec: FieldSpec) -> List[Tuple[int, ...]]:
    """Null-space basis of a matrix of element labels over spec."""
    return get_field(spec).null_space(h)
