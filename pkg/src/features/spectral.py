# src/features/spectral.py
"""
Quotient-matrix spectral machinery for extended 1-perfect codes.

S is the distance-1 quotient matrix of the distance partition, S' the dual
transform (n(q-1)I - S)/q whose eigenvalues are eigenvalue indices of H(n,q),
and (Q, J, Q^-1) its diagonalization.  The quotient matrix in the distance-i
graph is then Q K_i(J) Q^-1 with K_i the Krawtchouk polynomial.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from src.features.exact import RationalMatrix, mat_inverse, mat_mul
from src.utils.error_handler import InvalidParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectralContext:
    n: int
    q: int
    x: Fraction  # (n+q-2)/q
    e: Fraction  # (nq-n-q+2)/q

    @property
    def eigen_integral(self) -> bool:
        return self.e.denominator == 1


@dataclass(frozen=True)
class JordanTriple:
    n: int
    q: int
    Q: RationalMatrix
    J: RationalMatrix
    Qinv: RationalMatrix


def _check_nq(n: int, q: int):
    if n < 2 or q < 2:
        raise InvalidParameterError(f"need n >= 2 and q >= 2, got n={n}, q={q}")


def spectral_context(n: int, q: int) -> SpectralContext:
    _check_nq(n, q)
    return SpectralContext(n, q, Fraction(n + q - 2, q), Fraction(n * q - n - q + 2, q))


def prop1_matrix(n: int, q: int) -> RationalMatrix:
    """Distance-1 quotient matrix of the distance partition of an extended 1-perfect code."""
    _check_nq(n, q)
    return RationalMatrix([
        [0, n * (q - 1), 0],
        [1, q - 2, (n - 1) * (q - 1)],
        [0, n, n * (q - 2)],
    ])


def dual_transform(s: RationalMatrix, n: int, q: int) -> RationalMatrix:
    """(n(q-1)I - s)/q."""
    if not s.is_square:
        raise InvalidParameterError("dual transform needs a square matrix")
    return (RationalMatrix.identity(s.rows).scale(n * (q - 1)) - s).scale(Fraction(1, q))


def s_prime_matrix(n: int, q: int) -> RationalMatrix:
    return dual_transform(prop1_matrix(n, q), n, q)


def det_q_closed(n: int, q: int) -> Fraction:
    """det(Q) = -q(nq-n-q+2)(n+q-2) / (n(n-1)(q-1)^3)."""
    _check_nq(n, q)
    return Fraction(-q * (n * q - n - q + 2) * (n + q - 2), n * (n - 1) * (q - 1) ** 3)


def jordan_triple(n: int, q: int) -> JordanTriple:
    """Closed-form diagonalization S' = Q J Q^-1, checked exactly before it is returned."""
    _check_nq(n, q)
    f = Fraction
    a = n * q - n - q + 2
    b = n + q - 2
    Q = RationalMatrix([
        [1, 1, 1],
        [f(q - 2, n * (q - 1)), f(-1, q - 1), 1],
        [f(-1, (n - 1) * (q - 1)), f(1, (q - 1) ** 2), 1],
    ])
    J = RationalMatrix.diagonal([f(a, q), n, 0])
    ab = a * b
    Qinv = RationalMatrix([
        [f(n * (n - 1) * (q - 1), ab), f(n * (n - 1) * (q - 1) * (q - 2), ab),
         f(-n * (n - 1) * (q - 1) ** 2, ab)],
        [f((q - 1) ** 2, q * b), f(-n * (q - 1) ** 2, q * b), f((n - 1) * (q - 1) ** 2, q * b)],
        [f(1, q * a), f(n * (q - 1), q * a), f((n - 1) * (q - 1) ** 2, q * a)],
    ])

    s_prime = s_prime_matrix(n, q)
    if mat_mul(s_prime, Q) != mat_mul(Q, J):
        raise AssertionError(f"S'Q != QJ for n={n}, q={q}")
    if mat_mul(Q, Qinv) != RationalMatrix.identity(3):
        raise AssertionError(f"Q Q^-1 != I for n={n}, q={q}")
    if J[0, 0].denominator != 1:
        logger.debug(f"J(n={n}, q={q}) has non-integral first eigenvalue {J[0, 0]}")
    return JordanTriple(n, q, Q, J, Qinv)


def _binom(a: int, b: int) -> int:
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


def krawtchouk(r: int, x: int, q: int, n: int) -> int:
    """K_r(x) = sum_j (-1)^j q^(r-j) C(n-r+j, j) C(n-x, r-j)."""
    if not 0 <= r <= n:
        raise InvalidParameterError(f"degree {r} outside [0, {n}]")
    return sum(
        (-1) ** j * q ** (r - j) * _binom(n - r + j, j) * _binom(n - x, r - j)
        for j in range(r + 1)
    )


def krawtchouk_closed_n(x: int, q: int, n: int) -> int:
    """K_n(x) = (-1)^x (q-1)^(n-x)."""
    if not 0 <= x <= n:
        raise InvalidParameterError(f"x={x} outside [0, {n}]")
    return (-1) ** x * (q - 1) ** (n - x)


def distance_i_quotient_theoretical(n: int, q: int, i: int) -> RationalMatrix:
    """Q diag(K_i(e), K_i(n), K_i(0)) Q^-1: the distance-i quotient matrix of the distance partition."""
    ctx = spectral_context(n, q)
    if not 1 <= i <= n:
        raise InvalidParameterError(f"distance {i} outside [1, {n}]")
    if not ctx.eigen_integral:
        raise InvalidParameterError(
            f"eigenvalue (nq-n-q+2)/q = {ctx.e} is not integral for n={n}, q={q}"
        )
    triple = jordan_triple(n, q)
    e = int(ctx.e)
    k = RationalMatrix.diagonal([krawtchouk(i, e, q, n), krawtchouk(i, n, q, n), krawtchouk(i, 0, q, n)])
    return mat_mul(mat_mul(triple.Q, k), triple.Qinv)


def entry31_closed(n: int, q: int) -> Fraction:
    """Entry (3,1) of the distance-n quotient matrix: (-n*m1 + e*m2 + x*m3) / (q^2 e x)."""
    ctx = spectral_context(n, q)
    if ctx.x.denominator != 1 or ctx.e.denominator != 1:
        raise InvalidParameterError(f"x={ctx.x} and e={ctx.e} must both be integral")
    x, e = int(ctx.x), int(ctx.e)
    m1 = (-1) ** e * (q - 1) ** x
    m2 = (-1) ** n
    m3 = (q - 1) ** n
    return Fraction(-n * m1 + e * m2 + x * m3, q * q * e * x)
