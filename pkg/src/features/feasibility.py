# src/features/feasibility.py
"""
Existence screening for extended 1-perfect codes in H(n,q).

A code can only exist when n-1 is a 1-perfect length (q^k-1)/(q-1), the
eigenvalue (nq-n-q+2)/q is an integer, and x = (n+q-2)/q divides
(q-2)((q-1)^x - (-1)^x).  For prime-power q the last condition leaves only
n = 2, binary lengths 2^t, and n = q+2 with q even; every other length gets a
nonexistence witness built from the smallest odd prime divisor of x.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from math import isqrt
from typing import Any, Dict, Iterable, List, Optional, Tuple

from sympy import factorint, isprime, n_order, primerange

from src.constants import (
    DEFAULT_EXACT_VALUE_LIMIT,
    DEFAULT_FULL_BITS_CAP,
    DEFAULT_TRIAL_DIVISION_BOUND,
    ERROR_MESSAGES,
)
from src.features.exact import mod_pow
from src.features.spectral import distance_i_quotient_theoretical
from src.utils.error_handler import (
    InvalidParameterError,
    WitnessNotFoundError,
    WitnessVerificationError,
)
from src.utils.performance import parallel_map, resolve_workers

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
SKIP = "skip"
ADMISSIBLE = "admissible"
EXCLUDED = "excluded"


def admissible_length(q: int, k: int) -> int:
    """n = (q^k-1)/(q-1) + 1."""
    if q < 2 or k < 1:
        raise InvalidParameterError(f"need q >= 2 and k >= 1, got q={q}, k={k}")
    return (q ** k - 1) // (q - 1) + 1


def length_exponent(n: int, q: int) -> Optional[int]:
    """k with admissible_length(q, k) == n, or None."""
    k, length = 1, 2
    while length < n:
        k += 1
        length = admissible_length(q, k)
    return k if length == n else None


def eigen_integrality(n: int, q: int) -> bool:
    if n < 2 or q < 2:
        raise InvalidParameterError(f"need n >= 2 and q >= 2, got n={n}, q={q}")
    return (n - 2) % q == 0


def prime_power(q: int) -> Optional[Tuple[int, int]]:
    """(p, m) with q = p^m, or None."""
    if q < 2:
        return None
    factors = factorint(q)
    if len(factors) != 1:
        return None
    (p, m), = factors.items()
    return p, m


def in_known_family(p: int, m: int, k: int) -> bool:
    """Parameters of a code that exists: n = 2, binary lengths 2^t, or n = q+2 with q even."""
    return k == 1 or (p == 2 and m == 1) or (p == 2 and k == 2)


@dataclass
class Check:
    name: str
    verdict: str
    detail: str

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL

    def to_dict(self) -> Dict[str, str]:
        return {"name": self.name, "verdict": self.verdict, "detail": self.detail}


def theorem1_test(n: int, q: int, exact_value_limit: int = DEFAULT_EXACT_VALUE_LIMIT) -> Check:
    """x | (q-2)((q-1)^x - (-1)^x) with x = (n+q-2)/q, decided by a residue modulo x."""
    if not eigen_integrality(n, q):
        raise InvalidParameterError(f"x = (n+q-2)/q is not integral for n={n}, q={q}")
    x = (n + q - 2) // q
    sign = 1 if x % 2 == 0 else -1
    residue = (q - 2) * (mod_pow(q - 1, x, x) - sign) % x

    if residue:
        return Check("theorem1", FAIL, f"residue {residue} mod {x}")
    if x <= exact_value_limit:
        value = (q - 2) * ((q - 1) ** x - sign) // x
        return Check("theorem1", PASS, f"value {value}")
    return Check("theorem1", PASS, f"residue 0 mod {x}")


def full_integrality_test(n: int, q: int, bits_cap: int = DEFAULT_FULL_BITS_CAP,
                          exact_value_limit: int = DEFAULT_EXACT_VALUE_LIMIT) -> Check:
    """Every entry of the distance-n quotient matrix must be a nonnegative integer."""
    if not eigen_integrality(n, q):
        raise InvalidParameterError(f"eigenvalue (nq-n-q+2)/q is not integral for n={n}, q={q}")
    bits = n * (q - 1).bit_length()
    if bits > bits_cap:
        logger.warning(f"(q-1)^n has about {bits} bits, over the cap of {bits_cap}; "
                       "falling back to the divisibility test")
        fallback = theorem1_test(n, q, exact_value_limit)
        return Check("full_integrality", fallback.verdict, f"fallback to theorem1: {fallback.detail}")

    matrix = distance_i_quotient_theoretical(n, q, n)
    for i in range(matrix.rows):
        for j in range(matrix.cols):
            value = matrix[i, j]
            if value.denominator != 1 or value < 0:
                return Check("full_integrality", FAIL, f"entry ({i + 1},{j + 1}) = {value}")
    return Check("full_integrality", PASS, "all entries are nonnegative integers")


class WitnessKind(Enum):
    PARITY_E = "ParityE"
    ORDER_A = "OrderA"
    GCD_B = "GcdB"


@dataclass
class NonexistenceWitness:
    kind: WitnessKind
    p: int
    m: int
    k: int
    x: int
    x_or_half: int
    t: Optional[int]
    d: Optional[int]
    violated: str

    @property
    def q(self) -> int:
        return self.p ** self.m

    @property
    def n(self) -> int:
        return admissible_length(self.q, self.k)

    def describe(self) -> str:
        parts = [self.kind.value, f"x={self.x}"]
        if self.t is not None:
            parts.append(f"t={self.t}")
        if self.d is not None:
            parts.append(f"d={self.d}")
        return " ".join(parts) + f": {self.violated}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "x": str(self.x),
            "x_or_half": str(self.x_or_half),
            "t": self.t,
            "d": self.d,
            "violated": self.violated,
        }


def _x_value(q: int, k: int) -> int:
    return (q ** (k - 1) + q - 2) // (q - 1)


def smallest_odd_prime_divisor(y: int, bound: int = DEFAULT_TRIAL_DIVISION_BOUND) -> int:
    """Smallest odd prime dividing y, by trial division up to bound."""
    odd = y
    while odd and odd % 2 == 0:
        odd //= 2
    if odd <= 1:
        raise WitnessNotFoundError(f"{y} has no odd prime divisor")
    if isprime(odd):
        return odd
    root = isqrt(odd)
    for t in primerange(3, min(bound, root) + 1):
        if odd % t == 0:
            return t
    if root <= bound:
        raise AssertionError(f"{odd} is composite but has no prime factor up to its square root")
    raise WitnessNotFoundError(f"no odd prime divisor of {y} up to {bound}")


def _refuting_residue(q: int, x: int, t: int) -> int:
    sign = 1 if x % 2 == 0 else -1
    return (q - 2) * (mod_pow(q - 1, x, t) - sign) % t


def nonexistence_witness(p: int, m: int, k: int,
                         bound: int = DEFAULT_TRIAL_DIVISION_BOUND) -> NonexistenceWitness:
    """Proof trace that x does not divide (q-2)((q-1)^x - (-1)^x) for excluded (p, m, k)."""
    if not isprime(p) or m < 1 or k < 1:
        raise InvalidParameterError(f"need p prime, m >= 1, k >= 1; got p={p}, m={m}, k={k}")
    if in_known_family(p, m, k):
        raise InvalidParameterError(f"(p={p}, m={m}, k={k}) is realized by a known code")
    q = p ** m
    x = _x_value(q, k)

    if p > 2 and x % 2 == 0:
        witness = NonexistenceWitness(
            WitnessKind.PARITY_E, p, m, k, x, x, None, None,
            "(q-2)((q-1)^x-(-1)^x) is odd while x is even")
        verify_witness(witness)
        return witness

    x_or_half = x if p > 2 else x // 2
    t = smallest_odd_prime_divisor(x_or_half, bound)

    if (q - 1) % t == 0:
        witness = NonexistenceWitness(
            WitnessKind.GCD_B, p, m, k, x, x_or_half, t, 0,
            f"t divides both x and q-1, leaving residue {_refuting_residue(q, x, t)} mod t")
    else:
        d = n_order(q - 1, t)
        if (2 * x) % d == 0:
            raise WitnessNotFoundError(f"order {d} of q-1 mod {t} divides 2x for q={q}, k={k}")
        witness = NonexistenceWitness(
            WitnessKind.ORDER_A, p, m, k, x, x_or_half, t, d, f"ord_t(q-1) = {d} does not divide 2x")

    verify_witness(witness)
    logger.debug(f"witness for q={q}, k={k}: {witness.describe()}")
    return witness


def verify_witness(w: NonexistenceWitness) -> bool:
    """Recompute every claim of a witness; raise WitnessVerificationError on the first false one."""
    q = w.q
    x = _x_value(q, w.k)

    def require(condition: bool, claim: str):
        if not condition:
            raise WitnessVerificationError(f"{w.kind.value} witness for q={q}, k={w.k}: {claim}")

    require(w.x == x, f"x is {x}, not {w.x}")
    if w.kind is WitnessKind.PARITY_E:
        require(w.p > 2, "parity witness needs odd p")
        require(x % 2 == 0, "x is odd")
        require((q - 2) * (mod_pow(q - 1, x, 2) - 1) % 2 == 1, "numerator is even")
        return True

    t = w.t
    require(t is not None and t > 2 and isprime(t), f"t={t} is not an odd prime")
    require(w.x_or_half == (x if w.p > 2 else x // 2), "x_or_half does not match x")
    require(w.x_or_half % t == 0, f"t={t} does not divide {w.x_or_half}")
    require(_refuting_residue(q, x, t) != 0, f"(q-2)((q-1)^x-(-1)^x) vanishes mod {t}")

    if w.kind is WitnessKind.ORDER_A:
        require(q * (q - 1) * (q - 2) % t != 0, "t shares a factor with q(q-1)(q-2)")
        require(mod_pow(q - 1, w.d, t) == 1 and w.d == n_order(q - 1, t), f"d={w.d} is not ord_t(q-1)")
        require((2 * x) % w.d != 0, f"d={w.d} divides 2x")
    else:
        require((q - 1) % t == 0, f"t={t} does not divide q-1")
        require(w.d == 0, f"d={w.d} recorded for an undefined order")
    return True


@dataclass
class FeasibilityReport:
    n: int
    q: int
    p: Optional[int] = None
    m: Optional[int] = None
    k: Optional[int] = None
    checks: List[Check] = field(default_factory=list)
    witness: Optional[NonexistenceWitness] = None

    @property
    def verdict(self) -> str:
        return EXCLUDED if any(c.failed for c in self.checks) else ADMISSIBLE

    @property
    def admissible(self) -> bool:
        return self.verdict == ADMISSIBLE

    def failed_checks(self) -> List[Check]:
        return [c for c in self.checks if c.failed]

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "n": self.n,
            "q": self.q,
            "p": self.p,
            "m": self.m,
            "k": self.k,
            "checks": [c.to_dict() for c in self.checks],
            "verdict": self.verdict,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        return out


def feasibility_report(n: int, q: int, full: bool = False,
                       exact_value_limit: int = DEFAULT_EXACT_VALUE_LIMIT,
                       bits_cap: int = DEFAULT_FULL_BITS_CAP,
                       bound: int = DEFAULT_TRIAL_DIVISION_BOUND) -> FeasibilityReport:
    """Run every applicable necessary condition on (n, q) and attach a witness to exclusions."""
    if n < 2 or q < 2:
        raise InvalidParameterError(f"need n >= 2 and q >= 2, got n={n}, q={q}")
    report = FeasibilityReport(n, q)
    decomposition = prime_power(q)
    if decomposition:
        report.p, report.m = decomposition
        report.k = length_exponent(n, q)
        if report.k is None:
            report.checks.append(Check("admissible_length", FAIL,
                                       f"n-1 = {n - 1} is not (q^k-1)/(q-1)"))
        else:
            report.checks.append(Check("admissible_length", PASS, f"k={report.k}"))

    if not eigen_integrality(n, q):
        report.checks.append(Check("eigen_integrality", FAIL, f"{q} does not divide n-2 = {n - 2}"))
        return report
    report.checks.append(Check("eigen_integrality", PASS, f"{q} divides n-2 = {n - 2}"))

    report.checks.append(theorem1_test(n, q, exact_value_limit))
    if full:
        report.checks.append(full_integrality_test(n, q, bits_cap, exact_value_limit))

    if report.k is not None and not in_known_family(report.p, report.m, report.k):
        try:
            report.witness = nonexistence_witness(report.p, report.m, report.k, bound)
        except WitnessNotFoundError as e:
            logger.warning(f"n={n}, q={q}: {e}; exclusion rests on the theorem1 residue")
    return report


def _classify_one(args) -> FeasibilityReport:
    p, m, k, full, bound = args
    q = p ** m
    n = admissible_length(q, k)
    if k == 1:
        return FeasibilityReport(n, q, p, m, k, [
            Check("admissible_length", PASS, "k=1"),
            Check("trivial_family", PASS, "a single vertex of H(2,q)"),
        ])
    report = feasibility_report(n, q, full, bound=bound)
    if report.admissible != in_known_family(p, m, k):
        logger.error(f"q={q}, k={k}: checks say {report.verdict}, known families disagree")
    return report


def classify(p: int, m: int, k_max: int, full: bool = False,
             bound: int = DEFAULT_TRIAL_DIVISION_BOUND,
             workers: Optional[int] = None) -> List[FeasibilityReport]:
    """One report per admissible length n = (q^k-1)/(q-1)+1, k = 1..k_max, for q = p^m."""
    if not isprime(p):
        raise InvalidParameterError(f"p={p} is not prime")
    if m < 1 or k_max < 1:
        raise InvalidParameterError(f"need m >= 1 and k_max >= 1, got m={m}, k_max={k_max}")
    tasks = [(p, m, k, full, bound) for k in range(1, k_max + 1)]
    reports = parallel_map(_classify_one, tasks, resolve_workers(workers))
    logger.info(f"q={p ** m}: {sum(r.admissible for r in reports)} of {len(reports)} lengths admissible")
    return reports


def scan(q_list: Iterable[int], k_max: int, full: bool = False,
         bound: int = DEFAULT_TRIAL_DIVISION_BOUND,
         workers: Optional[int] = None) -> List[FeasibilityReport]:
    """Admissible (n, q) over several prime powers, sorted by q then n."""
    decompositions = []
    for q in sorted(set(q_list)):
        pm = prime_power(q)
        if pm is None:
            raise InvalidParameterError(ERROR_MESSAGES["not_prime_power"].format(q=q))
        decompositions.append(pm)

    admissible = []
    for p, m in decompositions:
        admissible.extend(r for r in classify(p, m, k_max, full, bound, workers) if r.admissible)
    admissible.sort(key=lambda r: (r.q, r.n))
    return admissible
