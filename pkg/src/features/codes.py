# src/features/codes.py
"""
Known (extended) 1-perfect code families and three independent verification
routes for extended perfectness: the equitable-partition test, the
puncturing definition, and the sphere-packing shortcut.
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.constants import (
    DEFAULT_ENUMERATION_CAP,
    DEFAULT_MATERIALIZE_CAP,
    ERROR_MESSAGES,
    QUOTIENT_CHUNK_SIZE,
    SYMBOL_DTYPE,
)
from src.features.exact import RationalMatrix
from src.features.finitefield import FieldSpec, field_make, get_field
from src.features.graph import (
    HammingSpace,
    InequitabilityWitness,
    check_cap,
    distance_partition,
    quotient_matrix,
)
from src.features.spectral import prop1_matrix
from src.utils.error_handler import CodeFormatError, InvalidParameterError
from src.utils.performance import parallel_map, resolve_workers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParityCheck:
    """Linear description: check matrix and a null-space basis, both as element labels."""
    field: FieldSpec
    matrix: Tuple[Tuple[int, ...], ...]
    generator: Tuple[Tuple[int, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.generator)


def _span_block(args) -> np.ndarray:
    spec, generator, start, stop = args
    gf = get_field(spec)
    k, n = generator.shape
    messages = HammingSpace(k, spec.order).words(np.arange(start, stop))
    acc = np.zeros((stop - start, n), dtype=np.int64)
    for j in range(k):
        acc = gf.add_table[acc, gf.mul_table[messages[:, j][:, None], generator[j][None, :]]]
    return acc.astype(SYMBOL_DTYPE)


@dataclass(eq=False)
class Code:
    """A set of words of length n over {0..q-1}; rows of `words` are sorted and distinct."""
    n: int
    q: int
    words: Optional[np.ndarray] = None
    parity_check: Optional[ParityCheck] = None
    parameters: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1 or self.q < 2:
            raise InvalidParameterError(f"H({self.n},{self.q}) needs n >= 1 and q >= 2")
        if self.words is None:
            if self.parity_check is None:
                raise InvalidParameterError("a code needs explicit words or a parity-check matrix")
            return
        words = np.asarray(self.words, dtype=SYMBOL_DTYPE).reshape(-1, self.n)
        if words.size and (words.min() < 0 or words.max() >= self.q):
            raise InvalidParameterError(f"symbol outside [0, {self.q})")
        words.flags.writeable = False
        self.words = words

    @classmethod
    def from_words(cls, n: int, q: int, words: Sequence[Sequence[int]],
                   merge_duplicates: bool = False, **parameters) -> "Code":
        array = np.asarray(words, dtype=SYMBOL_DTYPE).reshape(-1, n)
        unique = np.unique(array, axis=0) if array.size else array
        if unique.shape[0] != array.shape[0] and not merge_duplicates:
            raise CodeFormatError(f"{array.shape[0] - unique.shape[0]} duplicate codewords")
        return cls(n, q, unique, parameters={k: str(v) for k, v in parameters.items()})

    @property
    def is_materialized(self) -> bool:
        return self.words is not None

    @property
    def dimension(self) -> Optional[int]:
        return self.parity_check.dimension if self.parity_check else None

    @property
    def size(self) -> int:
        if self.words is not None:
            return int(self.words.shape[0])
        return self.q ** self.parity_check.dimension

    def word_list(self) -> List[Tuple[int, ...]]:
        return [tuple(int(s) for s in w) for w in self._require_words("listing")]

    def ranks(self) -> np.ndarray:
        return HammingSpace(self.n, self.q).ranks(self._require_words("ranking"))

    def _require_words(self, route: str) -> np.ndarray:
        if self.words is None:
            raise InvalidParameterError(ERROR_MESSAGES["not_materialized"].format(route=route))
        return self.words

    def iter_codeword_blocks(self, block_size: int = QUOTIENT_CHUNK_SIZE):
        """Codewords in blocks; linear codes without explicit words are spanned from the message space."""
        if self.words is not None:
            for start in range(0, self.size, block_size):
                yield self.words[start:start + block_size]
            return
        generator = np.array(self.parity_check.generator, dtype=np.int64)
        for start in range(0, self.size, block_size):
            yield _span_block((self.parity_check.field, generator, start, min(start + block_size, self.size)))

    def weight_distribution(self) -> List[int]:
        counts = np.zeros(self.n + 1, dtype=np.int64)
        for block in self.iter_codeword_blocks():
            counts += np.bincount((block != 0).sum(axis=1), minlength=self.n + 1)
        return [int(c) for c in counts]

    def closest_pair(self, workers: Optional[int] = None) -> Optional[Tuple[int, Tuple[int, ...], Tuple[int, ...]]]:
        """(distance, u, v) for a pair of codewords at minimum distance; None below two words."""
        if self.size < 2:
            return None
        if self.parity_check is not None:
            best = None
            for block in self.iter_codeword_blocks():
                weights = (block != 0).sum(axis=1)
                weights[weights == 0] = self.n + 1
                j = int(np.argmin(weights))
                if best is None or weights[j] < best[0]:
                    best = (int(weights[j]), tuple(int(s) for s in block[j]))
            return best[0], (0,) * self.n, best[1]

        words = self.words
        tasks = [(words, start, min(start + 256, words.shape[0] - 1))
                 for start in range(0, words.shape[0] - 1, 256)]
        candidates = [c for c in parallel_map(_pairwise_min, tasks, resolve_workers(workers)) if c]
        d, i, j = min(candidates)
        return d, tuple(int(s) for s in words[i]), tuple(int(s) for s in words[j])

    def min_distance(self, workers: Optional[int] = None) -> Optional[int]:
        pair = self.closest_pair(workers)
        return pair[0] if pair else None


def _pairwise_min(args) -> Optional[Tuple[int, int, int]]:
    words, start, stop = args
    best = None
    for i in range(start, stop):
        dists = (words[i + 1:] != words[i]).sum(axis=1)
        j = int(np.argmin(dists))
        if best is None or dists[j] < best[0]:
            best = (int(dists[j]), i, i + 1 + j)
    return best


def linear_code(spec: FieldSpec, h: Sequence[Sequence[int]],
                materialize_cap: int = DEFAULT_MATERIALIZE_CAP, **parameters) -> Code:
    """Null space of h over spec; words are materialized when q^dim fits the cap."""
    gf = get_field(spec)
    basis = gf.null_space(h)
    n = len(h[0])
    check = ParityCheck(spec, tuple(tuple(int(v) for v in row) for row in h), tuple(basis))
    parameters.setdefault("field", spec.describe())
    parameters = {k: str(v) for k, v in parameters.items()}
    size = spec.order ** len(basis)

    if size > materialize_cap:
        logger.warning(f"code of size {size} exceeds the materialize cap {materialize_cap}; "
                       "keeping the parity-check representation only")
        return Code(n, spec.order, None, check, parameters)

    if basis:
        words = _span_block((spec, np.array(basis, dtype=np.int64), 0, size))
        words = np.unique(words, axis=0)
    else:
        words = np.zeros((1, n), dtype=SYMBOL_DTYPE)
    return Code(n, spec.order, words, check, parameters)


def construct_trivial(q: int) -> Code:
    """The one-vertex code {(0,0)} in H(2,q)."""
    if q < 2:
        raise InvalidParameterError(f"q must be >= 2, got {q}")
    return Code.from_words(2, q, [[0, 0]], construction="trivial", alphabet=q)


def projective_points(spec: FieldSpec, t: int) -> List[Tuple[int, ...]]:
    """One representative per point of PG(t-1, q): first nonzero coordinate equal to 1."""
    points = []
    for vector in itertools.product(range(spec.order), repeat=t):
        leading = next((v for v in vector if v != 0), None)
        if leading == 1:
            points.append(vector)
    return points


def construct_hamming(spec: FieldSpec, t: int,
                      materialize_cap: int = DEFAULT_MATERIALIZE_CAP) -> Code:
    """Linear 1-perfect code of length (q^t-1)/(q-1) and redundancy t."""
    if t < 2:
        raise InvalidParameterError(f"t must be >= 2, got {t}")
    columns = projective_points(spec, t)
    h = [[col[r] for col in columns] for r in range(t)]
    code = linear_code(spec, h, materialize_cap, construction="hamming", t=t)
    logger.info(f"Hamming code: length {code.n}, size {code.size} over {spec.describe()}")
    return code


def construct_extended_binary_hamming(t: int,
                                      materialize_cap: int = DEFAULT_MATERIALIZE_CAP) -> Code:
    """Binary Hamming code of redundancy t with an overall parity bit; length 2^t."""
    if t < 2:
        raise InvalidParameterError(f"t must be >= 2, got {t}")
    spec = field_make(2, 1)
    columns = projective_points(spec, t)
    h = [[col[r] for col in columns] + [0] for r in range(t)]
    h.append([1] * (len(columns) + 1))
    return linear_code(spec, h, materialize_cap, construction="extended-hamming", t=t)


def construct_extended_rs(m: int, modulus: Optional[Sequence[int]] = None,
                          materialize_cap: int = DEFAULT_MATERIALIZE_CAP) -> Code:
    """[q+2, q-1, 4] code over GF(2^m) whose check columns form a hyperoval (conic plus nucleus)."""
    if m < 1:
        raise InvalidParameterError(f"m must be >= 1, got {m}")
    spec = field_make(2, m, modulus)
    gf = get_field(spec)
    columns = [(1, a, gf.mul(a, a)) for a in range(spec.order)]
    columns += [(0, 1, 0), (0, 0, 1)]
    h = [[col[r] for col in columns] for r in range(3)]
    code = linear_code(spec, h, materialize_cap, construction="extended-rs", m=m)
    logger.info(f"hyperoval code: length {code.n}, size {code.size} over {spec.describe()}")
    return code


def construct_extended_perfect(n: int, q: int, materialize_cap: int = DEFAULT_MATERIALIZE_CAP) -> Code:
    """Pick the known family realizing an extended 1-perfect code in H(n,q)."""
    if n == 2:
        return construct_trivial(q)
    if q == 2 and n >= 4 and n & (n - 1) == 0:
        return construct_extended_binary_hamming(n.bit_length() - 1, materialize_cap)
    m = q.bit_length() - 1
    if q >= 2 and q == 1 << m and n == q + 2:
        return construct_extended_rs(m, materialize_cap=materialize_cap)
    raise InvalidParameterError(f"no known extended 1-perfect code in H({n},{q})")


def puncture(code: Code, coord: int) -> Code:
    """Delete one coordinate from every word; coinciding words merge."""
    if not 0 <= coord < code.n:
        raise InvalidParameterError(f"coordinate {coord} outside [0, {code.n})")
    if code.n < 2:
        raise InvalidParameterError("cannot puncture a code of length 1")
    words = np.delete(code._require_words("puncture"), coord, axis=1)
    punctured = Code.from_words(code.n - 1, code.q, words, merge_duplicates=True, **code.parameters)
    punctured.parameters["punctured"] = str(coord)
    return punctured


class Route(Enum):
    PERFECT = "perfect"
    PROP1 = "prop1"
    PUNCTURE = "puncture"
    FAST = "fast"


@dataclass
class FailureWitness:
    kind: str  # vertex | pair | coordinate | size
    detail: str
    vertex: Optional[Tuple[int, ...]] = None
    other: Optional[Tuple[int, ...]] = None
    coordinate: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "detail": self.detail,
            "vertex": list(self.vertex) if self.vertex is not None else None,
            "other": list(self.other) if self.other is not None else None,
            "coordinate": self.coordinate,
        }


@dataclass
class VerificationReport:
    route: Route
    accepted: bool
    n: int
    q: int
    size: int
    quotient: Optional[RationalMatrix] = None
    failure_witness: Optional[FailureWitness] = None

    @property
    def verdict(self) -> str:
        return "accept" if self.accepted else "reject"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "route": self.route.value,
            "verdict": self.verdict,
            "n": self.n,
            "q": self.q,
            "size": self.size,
            "quotient": self.quotient.to_json() if self.quotient is not None else None,
            "witness": self.failure_witness.to_dict() if self.failure_witness else None,
        }


def _word(space: HammingSpace, rank) -> Tuple[int, ...]:
    return space.unrank(int(rank))


def _reject(route: Route, code: Code, witness: FailureWitness) -> VerificationReport:
    logger.info(f"{route.value}: reject ({witness.detail})")
    return VerificationReport(route, False, code.n, code.q, code.size, failure_witness=witness)


def _check_extended_length(code: Code):
    if code.n < 2:
        raise InvalidParameterError("extended 1-perfect codes need n >= 2")


def verify_perfect(code: Code, cap: int = DEFAULT_ENUMERATION_CAP,
                   workers: Optional[int] = None) -> VerificationReport:
    """Accept iff the radius-1 balls around the codewords tile the vertex set."""
    check_cap(code.n, code.q, 1, cap)
    space = HammingSpace(code.n, code.q)
    ranks = code.ranks()
    record = distance_partition(ranks, code.n, code.q, cap)
    cells = record.partition.cells

    if record.covering_radius > 1:
        far = int(np.flatnonzero(cells == record.covering_radius)[0])
        return _reject(Route.PERFECT, code, FailureWitness(
            "vertex", f"vertex at distance {record.covering_radius} from the code",
            vertex=_word(space, far)))

    coverage = np.bincount(np.concatenate([ranks, space.neighbours(ranks)]), minlength=space.size)
    overlapping = np.flatnonzero(coverage > 1)
    if overlapping.size:
        v = int(overlapping[0])
        return _reject(Route.PERFECT, code, FailureWitness(
            "vertex", f"vertex covered by {int(coverage[v])} balls", vertex=_word(space, v)))

    quotient = quotient_matrix(record.partition, code.n, code.q, 1, cap, workers)
    return VerificationReport(Route.PERFECT, True, code.n, code.q, code.size, quotient=quotient)


def verify_extended_perfect_prop1(code: Code, cap: int = DEFAULT_ENUMERATION_CAP,
                                  workers: Optional[int] = None) -> VerificationReport:
    """Accept iff the distance partition has three cells and its quotient matrix is prop1_matrix(n,q)."""
    _check_extended_length(code)
    check_cap(code.n, code.q, 1, cap)
    space = HammingSpace(code.n, code.q)
    record = distance_partition(code.ranks(), code.n, code.q, cap)
    cells = record.partition.cells

    if record.covering_radius != 2:
        v = int(np.flatnonzero(cells == record.covering_radius)[0])
        return _reject(Route.PROP1, code, FailureWitness(
            "vertex", f"covering radius {record.covering_radius}, expected 2", vertex=_word(space, v)))

    quotient = quotient_matrix(record.partition, code.n, code.q, 1, cap, workers)
    if isinstance(quotient, InequitabilityWitness):
        return _reject(Route.PROP1, code, FailureWitness(
            "vertex", quotient.describe(), vertex=quotient.vertex, other=quotient.other_vertex))

    expected = prop1_matrix(code.n, code.q)
    if quotient != expected:
        a = next(i for i in range(3) if quotient.row(i) != expected.row(i))
        v = int(np.flatnonzero(cells == a)[0])
        report = _reject(Route.PROP1, code, FailureWitness(
            "vertex", f"equitable, but quotient row {a} is {[str(x) for x in quotient.row(a)]}",
            vertex=_word(space, v)))
        report.quotient = quotient
        return report

    record.quotients[1] = quotient
    return VerificationReport(Route.PROP1, True, code.n, code.q, code.size, quotient=quotient)


def verify_extended_perfect_puncture(code: Code, cap: int = DEFAULT_ENUMERATION_CAP,
                                     workers: Optional[int] = None) -> VerificationReport:
    """Accept iff every one of the n puncturings is a 1-perfect code."""
    _check_extended_length(code)
    for coord in range(code.n):
        inner = verify_perfect(puncture(code, coord), cap, workers)
        if not inner.accepted:
            return _reject(Route.PUNCTURE, code, FailureWitness(
                "coordinate", f"puncturing coordinate {coord}: {inner.failure_witness.detail}",
                vertex=inner.failure_witness.vertex, coordinate=coord))
    return VerificationReport(Route.PUNCTURE, True, code.n, code.q, code.size)


def verify_extended_perfect_fast(code: Code, workers: Optional[int] = None) -> VerificationReport:
    """Sphere-packing shortcut: |C| = q^(n-1)/(1+(n-1)(q-1)) and minimum distance >= 4."""
    _check_extended_length(code)
    n, q = code.n, code.q
    ball = 1 + (n - 1) * (q - 1)
    total = q ** (n - 1)

    pair = code.closest_pair(workers)
    if pair is not None and pair[0] < 4:
        d, u, v = pair
        return _reject(Route.FAST, code, FailureWitness(
            "pair", f"codewords at distance {d} < 4", vertex=u, other=v))
    if total % ball:
        return _reject(Route.FAST, code, FailureWitness(
            "size", f"{ball} does not divide {q}^{n - 1}"))
    if code.size != total // ball:
        return _reject(Route.FAST, code, FailureWitness(
            "size", f"size {code.size} differs from {q}^{n - 1}/{ball} = {total // ball}"))
    return VerificationReport(Route.FAST, True, n, q, code.size)


def verify_all(code: Code, cap: int = DEFAULT_ENUMERATION_CAP,
               workers: Optional[int] = None) -> List[VerificationReport]:
    """Every applicable extended-perfect route; codes held only as check matrices get the fast route."""
    reports = [verify_extended_perfect_fast(code, workers)]
    if code.is_materialized:
        reports.insert(0, verify_extended_perfect_prop1(code, cap, workers))
        reports.insert(1, verify_extended_perfect_puncture(code, cap, workers))
    else:
        logger.warning("code is held as a parity-check matrix only; running the fast route alone")
    if len({r.accepted for r in reports}) > 1:
        logger.error(f"verification routes disagree for H({code.n},{code.q}): "
                     f"{[(r.route.value, r.verdict) for r in reports]}")
    return reports
