# src/features/search.py
"""
Exhaustive search for extended 1-perfect codes in small H(n,q).

Candidates are kept as Python-int bitsets over a rank-ordered pool; choosing a
word intersects the pool with the set of later words at distance >= 4 from it.
With normalization the all-zero word is fixed as the first codeword, which
loses nothing: symbol permutations in one coordinate are automorphisms of
H(n,q) and move any code onto one containing zero.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.constants import DEFAULT_POOL_CAP, DEFAULT_SEARCH_SPACE_BITS, ERROR_MESSAGES, SEARCH_MIN_DISTANCE
from src.features.codes import Code, verify_extended_perfect_fast
from src.features.graph import HammingSpace
from src.utils.error_handler import IntractableSearchError, InvalidParameterError
from src.utils.performance import PerformanceUtils, parallel_map, resolve_workers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchTask:
    n: int
    q: int
    normalize: bool = True
    count_only: bool = False

    def __post_init__(self):
        if self.n < 2 or self.q < 2:
            raise InvalidParameterError(f"need n >= 2 and q >= 2, got n={self.n}, q={self.q}")

    @property
    def target_size(self) -> Fraction:
        """q^(n-1) / (1+(n-1)(q-1))."""
        return Fraction(self.q ** (self.n - 1), 1 + (self.n - 1) * (self.q - 1))


@dataclass
class SearchResult:
    n: int
    q: int
    target_size: Fraction
    normalized: bool
    count: int = 0
    codes: List[Code] = field(default_factory=list)
    reason: Optional[str] = None

    @property
    def scope(self) -> str:
        return "labeled codes containing the zero word" if self.normalized else "all labeled codes"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "q": self.q,
            "target_size": str(self.target_size),
            "normalized": self.normalized,
            "scope": self.scope,
            "count": self.count,
            "reason": self.reason,
        }


class _Backtracker:
    """Depth-first enumeration of `need`-subsets of the pool with pairwise distance >= 4."""

    def __init__(self, far: List[int], need: int, keep: bool):
        self.far = far
        self.need = need
        self.keep = keep

    def run(self, chosen: Tuple[int, ...], pool: int) -> Tuple[int, List[Tuple[int, ...]]]:
        found: List[Tuple[int, ...]] = []
        count = self._extend(list(chosen), pool, found)
        return count, found

    def _extend(self, chosen: List[int], pool: int, found: List[Tuple[int, ...]]) -> int:
        if len(chosen) == self.need:
            if self.keep:
                found.append(tuple(chosen))
            return 1
        count = 0
        missing = self.need - len(chosen)
        while pool and pool.bit_count() >= missing:
            low = pool & -pool
            i = low.bit_length() - 1
            pool ^= low
            chosen.append(i)
            count += self._extend(chosen, pool & self.far[i], found)
            chosen.pop()
        return count


def _candidate_pool(space: HammingSpace, normalize: bool) -> np.ndarray:
    words = space.words(space.all_ranks())
    if normalize:
        weights = (words != 0).sum(axis=1)
        words = words[weights >= SEARCH_MIN_DISTANCE]
    return words


def _far_masks(words: np.ndarray) -> List[int]:
    """far[i] = bitset of pool indices j > i with d(w_i, w_j) >= 4."""
    size = words.shape[0]
    masks = []
    for i in range(size):
        row = (words != words[i]).sum(axis=1) >= SEARCH_MIN_DISTANCE
        row[:i + 1] = False
        masks.append(int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little"))
    return masks


def search_space_bits(pool: int, need: int) -> int:
    """Bit length of C(pool, need), the number of need-subsets before any pruning."""
    return comb(pool, need).bit_length()


def exhaustive_search(task: SearchTask, pool_cap: int = DEFAULT_POOL_CAP,
                      workers: Optional[int] = None,
                      space_bits_cap: int = DEFAULT_SEARCH_SPACE_BITS) -> SearchResult:
    """Every code of the target size with minimum distance >= 4, in lexicographic order."""
    target = task.target_size
    result = SearchResult(task.n, task.q, target, task.normalize)
    if target.denominator != 1:
        result.reason = f"target size {target} is not an integer"
        logger.info(f"H({task.n},{task.q}): {result.reason}; no codes")
        return result

    space = HammingSpace(task.n, task.q)
    words = _candidate_pool(space, task.normalize)
    if words.shape[0] > pool_cap:
        raise IntractableSearchError(ERROR_MESSAGES["pool_too_large"].format(pool=words.shape[0], cap=pool_cap))

    need = int(target) - (1 if task.normalize else 0)
    bits = search_space_bits(words.shape[0], need)
    if bits > space_bits_cap:
        raise IntractableSearchError(
            ERROR_MESSAGES["search_too_large"].format(need=need, pool=words.shape[0], bits=bits, cap=space_bits_cap),
            estimate_bits=bits)
    logger.debug(f"H({task.n},{task.q}): choosing {need} of {words.shape[0]} candidates, about 2^{bits} subsets")
    perf = PerformanceUtils()
    with perf.measure_time(f"search H({task.n},{task.q})"):
        far = _far_masks(words)
        backtracker = _Backtracker(far, need, keep=not task.count_only)
        if need == 0:
            branches = [(1, [()])]
        else:
            # one task per first choice; parallel_map keeps them in pool order
            tasks = [((i,), far[i]) for i in range(words.shape[0])]
            branches = parallel_map(lambda t: backtracker.run(*t), tasks, resolve_workers(workers))

    result.count = sum(count for count, _ in branches)
    if not task.count_only:
        zero = np.zeros((1, task.n), dtype=words.dtype)
        for _, found in branches:
            for indices in found:
                rows = words[list(indices)]
                if task.normalize:
                    rows = np.concatenate([zero, rows])
                code = Code.from_words(task.n, task.q, rows, construction="search")
                if not verify_extended_perfect_fast(code, workers=1).accepted:
                    raise AssertionError(f"search emitted a code failing the sphere-packing check: {indices}")
                result.codes.append(code)

    logger.info(f"H({task.n},{task.q}): {result.count} codes of size {target} ({result.scope})")
    return result


def count_extended_perfect(n: int, q: int, normalize: bool = False,
                           pool_cap: int = DEFAULT_POOL_CAP,
                           workers: Optional[int] = None,
                           space_bits_cap: int = DEFAULT_SEARCH_SPACE_BITS) -> int:
    task = SearchTask(n, q, normalize, count_only=True)
    return exhaustive_search(task, pool_cap, workers, space_bits_cap).count
