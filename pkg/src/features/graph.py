# src/features/graph.py
"""
Hamming graph H(n,q) and its distance-i graphs.

Vertices are identified by their lexicographic rank (the word read as a
base-q integer, first symbol most significant).  Nothing here materializes an
adjacency matrix: neighbours are generated as rank offsets.
"""

import itertools
import logging
from dataclasses import dataclass, field
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.constants import DEFAULT_ENUMERATION_CAP, QUOTIENT_CHUNK_SIZE, RANK_DTYPE, SYMBOL_DTYPE
from src.features.exact import RationalMatrix
from src.utils.error_handler import (
    DimensionError,
    EnumerationCapExceeded,
    InvalidParameterError,
)
from src.utils.performance import parallel_map, resolve_workers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Word:
    symbols: Tuple[int, ...]
    q: int

    def __post_init__(self):
        if self.q < 2:
            raise InvalidParameterError(f"alphabet size must be >= 2, got {self.q}")
        if any(not 0 <= s < self.q for s in self.symbols):
            raise InvalidParameterError(f"symbol outside [0, {self.q}) in {self.symbols}")

    @property
    def n(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        sep = "" if self.q <= 10 else " "
        return sep.join(str(s) for s in self.symbols)


def hamming_distance(u: Word, v: Word) -> int:
    """Number of coordinates in which u and v differ."""
    if (u.n, u.q) != (v.n, v.q):
        raise DimensionError(f"words from H({u.n},{u.q}) and H({v.n},{v.q})")
    return sum(a != b for a, b in zip(u.symbols, v.symbols))


def sphere_size(n: int, q: int, i: int) -> int:
    """Number of vertices at distance exactly i from a fixed vertex: C(n,i)(q-1)^i."""
    if not 0 <= i <= n:
        raise InvalidParameterError(f"distance {i} outside [0, {n}]")
    return comb(n, i) * (q - 1) ** i


def enumeration_cost(n: int, q: int, i: int = 1) -> int:
    """Vertex-visits of a full sweep of the distance-i graph."""
    return q ** n * sphere_size(n, q, i)


def check_cap(n: int, q: int, i: int = 1, cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    cost = enumeration_cost(n, q, i)
    if cost > cap:
        raise EnumerationCapExceeded(cost, cap)
    logger.debug(f"H({n},{q}) distance-{i} sweep: {cost} vertex-visits")
    return cost


class HammingSpace:
    """Rank/unrank and neighbour generation for the vertices of H(n,q)."""

    def __init__(self, n: int, q: int):
        if n < 1 or q < 2:
            raise InvalidParameterError(f"H({n},{q}) needs n >= 1 and q >= 2")
        self.n = n
        self.q = q
        self.size = q ** n
        self.powers = np.array([q ** (n - 1 - j) for j in range(n)], dtype=RANK_DTYPE)

    def rank(self, word: Sequence[int]) -> int:
        r = 0
        for s in word:
            r = r * self.q + int(s)
        return r

    def unrank(self, r: int) -> Tuple[int, ...]:
        return tuple(int(v) for v in (r // self.powers) % self.q)

    def word(self, r: int) -> Word:
        return Word(self.unrank(r), self.q)

    def ranks(self, words: np.ndarray) -> np.ndarray:
        return np.asarray(words, dtype=RANK_DTYPE) @ self.powers

    def words(self, ranks: np.ndarray) -> np.ndarray:
        ranks = np.asarray(ranks, dtype=RANK_DTYPE)
        return ((ranks[:, None] // self.powers) % self.q).astype(SYMBOL_DTYPE)

    def all_ranks(self, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
        return np.arange(start, self.size if stop is None else stop, dtype=RANK_DTYPE)

    def shift_offsets(self, ranks: np.ndarray) -> np.ndarray:
        """offsets[j, s-1, v] = rank change when coordinate j of vertex v is shifted by s."""
        digits = (ranks[None, :] // self.powers[:, None]) % self.q
        shifts = np.arange(1, self.q, dtype=RANK_DTYPE)
        moved = (digits[:, None, :] + shifts[None, :, None]) % self.q
        return (moved - digits[:, None, :]) * self.powers[:, None, None]

    def neighbours(self, ranks: np.ndarray) -> np.ndarray:
        """All distance-1 neighbours of the given vertices, flattened."""
        ranks = np.asarray(ranks, dtype=RANK_DTYPE)
        return (ranks[None, None, :] + self.shift_offsets(ranks)).ravel()


@dataclass
class Partition:
    """Cell index per vertex rank; cells are numbered 0..r-1 and none is empty."""
    cells: np.ndarray
    r: int

    def __post_init__(self):
        if self.cells.ndim != 1 or self.cells.size == 0:
            raise InvalidParameterError("partition needs one cell index per vertex")
        sizes = np.bincount(self.cells, minlength=self.r)
        if sizes.size != self.r or np.any(sizes == 0):
            raise InvalidParameterError(f"partition into {self.r} cells has an empty or extra cell")

    @property
    def cell_sizes(self) -> List[int]:
        return [int(v) for v in np.bincount(self.cells, minlength=self.r)]

    def lines(self) -> Iterable[str]:
        """Text export, one "rank cell" line per vertex."""
        for rank, cell in enumerate(self.cells):
            yield f"{rank} {int(cell)}"


@dataclass
class InequitabilityWitness:
    """Two vertices of one cell with different neighbour counts in another cell."""
    cell: int
    other_cell: int
    vertex: Tuple[int, ...]
    count: int
    other_vertex: Tuple[int, ...]
    other_count: int
    distance: int

    def describe(self) -> str:
        word_a = "".join(str(s) for s in self.vertex)
        word_b = "".join(str(s) for s in self.other_vertex)
        return (f"cell {self.cell}: {word_a} has {self.count} and {word_b} has "
                f"{self.other_count} cell-{self.other_cell} vertices at distance {self.distance}")


@dataclass
class DistancePartitionRecord:
    n: int
    q: int
    partition: Partition
    covering_radius: int
    cell_sizes: List[int]
    quotients: Dict[int, RationalMatrix] = field(default_factory=dict)


def distance_partition(code_ranks: np.ndarray, n: int, q: int,
                       cap: int = DEFAULT_ENUMERATION_CAP) -> DistancePartitionRecord:
    """Multi-source breadth-first sweep: cell i holds the vertices at distance i from the code."""
    code_ranks = np.unique(np.asarray(code_ranks, dtype=RANK_DTYPE))
    if code_ranks.size == 0:
        raise InvalidParameterError("distance partition of an empty code")
    check_cap(n, q, 1, cap)
    space = HammingSpace(n, q)

    dist = np.full(space.size, -1, dtype=np.int32)
    dist[code_ranks] = 0
    frontier = code_ranks
    level = 0
    while frontier.size:
        reached = np.unique(space.neighbours(frontier))
        frontier = reached[dist[reached] < 0]
        if frontier.size:
            level += 1
            dist[frontier] = level

    partition = Partition(dist.astype(np.int64), level + 1)
    logger.info(f"distance partition in H({n},{q}): covering radius {level}, cells {partition.cell_sizes}")
    return DistancePartitionRecord(n, q, partition, level, partition.cell_sizes)


def _perturbation_offsets(space: HammingSpace, ranks: np.ndarray, i: int) -> Iterable[np.ndarray]:
    """Rank offsets of every distance-i perturbation, C(n,i)(q-1)^i arrays in total."""
    offsets = space.shift_offsets(ranks)
    for coords in itertools.combinations(range(space.n), i):
        for shifts in itertools.product(range(space.q - 1), repeat=i):
            yield sum(offsets[j, s] for j, s in zip(coords, shifts))


def _count_block(args) -> np.ndarray:
    space, cells, r, i, start, stop = args
    ranks = space.all_ranks(start, stop)
    counts = np.zeros((ranks.size, r), dtype=np.int64)
    rows = np.arange(ranks.size)
    for delta in _perturbation_offsets(space, ranks, i):
        counts[rows, cells[ranks + delta]] += 1
    return counts


def neighbour_counts(partition: Partition, n: int, q: int, dist: int,
                     cap: int = DEFAULT_ENUMERATION_CAP,
                     workers: Optional[int] = None) -> np.ndarray:
    """counts[v, b] = number of cell-b vertices at distance exactly dist from vertex v."""
    if not 1 <= dist <= n:
        raise InvalidParameterError(f"distance {dist} outside [1, {n}]")
    space = HammingSpace(n, q)
    if partition.cells.size != space.size:
        raise DimensionError(f"partition has {partition.cells.size} vertices, H({n},{q}) has {space.size}")
    check_cap(n, q, dist, cap)
    blocks = [(space, partition.cells, partition.r, dist, start, min(start + QUOTIENT_CHUNK_SIZE, space.size))
              for start in range(0, space.size, QUOTIENT_CHUNK_SIZE)]
    return np.concatenate(parallel_map(_count_block, blocks, resolve_workers(workers)))


def quotient_matrix(partition: Partition, n: int, q: int, dist: int = 1,
                    cap: int = DEFAULT_ENUMERATION_CAP,
                    workers: Optional[int] = None) -> Union[RationalMatrix, InequitabilityWitness]:
    """Quotient matrix of the partition in the distance-dist graph, or a witness of inequitability."""
    counts = neighbour_counts(partition, n, q, dist, cap, workers)
    space = HammingSpace(n, q)
    rows = []
    for a in range(partition.r):
        members = np.flatnonzero(partition.cells == a)
        block = counts[members]
        first = block[0]
        mismatch = np.flatnonzero(np.any(block != first, axis=1))
        if mismatch.size:
            other = members[mismatch[0]]
            b = int(np.flatnonzero(counts[other] != first)[0])
            return InequitabilityWitness(
                cell=a,
                other_cell=b,
                vertex=space.unrank(int(members[0])),
                count=int(first[b]),
                other_vertex=space.unrank(int(other)),
                other_count=int(counts[other, b]),
                distance=dist,
            )
        rows.append([int(v) for v in first])
    return RationalMatrix(rows)


def covering_radius(code_ranks: np.ndarray, n: int, q: int,
                    cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    return distance_partition(code_ranks, n, q, cap).covering_radius
