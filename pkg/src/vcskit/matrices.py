"""Boolean share matrices and the schemes built from them.

A share matrix assigns one row of subpixels per participant; stacking
means OR-ing rows.  Columns are encoded as integers with row 1 in the
most significant bit, which gives a fixed total order on columns and
makes the sorted column multiset a canonical form under column
permutation.  Python integers double as machine words for matrices up to
word size and degrade gracefully beyond.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence


@dataclass(frozen=True)
class BitMatrix:
    """Immutable n x m Boolean matrix stored as row tuples of 0/1."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(self.rows[0])
        for r in self.rows:
            if len(r) != width:
                raise ValueError("ragged rows")
            if any(b not in (0, 1) for b in r):
                raise ValueError("entries must be 0 or 1")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.rows[0])

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "BitMatrix":
        return cls(tuple(tuple(int(b) for b in r) for r in rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "BitMatrix":
        if not columns:
            raise ValueError("matrix must have at least one column")
        return cls.from_rows(zip(*columns))

    @classmethod
    def from_column_ints(cls, n: int, column_ints: Iterable[int]) -> "BitMatrix":
        cols = [tuple((c >> (n - 1 - i)) & 1 for i in range(n)) for c in column_ints]
        return cls.from_columns(cols)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def column_ints(self) -> tuple[int, ...]:
        """Columns as big-endian integers, row 1 most significant."""
        n = self.n
        out = []
        for j in range(self.m):
            val = 0
            for i in range(n):
                val = (val << 1) | self.rows[i][j]
            out.append(val)
        return tuple(out)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class ColumnMultiset:
    """Canonical form of a matrix under column permutation.

    ``counts`` holds ``(column value, multiplicity)`` pairs sorted by
    ascending column value; two matrices are equal up to a column
    permutation exactly when their multisets compare equal.
    """

    n: int
    counts: tuple[tuple[int, int], ...]

    @property
    def m(self) -> int:
        return sum(c for _, c in self.counts)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "columns": [[format(col, f"0{self.n}b"), cnt] for col, cnt in self.counts],
        }


def or_rows(m: BitMatrix, x: Iterable[int]) -> tuple[int, ...]:
    """Componentwise OR of the rows indexed by a non-empty subset."""
    xs = sorted(set(x))
    if not xs:
        raise ValueError("row subset must be non-empty")
    if xs[0] < 1 or xs[-1] > m.n:
        raise ValueError(f"row indices must lie in 1..{m.n}")
    acc = [0] * m.m
    for i in xs:
        row = m.rows[i - 1]
        acc = [a | b for a, b in zip(acc, row)]
    return tuple(acc)


def weight(v: Iterable[int]) -> int:
    """Hamming weight of a 0/1 vector."""
    return sum(1 for b in v if b)


def restrict(m: BitMatrix, x: Iterable[int]) -> BitMatrix:
    """Submatrix on the rows of x, kept in ascending participant order."""
    xs = sorted(set(x))
    if not xs:
        raise ValueError("row subset must be non-empty")
    if xs[0] < 1 or xs[-1] > m.n:
        raise ValueError(f"row indices must lie in 1..{m.n}")
    return BitMatrix(tuple(m.rows[i - 1] for i in xs))


def concat(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Columns of a followed by the columns of b."""
    if a.n != b.n:
        raise ValueError(f"row counts differ: {a.n} vs {b.n}")
    return BitMatrix(tuple(ra + rb for ra, rb in zip(a.rows, b.rows)))


def canonical(m: BitMatrix) -> ColumnMultiset:
    """Sorted column multiset of a matrix."""
    counter = Counter(m.column_ints())
    return ColumnMultiset(m.n, tuple(sorted(counter.items())))


@dataclass(frozen=True)
class BasisScheme:
    """A pair of basis matrices tagged with the model it targets (2, 3 or 5)."""

    model: int
    s0: BitMatrix
    s1: BitMatrix

    def __post_init__(self):
        if self.model not in (2, 3, 5):
            raise ValueError(f"basis schemes use models 2, 3 or 5, got {self.model}")
        if (self.s0.n, self.s0.m) != (self.s1.n, self.s1.m):
            raise ValueError("basis matrices must share dimensions")

    @property
    def n(self) -> int:
        return self.s0.n

    @property
    def m(self) -> int:
        return self.s0.m

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "n": self.n,
            "m": self.m,
            "S0": self.s0.to_lists(),
            "S1": self.s1.to_lists(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BasisScheme":
        return cls(int(d["model"]), BitMatrix.from_rows(d["S0"]), BitMatrix.from_rows(d["S1"]))


def _normalize_collection(entries: Iterable[tuple[BitMatrix, int]]) -> tuple[tuple[BitMatrix, int], ...]:
    merged: Counter[tuple] = Counter()
    mats: dict[tuple, BitMatrix] = {}
    for mat, freq in entries:
        if freq < 1:
            raise ValueError("frequencies must be >= 1")
        merged[mat.rows] += int(freq)
        mats[mat.rows] = mat
    return tuple((mats[key], merged[key]) for key in sorted(merged))


@dataclass(frozen=True)
class CollectionScheme:
    """Frequency-weighted matrix collections for models 1 and 4.

    Each collection maps a matrix to how often it occurs; sampling draws a
    matrix with probability proportional to its frequency.  Entries are
    stored merged and sorted so equal collections compare equal.
    """

    model: int
    c0: tuple[tuple[BitMatrix, int], ...]
    c1: tuple[tuple[BitMatrix, int], ...]

    def __post_init__(self):
        if self.model not in (1, 4):
            raise ValueError(f"collection schemes use models 1 or 4, got {self.model}")
        if not self.c0 or not self.c1:
            raise ValueError("both collections must be non-empty")
        object.__setattr__(self, "c0", _normalize_collection(self.c0))
        object.__setattr__(self, "c1", _normalize_collection(self.c1))
        dims = {(mat.n, mat.m) for mat, _ in self.c0 + self.c1}
        if len(dims) != 1:
            raise ValueError("all matrices in a scheme must share dimensions")

    @property
    def n(self) -> int:
        return self.c0[0][0].n

    @property
    def m(self) -> int:
        return self.c0[0][0].m

    @property
    def total0(self) -> int:
        return sum(f for _, f in self.c0)

    @property
    def total1(self) -> int:
        return sum(f for _, f in self.c1)

    def collection(self, pixel: int) -> tuple[tuple[BitMatrix, int], ...]:
        return self.c1 if pixel else self.c0

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "n": self.n,
            "m": self.m,
            "C0": [{"matrix": mat.to_lists(), "frequency": f} for mat, f in self.c0],
            "C1": [{"matrix": mat.to_lists(), "frequency": f} for mat, f in self.c1],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CollectionScheme":
        def load(entries):
            return tuple((BitMatrix.from_rows(e["matrix"]), int(e["frequency"])) for e in entries)

        return cls(int(d["model"]), load(d["C0"]), load(d["C1"]))


Scheme = BasisScheme | CollectionScheme


def scheme_from_dict(d: dict) -> Scheme:
    model = int(d["model"])
    if model in (2, 3, 5):
        return BasisScheme.from_dict(d)
    if model in (1, 4):
        return CollectionScheme.from_dict(d)
    raise ValueError(f"unknown model {model}")


def sample_share_matrix(scheme: BasisScheme, pixel: int, rng: random.Random) -> BitMatrix:
    """Basis matrix for the pixel value under a uniform column permutation.

    Uses an explicit Fisher-Yates pass over the columns so the output for a
    given generator state is pinned down exactly.
    """
    base = scheme.s1 if pixel else scheme.s0
    cols = list(base.column_ints())
    for i in range(len(cols) - 1, 0, -1):
        j = rng.randrange(i + 1)
        cols[i], cols[j] = cols[j], cols[i]
    return BitMatrix.from_column_ints(base.n, cols)


def sample_matrix(scheme: Scheme, pixel: int, rng: random.Random) -> BitMatrix:
    """Draw one share matrix for the given pixel value."""
    if isinstance(scheme, BasisScheme):
        return sample_share_matrix(scheme, pixel, rng)
    entries = scheme.collection(pixel)
    total = sum(f for _, f in entries)
    pick = rng.randrange(total)
    for mat, f in entries:
        if pick < f:
            return mat
        pick -= f
    raise AssertionError("frequency walk exhausted")


def expand_to_collection(scheme: BasisScheme) -> CollectionScheme:
    """Model-1 collections holding every column permutation of each basis matrix.

    Each collection has total frequency m!, with identical arrangements
    merged, so a basis-matrix scheme and its expansion describe the same
    share distributions.
    """

    def expand(mat: BitMatrix) -> tuple[tuple[BitMatrix, int], ...]:
        counter = Counter(itertools.permutations(mat.column_ints()))
        return tuple(
            (BitMatrix.from_column_ints(mat.n, cols), cnt) for cols, cnt in sorted(counter.items())
        )

    return CollectionScheme(1, expand(scheme.s0), expand(scheme.s1))
