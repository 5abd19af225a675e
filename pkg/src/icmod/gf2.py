"""Linear algebra over F2 on bit-packed integers.

Vectors and matrix rows are packed MSB-first: element ``j`` of a length-``L``
vector lives at bit ``L - 1 - j``, so ``format(v, f"0{L}b")`` prints the
elements in their natural order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np


def _bit(value: int, index: int, length: int) -> int:
    return (value >> (length - 1 - index)) & 1


@dataclass(frozen=True)
class BitVec:
    """A vector over F2 of fixed length."""

    value: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("BitVec length must be positive")
        if not 0 <= self.value < (1 << self.length):
            raise ValueError(f"value {self.value} does not fit in {self.length} bits")

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "BitVec":
        value = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"not a bit: {b!r}")
            value = (value << 1) | b
        return cls(value, len(bits))

    @classmethod
    def from_string(cls, s: str) -> "BitVec":
        return cls.from_bits([int(c) for c in s])

    @classmethod
    def zeros(cls, length: int) -> "BitVec":
        return cls(0, length)

    def bits(self) -> tuple[int, ...]:
        return tuple(_bit(self.value, j, self.length) for j in range(self.length))

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(j)
        return _bit(self.value, j, self.length)

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b")


@dataclass(frozen=True)
class BitMatrix:
    """Dense matrix over F2, one packed integer per row."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        if self.ncols < 1:
            raise ValueError("matrix needs at least one column")
        limit = 1 << self.ncols
        for r in self.rows:
            if not 0 <= r < limit:
                raise ValueError(f"row {r} does not fit in {self.ncols} columns")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "BitMatrix":
        if not rows:
            raise ValueError("matrix needs at least one row")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        if any(c not in "01" for r in rows for c in r):
            raise ValueError("rows must be strings of 0/1")
        return cls(tuple(int(r, 2) for r in rows), width)

    @classmethod
    def from_array(cls, a) -> "BitMatrix":
        a = np.asarray(a)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls.from_strings(["".join(str(int(v) & 1) for v in row) for row in a])

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(tuple(1 << (n - 1 - i) for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls((0,) * nrows, ncols)

    def to_strings(self) -> list[str]:
        return [format(r, f"0{self.ncols}b") for r in self.rows]

    def to_array(self) -> np.ndarray:
        return np.array([[_bit(r, j, self.ncols) for j in range(self.ncols)] for r in self.rows],
                        dtype=np.uint8)

    def entry(self, i: int, j: int) -> int:
        return _bit(self.rows[i], j, self.ncols)

    def column(self, j: int) -> int:
        """Column ``j`` packed over rows (row 0 is the MSB)."""
        if not 0 <= j < self.ncols:
            raise IndexError(f"column {j} out of range for {self.ncols} columns")
        col = 0
        for r in self.rows:
            col = (col << 1) | _bit(r, j, self.ncols)
        return col

    def transpose(self) -> "BitMatrix":
        return BitMatrix(tuple(self.column(j) for j in range(self.ncols)), self.nrows)

    def delete_column(self, j: int) -> "BitMatrix":
        keep = [k for k in range(self.ncols) if k != j]
        return BitMatrix.from_strings(["".join(s[k] for k in keep) for s in self.to_strings()])

    def __str__(self) -> str:
        return "\n".join(self.to_strings())


def reduce_basis(vectors: Iterable[int]) -> list[int]:
    """Return an XOR basis of the span, one vector per distinct leading bit.

    The result is fully reduced (no basis vector contains another's leading bit)
    and sorted by decreasing leading bit, so it is canonical for the span.
    """
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            lead = v.bit_length() - 1
            if lead not in basis:
                basis[lead] = v
                break
            v ^= basis[lead]
    # back-substitute to reduced echelon form
    leads = sorted(basis, reverse=True)
    for i, hi in enumerate(leads):
        for lo in leads[i + 1:]:
            if (basis[hi] >> lo) & 1:
                basis[hi] ^= basis[lo]
    return [basis[k] for k in leads]


def coset_key(v: int, basis: Sequence[int]) -> int:
    """Canonical representative of ``v + span(basis)`` for a basis from :func:`reduce_basis`."""
    for b in basis:
        if (v >> (b.bit_length() - 1)) & 1:
            v ^= b
    return v


def rank2(m: BitMatrix | Sequence[int]) -> int:
    """Rank over F2 of a matrix (or of a list of packed rows)."""
    rows = m.rows if isinstance(m, BitMatrix) else m
    return len(reduce_basis(rows))


def in_span(v: int, rows: Sequence[int]) -> bool:
    return coset_key(v, reduce_basis(rows)) == 0


def span(rows: Sequence[int]) -> list[int]:
    """All elements of the row span, sorted ascending."""
    elems = [0]
    for b in reduce_basis(rows):
        elems += [e ^ b for e in elems]
    return sorted(elems)


def solve_combination(rows: Sequence[int], target: int) -> int | None:
    """Find coefficients ``c`` (packed MSB-first over ``rows``) with XOR_k c_k rows[k] == target.

    Returns None when the target is outside the span.
    """
    k = len(rows)
    # track which original rows make up each basis vector
    basis: dict[int, tuple[int, int]] = {}
    for idx, r in enumerate(rows):
        v, combo = r, 1 << (k - 1 - idx)
        while v:
            lead = v.bit_length() - 1
            if lead not in basis:
                basis[lead] = (v, combo)
                break
            bv, bc = basis[lead]
            v, combo = v ^ bv, combo ^ bc
    v, combo = target, 0
    while v:
        lead = v.bit_length() - 1
        if lead not in basis:
            return None
        bv, bc = basis[lead]
        v, combo = v ^ bv, combo ^ bc
    return combo


def mat_vec_mul(x: BitVec, m: BitMatrix) -> BitVec:
    """Row-vector times matrix, ``y = x m`` over F2."""
    if len(x) != m.nrows:
        raise ValueError(f"vector length {len(x)} != matrix rows {m.nrows}")
    return BitVec(xor_rows(x.value, m.rows), m.ncols)


def xor_rows(selector: int, rows: Sequence[int]) -> int:
    """XOR of the rows picked by the MSB-first bitmask ``selector``."""
    n = len(rows)
    out = 0
    for k, r in enumerate(rows):
        if (selector >> (n - 1 - k)) & 1:
            out ^= r
    return out


def column_support(m: BitMatrix, j: int) -> frozenset[int]:
    """Row indices (0-based) holding a 1 in column ``j``."""
    col = m.column(j)
    return frozenset(k for k in range(m.nrows) if (col >> (m.nrows - 1 - k)) & 1)


def consistent_solutions(m: BitMatrix, fixed: Mapping[int, int]) -> set[BitVec]:
    """Distinct products ``x m`` over all ``x`` agreeing with the partial assignment ``fixed``."""
    for k, b in fixed.items():
        if not 0 <= k < m.nrows:
            raise IndexError(f"row variable {k} out of range")
        if b not in (0, 1):
            raise ValueError(f"not a bit: {b!r}")
    offset = 0
    for k, b in fixed.items():
        if b:
            offset ^= m.rows[k]
    free = [m.rows[k] for k in range(m.nrows) if k not in fixed]
    return {BitVec(offset ^ s, m.ncols) for s in span(free)}


def batched_rank(rows: np.ndarray, ncols: int) -> np.ndarray:
    """Rank over F2 of many matrices at once.

    ``rows`` has shape (batch, nrows) and holds packed row integers.
    """
    rows = np.asarray(rows, dtype=np.int64)
    batch, nrows = rows.shape
    basis = np.zeros((batch, ncols), dtype=np.int64)  # basis[:, b] has leading bit b
    for k in range(nrows):
        v = rows[:, k].copy()
        for b in range(ncols - 1, -1, -1):
            has = ((v >> b) & 1).astype(bool)
            pivot = basis[:, b]
            hit = has & (pivot != 0)
            v[hit] ^= pivot[hit]
            new = has & (pivot == 0)
            basis[new, b] = v[new]
            v[new] = 0
    return np.count_nonzero(basis, axis=1)
