"""Exhaustive minrank over F2 of a side-information graph."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .gf2 import BitMatrix, batched_rank, rank2, reduce_basis
from .index_code import EncodingMatrix
from .problem import SideInfoGraph

MAX_FREE_BITS = 24
BATCH = 1 << 16


class MinrankBudgetExceeded(RuntimeError):
    """The exhaustive search would exceed the configured limits."""

    def __init__(self, message: str, upper_bound: int):
        super().__init__(message)
        self.upper_bound = upper_bound


def max_vertices() -> int:
    return int(os.environ.get("ICMOD_MAX_N", "16"))


@dataclass(frozen=True)
class FittingPattern:
    n: int
    free_positions: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, g: SideInfoGraph) -> "FittingPattern":
        return cls(g.n, tuple(g.edge_list()))

    def base_rows(self) -> np.ndarray:
        """Rows of the identity part, shape (n,)."""
        return np.array([1 << (self.n - 1 - i) for i in range(self.n)], dtype=np.int64)

    def matrix(self, mask: int) -> BitMatrix:
        """Fitting matrix with free position ``t`` set when bit ``t`` of ``mask`` is set."""
        rows = [1 << (self.n - 1 - i) for i in range(self.n)]
        for t, (i, j) in enumerate(self.free_positions):
            if (mask >> t) & 1:
                rows[i] |= 1 << (self.n - 1 - j)
        return BitMatrix(tuple(rows), self.n)


@dataclass(frozen=True)
class MinrankResult:
    N: int
    witness: BitMatrix
    candidates_checked: int


def fits(a: BitMatrix, g: SideInfoGraph) -> bool:
    if a.shape != (g.n, g.n):
        raise ValueError(f"matrix shape {a.shape} does not match a graph on {g.n} vertices")
    for i in range(g.n):
        for j in range(g.n):
            v = a.entry(i, j)
            if i == j and v != 1:
                return False
            if i != j and v == 1 and (i, j) not in g.edges:
                return False
    return True


def minrank(g: SideInfoGraph, *, max_free_bits: int = MAX_FREE_BITS) -> MinrankResult:
    """Minimum rank over all matrices fitting ``g``.

    Candidates are visited in Gray-code order of the free (edge) entries and
    the first minimum-rank matrix met in that order is the witness.
    """
    pattern = FittingPattern.of(g)
    E = len(pattern.free_positions)
    if g.n > max_vertices():
        raise MinrankBudgetExceeded(f"{g.n} vertices exceeds ICMOD_MAX_N={max_vertices()}", g.n)
    if E > max_free_bits:
        raise MinrankBudgetExceeded(
            f"{E} free entries exceeds the exhaustive limit of {max_free_bits}", g.n)

    n = g.n
    base = pattern.base_rows()
    row_of = np.array([i for i, _ in pattern.free_positions], dtype=np.int64)
    bit_of = np.array([1 << (n - 1 - j) for _, j in pattern.free_positions], dtype=np.int64)
    total = 1 << E
    best_rank, best_mask, checked = n + 1, 0, 0
    for start in range(0, total, BATCH):
        t = np.arange(start, min(start + BATCH, total), dtype=np.int64)
        gray = t ^ (t >> 1)
        rows = np.broadcast_to(base, (t.size, n)).copy()
        for e in range(E):
            on = ((gray >> e) & 1).astype(bool)
            rows[on, row_of[e]] |= bit_of[e]
        ranks = batched_rank(rows, n)
        checked += t.size
        k = int(np.argmin(ranks))
        if ranks[k] < best_rank:
            best_rank, best_mask = int(ranks[k]), int(gray[k])
        if best_rank == 1:
            break
    witness = pattern.matrix(best_mask)
    return MinrankResult(best_rank, witness, checked)


def encoding_matrix_from_witness(a: BitMatrix) -> EncodingMatrix:
    """Encoding matrix whose columns are a reduced basis of the row space of ``a``.

    Receiver ``i`` decodes from ``a_i x``, which is a combination of the
    transmitted parities because ``a_i`` lies in the row space.
    """
    basis = reduce_basis(a.rows)
    if not basis:
        raise ValueError("zero matrix has no row space")
    if len(basis) != rank2(a):
        raise ValueError("rank deficiency")
    L = BitMatrix(tuple(basis), a.ncols).transpose()
    return EncodingMatrix(L)


def optimal_code(g: SideInfoGraph, **kw) -> tuple[int, EncodingMatrix]:
    res = minrank(g, **kw)
    return res.N, encoding_matrix_from_witness(res.witness)
