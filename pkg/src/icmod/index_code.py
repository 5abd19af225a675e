"""Scalar linear index codes ``y = x L`` and what each receiver can infer from them."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .gf2 import (BitMatrix, BitVec, column_support, consistent_solutions, coset_key, rank2,
                  reduce_basis, solve_combination, span)
from .problem import IndexCodingProblem, Receiver, normalize


class CodeError(ValueError):
    """Encoding matrix that cannot serve as an index code."""


@dataclass(frozen=True)
class EncodingMatrix:
    L: BitMatrix

    def __post_init__(self):
        if self.N > self.n:
            raise CodeError(f"code length N={self.N} exceeds message count n={self.n}")
        if rank2(self.L) != self.N:
            raise CodeError(f"encoding matrix has rank {rank2(self.L)} < N={self.N}")

    @property
    def n(self) -> int:
        return self.L.nrows

    @property
    def N(self) -> int:
        return self.L.ncols

    @property
    def rows(self) -> tuple[int, ...]:
        return self.L.rows

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "EncodingMatrix":
        return cls(BitMatrix.from_strings(rows))

    @classmethod
    def identity(cls, n: int) -> "EncodingMatrix":
        return cls(BitMatrix.identity(n))


@dataclass(frozen=True)
class ReceiverCodeView:
    """What one receiver sees of a code: its known code bits ``S`` and exponent ``eta``.

    ``rank`` is the exact dimension of the receiver's effective codebook; ``eta``
    is an upper bound on it and the two agree for all the published examples.
    """

    receiver_id: str
    wants: frozenset[int]
    knows: frozenset[int]
    S: frozenset[int]
    eta: int
    rank: int
    sicg_eligible: bool


def encode(x: BitVec, code: EncodingMatrix) -> BitVec:
    if len(x) != code.n:
        raise ValueError(f"message vector has length {len(x)}, code expects {code.n}")
    out = 0
    for k, r in enumerate(code.rows):
        if x[k]:
            out ^= r
    return BitVec(out, code.N)


def known_transmissions(code: EncodingMatrix, knows) -> frozenset[int]:
    """Code-bit indices whose parity support lies inside the side information."""
    knows = frozenset(knows)
    return frozenset(j for j in range(code.N) if column_support(code.L, j) <= knows)


def free_rows(code: EncodingMatrix, knows) -> list[int]:
    return [code.rows[k] for k in range(code.n) if k not in knows]


def effective_rank(code: EncodingMatrix, knows) -> int:
    return rank2(free_rows(code, knows))


def eta(code: EncodingMatrix, knows, *, span_based: bool = False) -> int:
    """``min(n - |K|, N - |S|)``.

    With ``span_based`` the count of known code bits is replaced by the
    dimension of every parity of ``y`` computable from the side information,
    which makes the result equal to the exact effective rank.
    """
    knows = frozenset(knows)
    if span_based:
        n_known = code.N - effective_rank(code, knows)
    else:
        n_known = len(known_transmissions(code, knows))
    return min(code.n - len(knows), code.N - n_known)


def sicg_eligible(code: EncodingMatrix, knows) -> bool:
    return eta(code, knows) < code.N


def side_info_conditions(code: EncodingMatrix, knows) -> tuple[bool, bool]:
    """The two side-information conditions: fewer unknown messages than N, and a known code bit."""
    knows = frozenset(knows)
    return code.n - len(knows) < code.N, len(known_transmissions(code, knows)) >= 1


def receiver_view(code: EncodingMatrix, r: Receiver) -> ReceiverCodeView:
    S = known_transmissions(code, r.knows)
    e = min(code.n - len(r.knows), code.N - len(S))
    return ReceiverCodeView(r.id, r.wants, r.knows, S, e, effective_rank(code, r.knows), e < code.N)


def receiver_views(code: EncodingMatrix, p: IndexCodingProblem) -> list[ReceiverCodeView]:
    if p.n != code.n:
        raise CodeError(f"code is for n={code.n} messages, problem has n={p.n}")
    return [receiver_view(code, r) for r in normalize(p).receivers]


def _as_assignment(knows, realization) -> dict[int, int]:
    ks = sorted(knows)
    if isinstance(realization, Mapping):
        fixed = {int(k): int(v) for k, v in realization.items()}
        if set(fixed) != set(ks):
            raise ValueError("realization must assign exactly the known messages")
        return fixed
    if isinstance(realization, BitVec):
        realization = realization.bits()
    bits = list(realization)
    if len(bits) != len(ks):
        raise ValueError(f"realization has {len(bits)} bits for {len(ks)} known messages")
    return dict(zip(ks, bits))


def effective_codebook(code: EncodingMatrix, knows, realization) -> set[BitVec]:
    """Codewords consistent with one realization of the known messages.

    ``realization`` is a mapping ``message -> bit`` or a bit sequence aligned
    with ``sorted(knows)``.
    """
    return consistent_solutions(code.L, _as_assignment(knows, realization))


def codebook_classes(code: EncodingMatrix, knows) -> list[tuple[frozenset[int], tuple[int, ...]]]:
    """Distinct effective codebooks of a receiver, each with its smallest realization.

    Codewords are packed integers. Classes come back ordered by their
    lexicographically smallest realization ``a`` of ``sorted(knows)``.
    """
    ks = sorted(knows)
    free = free_rows(code, knows)
    basis = reduce_basis(free)
    sub = span(free)
    n_classes = 1 << (code.N - len(basis))
    known_rows = [code.rows[k] for k in ks]
    classes: dict[int, tuple[int, ...]] = {}
    # realizations are scanned in lexicographic order, so the first one to
    # reach a coset is its smallest
    for a in range(1 << len(ks)):
        offset = 0
        for t, r in enumerate(known_rows):
            if (a >> (len(ks) - 1 - t)) & 1:
                offset ^= r
        key = coset_key(offset, basis)
        if key not in classes:
            classes[key] = tuple((a >> (len(ks) - 1 - t)) & 1 for t in range(len(ks)))
            if len(classes) == n_classes:
                break
    out = [(frozenset(key ^ s for s in sub), real) for key, real in classes.items()]
    out.sort(key=lambda item: item[1])
    return out


def _kernel_on_free(code: EncodingMatrix, knows) -> tuple[list[int], np.ndarray]:
    """All ``z`` supported on unknown messages, with their products ``z L``."""
    free = [k for k in range(code.n) if k not in knows]
    prods = np.zeros(1 << len(free), dtype=np.int64)
    for t, k in enumerate(free):
        prods[1 << t: 2 << t] = prods[: 1 << t] ^ code.rows[k]
    return free, prods


def can_decode(code: EncodingMatrix, knows, want: int) -> bool:
    """Exhaustive check that ``x_want`` is fixed by ``(x L, x_K)``.

    By linearity two inputs that agree on ``K`` and share a codeword differ by a
    ``z`` supported off ``K`` with ``z L = 0``; every such ``z`` is enumerated.
    """
    knows = frozenset(knows)
    if want in knows:
        return True
    free, prods = _kernel_on_free(code, knows)
    t = free.index(want)
    idx = np.arange(prods.size)
    return not np.any((prods == 0) & (((idx >> t) & 1) == 1))


def validate(code: EncodingMatrix, p: IndexCodingProblem) -> bool:
    if p.n != code.n:
        return False
    return all(can_decode(code, r.knows, w) for r in normalize(p).receivers for w in r.wants)


@dataclass(frozen=True)
class LinearDecoder:
    """``x_want = <code_mask, y> + <known_mask, x>`` over F2 (both masks packed MSB-first)."""

    want: int
    code_mask: int
    known_mask: int


def linear_decoder(code: EncodingMatrix, knows, want: int) -> LinearDecoder:
    """Recover a demanded message from the codeword and the side information.

    Raises CodeError when the message is not determined (the code is invalid
    for this receiver).
    """
    n, N = code.n, code.N
    ks = sorted(knows)
    generators = [code.L.column(j) for j in range(N)] + [1 << (n - 1 - k) for k in ks]
    combo = solve_combination(generators, 1 << (n - 1 - want))
    if combo is None:
        raise CodeError(f"message {want + 1} is not decodable from this side information")
    total = N + len(ks)
    code_mask = combo >> len(ks)
    known_mask = 0
    for t, k in enumerate(ks):
        if (combo >> (total - 1 - N - t)) & 1:
            known_mask |= 1 << (n - 1 - k)
    return LinearDecoder(want, code_mask, known_mask)


def extend_code(code: EncodingMatrix, length: int) -> EncodingMatrix:
    """Lengthen a code by appending uncoded message bits until it has ``length`` columns.

    Messages are taken in index order, skipping any whose unit column is
    already in the column space.
    """
    if not code.N <= length <= code.n:
        raise CodeError(f"length must lie in [{code.N}, {code.n}]")
    cols = [code.L.column(j) for j in range(code.N)]
    for k in range(code.n):
        if len(cols) == length:
            break
        unit = 1 << (code.n - 1 - k)
        if rank2(cols + [unit]) > len(cols):
            cols.append(unit)
    return EncodingMatrix(BitMatrix(tuple(cols), code.n).transpose())


def code_to_dict(code: EncodingMatrix) -> dict:
    return {"n": code.n, "N": code.N, "rows": code.L.to_strings()}


def code_from_dict(d: dict) -> EncodingMatrix:
    try:
        rows = [str(r) for r in d["rows"]]
        n, N = int(d["n"]), int(d["N"])
    except (KeyError, TypeError) as exc:
        raise CodeError(f"malformed encoding matrix: {exc}") from exc
    if len(rows) != n or any(len(r) != N for r in rows):
        raise CodeError(f"expected {n} rows of {N} bits")
    return EncodingMatrix(BitMatrix.from_strings(rows))


def load_code(path) -> EncodingMatrix:
    return code_from_dict(json.loads(Path(path).read_text()))


def dumps_code(code: EncodingMatrix) -> str:
    return json.dumps(code_to_dict(code), indent=2) + "\n"


def dump_code(code: EncodingMatrix, path) -> None:
    Path(path).write_text(dumps_code(code))
