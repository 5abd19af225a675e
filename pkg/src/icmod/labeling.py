"""Mapping index-code codewords onto constellation points.

The labeler walks the receivers in priority order and, for each one, places
codewords of its effective codebooks inside a single subset of the
Ungerboeck partition whenever the subset still has room. A completion guard
keeps every placement extendable to a full labeling that honours per-receiver
minimum-distance floors chosen greedily in priority order.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .constellation import Constellation
from .index_code import EncodingMatrix, ReceiverCodeView, codebook_classes

MAX_LABEL_N = 10
GUARD_MAX_N = 6
NODE_BUDGET = 20_000
BRUTE_FORCE_MAX_N = 3
_EPS = 1e-9


class LabelingError(ValueError):
    pass


@dataclass(frozen=True)
class Labeling:
    """Bijection from codewords (packed integers, y1 as MSB) to point indices."""

    constellation: Constellation
    point_of: tuple[int, ...]
    priority: tuple[str, ...] = ()
    floors: tuple[float, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "point_of", tuple(int(p) for p in self.point_of))
        if sorted(self.point_of) != list(range(self.constellation.size)):
            raise LabelingError("labeling is not a bijection onto the constellation")

    @property
    def N(self) -> int:
        return self.constellation.N

    def codeword_at(self, point: int) -> int:
        return self.point_of.index(point)

    def signal(self, codeword: int) -> complex:
        return complex(self.constellation.points[self.point_of[codeword]])

    def signals(self) -> np.ndarray:
        """Complex signal for every codeword, indexed by codeword."""
        return self.constellation.points[np.array(self.point_of)]

    def rows(self) -> list[tuple[str, int, float, float]]:
        out = []
        for c, p in enumerate(self.point_of):
            z = self.constellation.points[p]
            out.append((format(c, f"0{self.N}b"), p, float(z.real), float(z.imag)))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["codeword", "point", "re", "im"])
        for cw, p, re, im in self.rows():
            w.writerow([cw, p, f"{re:.12g}", f"{im:.12g}"])
        return buf.getvalue()


def priority_order(views: Sequence[ReceiverCodeView],
                   ties: Sequence[str] | None = None) -> list[ReceiverCodeView]:
    """Receivers sorted by eta.

    Receivers with equal eta keep problem order, except that ids named in
    ``ties`` come first, in the order given.
    """
    ties = list(ties or [])
    known = {v.receiver_id for v in views}
    unknown = [rid for rid in ties if rid not in known]
    if unknown:
        raise LabelingError(f"unknown receiver id(s) in priority list: {unknown}")
    if len(set(ties)) != len(ties):
        raise LabelingError("priority list repeats a receiver")
    rank = {rid: k for k, rid in enumerate(ties)}
    return sorted(views, key=lambda v: (v.eta, rank.get(v.receiver_id, len(ties))))


class _BudgetExceeded(Exception):
    pass


class _Completion:
    """Backtracking search for a bijection meeting pairwise distance floors.

    Domains are point bitmasks. Variables are chosen by smallest domain,
    assignments are forward-checked, and a pigeonhole test prunes states
    where the remaining domains cannot cover the remaining codewords.
    """

    def __init__(self, con: Constellation, budget: int = NODE_BUDGET):
        self.M = con.size
        self.D = con.sqdist
        self.budget = budget
        self._compat: dict[float, list[int]] = {}
        self.symmetry_reps = _orbit_representatives(con)

    def compat(self, floor: float) -> list[int]:
        if floor not in self._compat:
            ok = self.D >= floor - _EPS
            np.fill_diagonal(ok, False)
            self._compat[floor] = [sum(1 << int(q) for q in np.flatnonzero(row)) for row in ok]
        return self._compat[floor]

    def solve(self, need: list[list[tuple[int, float]]], partial: dict[int, int]) -> dict[int, int] | None:
        M = self.M
        full = (1 << M) - 1
        used = 0
        for p in partial.values():
            used |= 1 << p
        dom = [(1 << partial[c]) if c in partial else full & ~used for c in range(M)]
        for c, p in partial.items():
            for b, v in need[c]:
                if b in partial:
                    if not (self.compat(v)[p] >> partial[b]) & 1:
                        return None
                else:
                    dom[b] &= self.compat(v)[p]
        if not all(dom):
            return None
        if not partial:
            # any solution can be moved by a symmetry so codeword 0 sits on an orbit representative
            dom[0] &= self.symmetry_reps
        assign = dict(partial)
        unassigned = {c for c in range(M) if c not in partial}
        nodes = 0

        def rec(dom: list[int]) -> bool:
            nonlocal nodes
            nodes += 1
            if nodes > self.budget:
                raise _BudgetExceeded
            if not unassigned:
                return True
            c = min(unassigned, key=lambda x: (dom[x].bit_count(), x))
            unassigned.discard(c)
            rest = list(unassigned)
            d = dom[c]
            while d:
                low = d & -d
                d ^= low
                p = low.bit_length() - 1
                nd = list(dom)
                for x in rest:
                    nd[x] &= ~low
                for b, v in need[c]:
                    if b in unassigned:
                        nd[b] &= self.compat(v)[p]
                if all(nd[x] for x in rest):
                    cover = 0
                    for x in rest:
                        cover |= nd[x]
                    if cover.bit_count() >= len(rest):
                        assign[c] = p
                        if rec(nd):
                            return True
                        del assign[c]
            unassigned.add(c)
            return False

        return assign if rec(dom) else None


def _orbit_representatives(con: Constellation) -> int:
    """Bitmask with the smallest point index of each symmetry orbit."""
    perms = con.symmetries()
    reps = 0
    seen: set[int] = set()
    for p in range(con.size):
        if p in seen:
            continue
        reps |= 1 << p
        seen.update(int(g[p]) for g in perms)
    return reps


@dataclass
class _ReceiverState:
    view: ReceiverCodeView
    classes: list[frozenset[int]]
    class_of: dict[int, int]
    removed: set[int] = field(default_factory=set)

    @property
    def rank(self) -> int:
        return self.view.rank


def _need_lists(M: int, states: Sequence[_ReceiverState], floors: Sequence[float]) -> list[list[tuple[int, float]]]:
    best: dict[tuple[int, int], float] = {}
    for st, f in zip(states, floors):
        if f <= 0:
            continue
        for cls in st.classes:
            for a, b in itertools.permutations(cls, 2):
                if best.get((a, b), 0.0) < f:
                    best[(a, b)] = f
    need: list[list[tuple[int, float]]] = [[] for _ in range(M)]
    for (a, b), f in best.items():
        need[a].append((b, f))
    return need


def _satisfies(assign: dict[int, int], need: list[list[tuple[int, float]]], D: np.ndarray) -> bool:
    return all(D[assign[a], assign[b]] >= f - _EPS for a, row in enumerate(need) for b, f in row)


def _choose_floors(con: Constellation, states: Sequence[_ReceiverState], solver: _Completion,
                   hint: dict[int, int] | None = None) -> tuple[list[float], dict[int, int]]:
    """Largest distance floor per receiver in priority order, each capped by its partition level.

    ``hint`` is a full labeling tried before the search; a floor it already
    meets needs no search.
    """
    N, delta = con.N, con.partition.delta
    values = con.distinct_sqdists()
    floors: list[float] = []
    witness: dict[int, int] = {c: c for c in range(con.size)}
    for st in states:
        if st.rank == 0:
            floors.append(0.0)
            continue
        cap = delta[N - st.rank]
        chosen = 0.0
        for t in values:
            if t > cap + _EPS:
                continue
            need = _need_lists(con.size, states, floors + [t])
            if hint is not None and _satisfies(hint, need, con.sqdist):
                chosen, witness = t, dict(hint)
                break
            try:
                sol = solver.solve(need, {})
            except _BudgetExceeded:
                sol = None
            if sol is not None:
                chosen, witness = t, sol
                break
        floors.append(chosen)
    return floors, witness


def _candidate_points(con: Constellation, st: _ReceiverState, cls: frozenset[int],
                      cw2pt: dict[int, int], free: set[int]) -> list[int]:
    """Free points in preference order for the next codeword of ``cls``."""
    D = con.sqdist
    placed = [cw2pt[x] for x in cls if x in cw2pt]

    def spread(p: int) -> float:
        return min((float(D[p, q]) for q in placed), default=math.inf)

    def ranked(points) -> list[int]:
        return sorted(points, key=lambda p: (-spread(p), p))

    preferred: list[int] = []
    if st.rank >= 1:
        level = con.partition.levels[con.N - st.rank]
        counts = [sum(1 for q in placed if q in s) for s in level]
        open_subsets = [k for k, s in enumerate(level) if any(p in free for p in s)]
        if open_subsets:
            top = max(counts[k] for k in open_subsets)
            pick = next(k for k in open_subsets if counts[k] == top)
            preferred = ranked(p for p in level[pick] if p in free)
    rest = ranked(p for p in free if p not in preferred)
    return preferred + rest


def run_algorithm1(code: EncodingMatrix, views: Sequence[ReceiverCodeView], con: Constellation, *,
                   priority: Sequence[str] | None = None, guarded: bool | None = None,
                   budget: int = NODE_BUDGET) -> Labeling:
    """Label the codewords of ``code`` with points of ``con``.

    Receivers whose effective codebooks span the whole code space take no
    part; if none is left the natural labeling (codeword k to point k) is
    returned. ``guarded`` defaults to on for N up to ``GUARD_MAX_N``.
    """
    N = code.N
    if con.N != N:
        raise LabelingError(f"constellation carries {con.N} bits, code has N={N}")
    if N > MAX_LABEL_N:
        raise LabelingError(f"labeling is limited to N <= {MAX_LABEL_N}")
    if guarded is None:
        guarded = N <= GUARD_MAX_N
    ordered = priority_order(views, priority)
    order_ids = tuple(v.receiver_id for v in ordered)
    M = con.size

    states = []
    for v in ordered:
        if v.rank >= N:
            continue
        classes = [c for c, _ in codebook_classes(code, v.knows)]
        class_of = {x: k for k, c in enumerate(classes) for x in c}
        states.append(_ReceiverState(v, classes, class_of))
    if not states:
        return Labeling(con, tuple(range(M)), order_ids)

    solver = _Completion(con, budget)
    floors: list[float] = []
    need: list[list[tuple[int, float]]] = []
    completion: dict[int, int] = {}
    if guarded:
        plain = run_algorithm1(code, views, con, priority=priority, guarded=False)
        hint = dict(enumerate(plain.point_of))
        floors, completion = _choose_floors(con, states, solver, hint)
        need = _need_lists(M, states, floors)

    cw2pt: dict[int, int] = {}
    free = set(range(M))

    def place(c: int, p: int) -> None:
        cw2pt[c] = p
        free.discard(p)

    def admissible(c: int, p: int) -> bool:
        nonlocal completion
        if not guarded or completion.get(c) == p:
            return True
        try:
            sol = solver.solve(need, {**cw2pt, c: p})
        except _BudgetExceeded:
            return False
        if sol is None:
            return False
        completion = sol
        return True

    i = 0
    while len(cw2pt) < M:
        st = states[i]
        live = [k for k in range(len(st.classes)) if k not in st.removed]
        if not live:
            i = (i + 1) % len(states)
            continue
        k = max(live, key=lambda k: (len(st.classes[k] & cw2pt.keys()), -k))
        cls = st.classes[k]
        if cls <= cw2pt.keys():
            st.removed.add(k)
            i = (i + 1) % len(states)
            continue
        c = min(x for x in cls if x not in cw2pt)
        for p in _candidate_points(con, st, cls, cw2pt, free):
            if admissible(c, p):
                place(c, p)
                break
        else:
            place(c, completion[c])
        i = 0

    return Labeling(con, tuple(cw2pt[c] for c in range(M)), order_ids, tuple(floors))


def dmin_vector(labeling_points: np.ndarray, classes_per_receiver: Sequence[Sequence[frozenset[int]]],
                D: np.ndarray) -> np.ndarray:
    """Squared minimum distance per receiver for a batch of labelings.

    ``labeling_points`` has shape (batch, 2^N) holding the point of each codeword.
    """
    batch = labeling_points.shape[0]
    out = np.full((batch, len(classes_per_receiver)), np.inf)
    for r, classes in enumerate(classes_per_receiver):
        for cls in classes:
            for a, b in itertools.combinations(sorted(cls), 2):
                d = D[labeling_points[:, a], labeling_points[:, b]]
                np.minimum(out[:, r], d, out=out[:, r])
    return out


def brute_force_optimal(code: EncodingMatrix, views: Sequence[ReceiverCodeView], con: Constellation, *,
                        priority: Sequence[str] | None = None) -> tuple[Labeling, tuple[float, ...]]:
    """Lexicographically best labeling over all bijections, for N <= 3.

    Receivers are compared in priority order; codeword 0 is pinned to one
    point per symmetry orbit since symmetries preserve every distance.
    """
    N = code.N
    if N > BRUTE_FORCE_MAX_N:
        raise LabelingError(f"brute force is limited to N <= {BRUTE_FORCE_MAX_N}")
    ordered = priority_order(views, priority)
    classes = [[c for c, _ in codebook_classes(code, v.knows)] for v in ordered]
    M = con.size
    reps = _orbit_representatives(con)
    perms = []
    for p0 in range(M):
        if not (reps >> p0) & 1:
            continue
        others = [p for p in range(M) if p != p0]
        perms.extend((p0, *rest) for rest in itertools.permutations(others))
    P = np.array(perms, dtype=np.int64)
    scores = dmin_vector(P, classes, con.sqdist)
    # lexicographic max: lexsort sorts ascending by last key first
    keys = (np.arange(len(P)),) + tuple(-scores[:, r] for r in reversed(range(scores.shape[1])))
    idx = np.lexsort(keys)
    best = int(idx[0])
    order_ids = tuple(v.receiver_id for v in ordered)
    return Labeling(con, tuple(P[best]), order_ids), tuple(float(s) for s in scores[best])
