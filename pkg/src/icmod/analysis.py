"""Per-receiver distances and gains of a labeled index code."""

from __future__ import annotations

import csv
import io
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constellation import Constellation, bpsk_dmin_squared, make_constellation
from .index_code import (CodeError, EncodingMatrix, ReceiverCodeView, codebook_classes, receiver_views,
                         validate)
from .labeling import Labeling, run_algorithm1
from .problem import IndexCodingProblem, normalize

ERROR_FREE = math.inf
REPORT_DECIMALS = 2


def _class_sqdists(labeling: Labeling, cls) -> np.ndarray:
    pts = np.array([labeling.point_of[c] for c in sorted(cls)])
    D = labeling.constellation.sqdist[np.ix_(pts, pts)]
    return D[np.triu_indices(len(pts), 1)]


def receiver_dmin(labeling: Labeling, code: EncodingMatrix, knows) -> float:
    """Smallest squared distance inside any effective signal set; ``inf`` when every set is a single point."""
    best = ERROR_FREE
    for cls, _ in codebook_classes(code, knows):
        d = _class_sqdists(labeling, cls)
        if d.size:
            best = min(best, float(d.min()))
    return best


def sicg_db(d2: float, con: Constellation) -> float:
    if d2 <= 0:
        raise ValueError("squared distance must be positive")
    if math.isinf(d2):
        return math.inf
    return 10 * math.log10(d2 / con.dmin_squared)


def acg_db(d2: float) -> float:
    if d2 <= 0:
        raise ValueError("squared distance must be positive")
    if math.isinf(d2):
        return math.inf
    return 10 * math.log10(d2 / bpsk_dmin_squared())


def bandwidth_gain(N: int) -> float:
    if N < 1:
        raise ValueError("N must be positive")
    return N / 2


def distance_distribution(labeling: Labeling, code: EncodingMatrix, knows) -> list[tuple[float, float]]:
    """Pairwise squared distances inside one effective signal set, with pair counts.

    Counts are averaged over the receiver's distinct effective codebooks, so
    when they all share a geometry the result is that of a single set.
    Distances are rounded to the constellation's comparison precision.
    """
    classes = codebook_classes(code, knows)
    counts: Counter[float] = Counter()
    for cls, _ in classes:
        counts.update(float(d) for d in _class_sqdists(labeling, cls))
    k = len(classes)
    out = []
    for d in sorted(counts):
        c = counts[d] / k
        out.append((d, int(c) if c.is_integer() else c))
    return out


def psk_qam_recommendation(eta: int) -> str:
    """Constellation family expected to give the larger effective minimum distance."""
    if eta < 1:
        raise ValueError("eta must be at least 1")
    return "psk" if eta <= 2 else "qam"


@dataclass(frozen=True)
class ReceiverProfile:
    receiver_id: str
    eta: int
    rank: int
    S: frozenset[int]
    sicg_eligible: bool
    d_min_squared: float
    sicg_db: float
    acg_db: float
    sicg_ratio: float
    acg_ratio: float
    bandwidth_gain: float
    distance_histogram: tuple[tuple[float, float], ...]

    def rounded(self) -> dict:
        return {
            "id": self.receiver_id,
            "eta": self.eta,
            "d2": _fmt(self.d_min_squared),
            "sicg_db": _fmt(self.sicg_db),
            "acg_db": _fmt(self.acg_db),
            "bandwidth_gain": _fmt(self.bandwidth_gain),
        }


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf"
    return f"{round(x, REPORT_DECIMALS) + 0.0:.{REPORT_DECIMALS}f}"


def profile_receivers(code: EncodingMatrix, views: Sequence[ReceiverCodeView],
                      labeling: Labeling) -> list[ReceiverProfile]:
    con = labeling.constellation
    out = []
    for v in views:
        d2 = receiver_dmin(labeling, code, v.knows)
        out.append(ReceiverProfile(
            receiver_id=v.receiver_id, eta=v.eta, rank=v.rank, S=v.S, sicg_eligible=v.sicg_eligible,
            d_min_squared=d2, sicg_db=sicg_db(d2, con), acg_db=acg_db(d2),
            sicg_ratio=d2 / con.dmin_squared, acg_ratio=d2 / bpsk_dmin_squared(),
            bandwidth_gain=bandwidth_gain(code.N),
            distance_histogram=tuple(distance_distribution(labeling, code, v.knows)),
        ))
    return out


def analyze(problem: IndexCodingProblem, code: EncodingMatrix, kind: str = "psk",
            priority: Sequence[str] | None = None) -> tuple[Labeling, list[ReceiverProfile]]:
    """Validate, label, and profile every receiver."""
    if not validate(code, problem):
        raise CodeError("encoding matrix does not let every receiver decode its demand")
    views = receiver_views(code, problem)
    lab = run_algorithm1(code, views, make_constellation(kind, code.N), priority=priority)
    return lab, profile_receivers(code, views, lab)


def report_csv(profiles: Sequence[ReceiverProfile]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, ["id", "eta", "d2", "sicg_db", "acg_db", "bandwidth_gain"], lineterminator="\n")
    w.writeheader()
    for p in profiles:
        w.writerow(p.rounded())
    return buf.getvalue()


@dataclass(frozen=True)
class GapRow:
    length: int
    d2: dict[str, float]
    best: str
    worst: str
    gap_db: float


@dataclass(frozen=True)
class GapReport:
    rows: tuple[GapRow, ...]
    worst_has_no_side_info: bool
    widening: bool


def n_to_n_gap_report(problem: IndexCodingProblem, codes: Sequence[EncodingMatrix],
                      kind: str = "psk") -> GapReport:
    """Per-receiver distances for codes of increasing length, and the best/worst spread in dB.

    Error-free receivers are left out of the spread.
    """
    norm = normalize(problem)
    rows = []
    worst_ids = set()
    for code in sorted(codes, key=lambda c: c.N):
        _, profs = analyze(problem, code, kind)
        d2 = {p.receiver_id: p.d_min_squared for p in profs}
        finite = {k: v for k, v in d2.items() if not math.isinf(v)}
        best = max(finite, key=lambda k: finite[k])
        # among equally bad receivers prefer one without side information
        worst = min(finite, key=lambda k: (finite[k], bool(norm.receiver(k).knows)))
        worst_ids.add(worst)
        rows.append(GapRow(code.N, d2, best, worst, 10 * math.log10(finite[best] / finite[worst])))
    no_side_info = all(not norm.receiver(w).knows for w in worst_ids)
    widening = all(b.gap_db > a.gap_db for a, b in itertools.pairwise(rows))
    return GapReport(tuple(rows), no_side_info, widening)
