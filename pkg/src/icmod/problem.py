"""Index coding problems, normalization, and the side-information graph.

Message indices are 0-based everywhere inside the package. The JSON format
uses the 1-based names ``x_1 .. x_n``; :func:`load_problem` and
:func:`dump_problem` are the only places that convert.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass
from pathlib import Path


class ProblemError(ValueError):
    """Malformed index coding problem."""


class NotSingleUnicast(ProblemError):
    """The side-information graph is only defined for single-unicast problems."""


@dataclass(frozen=True)
class Receiver:
    id: str
    wants: frozenset[int]
    knows: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "wants", frozenset(self.wants))
        object.__setattr__(self, "knows", frozenset(self.knows))


@dataclass(frozen=True)
class IndexCodingProblem:
    n: int
    receivers: tuple[Receiver, ...]

    def __post_init__(self):
        object.__setattr__(self, "receivers", tuple(self.receivers))
        if self.n < 1:
            raise ProblemError("need at least one message")
        ids = [r.id for r in self.receivers]
        if len(set(ids)) != len(ids):
            raise ProblemError("receiver ids must be unique")
        full = frozenset(range(self.n))
        for r in self.receivers:
            if not r.wants:
                raise ProblemError(f"{r.id}: empty demand set")
            if not (r.wants | r.knows) <= full:
                raise ProblemError(f"{r.id}: message index out of range 1..{self.n}")
            if r.wants & r.knows:
                raise ProblemError(f"{r.id}: demands a message it already knows")
            if r.knows == full:
                raise ProblemError(f"{r.id}: side information must be a proper subset")

    @property
    def m(self) -> int:
        return len(self.receivers)

    def receiver(self, rid: str) -> Receiver:
        for r in self.receivers:
            if r.id == rid:
                return r
        raise KeyError(rid)

    @property
    def is_normalized(self) -> bool:
        return all(len(r.wants) == 1 for r in self.receivers)


@dataclass(frozen=True)
class SideInfoGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(self.edges))
        for i, j in self.edges:
            if i == j:
                raise ProblemError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ProblemError(f"edge {(i, j)} out of range")

    def out_neighbors(self, i: int) -> frozenset[int]:
        return frozenset(j for a, j in self.edges if a == i)

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    @classmethod
    def from_edge_list(cls, n: int, edges) -> "SideInfoGraph":
        return cls(n, frozenset(tuple(e) for e in edges))


def _suffix(k: int) -> str:
    letters = string.ascii_lowercase
    out = ""
    k += 1
    while k:
        k, rem = divmod(k - 1, 26)
        out = letters[rem] + out
    return out


def normalize(p: IndexCodingProblem) -> IndexCodingProblem:
    """Split every multi-demand receiver into single-demand copies.

    A receiver ``R3`` demanding two messages becomes ``R3.a`` and ``R3.b``
    with identical side information. Already-normalized problems come back
    unchanged.
    """
    out = []
    for r in p.receivers:
        if len(r.wants) == 1:
            out.append(r)
            continue
        for k, w in enumerate(sorted(r.wants)):
            out.append(Receiver(f"{r.id}.{_suffix(k)}", frozenset({w}), r.knows))
    return IndexCodingProblem(p.n, tuple(out))


def build_side_info_graph(p: IndexCodingProblem) -> SideInfoGraph:
    p = normalize(p)
    demanded = [next(iter(r.wants)) for r in p.receivers]
    if p.m != p.n or len(set(demanded)) != p.n:
        raise NotSingleUnicast(
            "side-information graph needs exactly one receiver per message; "
            "supply an encoding matrix instead")
    edges = {(w, j) for w, r in zip(demanded, p.receivers) for j in r.knows}
    return SideInfoGraph(p.n, frozenset(edges))


def problem_to_dict(p: IndexCodingProblem) -> dict:
    return {
        "n": p.n,
        "receivers": [
            {"id": r.id, "wants": sorted(w + 1 for w in r.wants),
             "knows": sorted(k + 1 for k in r.knows)}
            for r in p.receivers
        ],
    }


def problem_from_dict(d: dict) -> IndexCodingProblem:
    try:
        n = int(d["n"])
        receivers = []
        for k, r in enumerate(d["receivers"]):
            rid = str(r.get("id", f"R{k + 1}"))
            wants = [int(v) - 1 for v in r["wants"]]
            knows = [int(v) - 1 for v in r.get("knows", [])]
            if len(set(wants)) != len(wants) or len(set(knows)) != len(knows):
                raise ProblemError(f"{rid}: duplicate message index")
            receivers.append(Receiver(rid, frozenset(wants), frozenset(knows)))
    except (KeyError, TypeError) as exc:
        raise ProblemError(f"malformed problem description: {exc}") from exc
    return IndexCodingProblem(n, tuple(receivers))


def load_problem(path) -> IndexCodingProblem:
    return problem_from_dict(json.loads(Path(path).read_text()))


def dumps_problem(p: IndexCodingProblem) -> str:
    return json.dumps(problem_to_dict(p), indent=2) + "\n"


def dump_problem(p: IndexCodingProblem, path) -> None:
    Path(path).write_text(dumps_problem(p))
