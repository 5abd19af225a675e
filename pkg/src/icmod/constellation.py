"""Energy-normalized 2^N-PSK / 2^N-QAM signal sets and their Ungerboeck partitions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

MAX_N = 16
DIST_DECIMALS = 9


@dataclass(frozen=True, eq=False)
class Constellation:
    """2^N points in the complex plane.

    PSK points all have energy N; QAM points have average energy N.
    """

    kind: str
    N: int
    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.kind not in ("psk", "qam"):
            raise ValueError(f"unknown constellation kind {self.kind!r}")
        pts = np.asarray(self.points, dtype=complex)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if pts.shape != (1 << self.N,):
            raise ValueError(f"expected {1 << self.N} points, got {pts.shape}")

    @property
    def size(self) -> int:
        return 1 << self.N

    @cached_property
    def sqdist(self) -> np.ndarray:
        """Pairwise squared distances, rounded so equal distances compare equal."""
        p = self.points
        return np.round(np.abs(p[:, None] - p[None, :]) ** 2, DIST_DECIMALS)

    @cached_property
    def dmin_squared(self) -> float:
        d = self.sqdist[np.triu_indices(self.size, 1)]
        return float(d.min())

    def distinct_sqdists(self) -> list[float]:
        """Distinct nonzero pairwise squared distances, descending."""
        return sorted({float(v) for v in self.sqdist[np.triu_indices(self.size, 1)]}, reverse=True)

    def average_energy(self) -> float:
        return float(np.mean(np.abs(self.points) ** 2))

    @cached_property
    def partition(self) -> "PartitionTree":
        return ungerboeck_partition(self)

    def symmetries(self) -> list[np.ndarray]:
        """Point permutations induced by isometries that map the set onto itself.

        Rotations by multiples of 2*pi/2^N (PSK) or pi/2 (QAM), optionally
        composed with complex conjugation.
        """
        steps = self.size if self.kind == "psk" else 4
        pts = self.points
        lookup = {(round(z.real, 6), round(z.imag, 6)): k for k, z in enumerate(pts)}
        perms = []
        for s in range(steps):
            rot = np.exp(2j * np.pi * s / steps)
            for conj in (False, True):
                img = (np.conj(pts) if conj else pts) * rot
                keys = [(round(z.real, 6) + 0.0, round(z.imag, 6) + 0.0) for z in img]
                if all(k in lookup for k in keys):
                    perms.append(np.array([lookup[k] for k in keys]))
        return perms


@dataclass(frozen=True)
class PartitionTree:
    """Level ``j`` splits the points into 2^j subsets of 2^(N-j) point indices."""

    levels: tuple[tuple[tuple[int, ...], ...], ...]
    delta: tuple[float, ...]

    def subset_of(self, level: int, point: int) -> int:
        for s, subset in enumerate(self.levels[level]):
            if point in subset:
                return s
        raise KeyError(point)


def _check_N(N: int, lo: int) -> None:
    if not lo <= N <= MAX_N:
        raise ValueError(f"N must lie in [{lo}, {MAX_N}], got {N}")


def make_psk(N: int) -> Constellation:
    _check_N(N, 1)
    M = 1 << N
    theta = 2 * np.pi * np.arange(M) / M
    pts = math.sqrt(N) * (np.cos(theta) + 1j * np.sin(theta))
    # exact axis points for N=1,2 keep symmetries clean
    pts = np.where(np.abs(pts.real) < 1e-12, 1j * pts.imag, pts)
    pts = np.where(np.abs(pts.imag) < 1e-12, pts.real + 0j, pts)
    return Constellation("psk", N, pts)


def _square_grid(side: int) -> list[tuple[int, int]]:
    """Grid indices (col, row) ordered by imaginary part descending, then real ascending."""
    return [(c, r) for r in range(side - 1, -1, -1) for c in range(side)]


def _qam_level_label(c: int, r: int, level: int) -> tuple[int, ...]:
    # level 2t fixes (c mod 2^t, r mod 2^t); level 2t+1 also fixes the
    # checkerboard colour of the 2^t-spaced sublattice
    t, odd = divmod(level, 2)
    label = (c % (1 << t), r % (1 << t))
    if odd:
        label += (((c >> t) + (r >> t)) & 1,)
    return label


def make_qam(N: int) -> Constellation:
    """Square 2^N-QAM for even N; for odd N, one checkerboard half of 2^(N+1)-QAM.

    The big square grid is scaled to average energy N before halving. The
    kept half contains the most negative corner and, by the grid's mirror
    symmetry, also has average energy exactly N.
    """
    _check_N(N, 2)
    big = N if N % 2 == 0 else N + 1
    side = 1 << (big // 2)
    M_big = side * side
    scale = math.sqrt(1.5 * N / (M_big - 1))
    cells = _square_grid(side)
    if N % 2:
        cells = [(c, r) for c, r in cells if (c + r) % 2 == 0]
    pts = np.array([scale * complex(2 * c - side + 1, 2 * r - side + 1) for c, r in cells])
    return Constellation("qam", N, pts)


def _qam_cells(con: Constellation) -> list[tuple[int, int]]:
    big = con.N if con.N % 2 == 0 else con.N + 1
    side = 1 << (big // 2)
    cells = _square_grid(side)
    if con.N % 2:
        cells = [(c, r) for c, r in cells if (c + r) % 2 == 0]
    return cells


def _subset_min(con: Constellation, subset) -> float:
    idx = np.array(subset)
    d = con.sqdist[np.ix_(idx, idx)]
    return float(d[np.triu_indices(len(idx), 1)].min()) if len(idx) > 1 else math.inf


def ungerboeck_partition(con: Constellation) -> PartitionTree:
    M, N = con.size, con.N
    levels = []
    if con.kind == "psk":
        for j in range(N):
            levels.append(tuple(tuple(range(r, M, 1 << j)) for r in range(1 << j)))
    else:
        cells = _qam_cells(con)
        shift = 0 if N % 2 == 0 else 1  # odd N starts one level down the big grid's tree
        for j in range(N):
            groups: dict[tuple, list[int]] = {}
            for k, (c, r) in enumerate(cells):
                groups.setdefault(_qam_level_label(c, r, j + shift), []).append(k)
            subsets = sorted(tuple(g) for g in groups.values())
            levels.append(tuple(subsets))
    delta = tuple(min(_subset_min(con, s) for s in level) for level in levels)
    return PartitionTree(tuple(levels), delta)


def dmin_psk_formula(N: int, eta: int) -> float:
    """Largest minimum distance of 2^eta points drawn from 2^N-PSK of energy N."""
    if not 1 <= eta <= N:
        raise ValueError("need 1 <= eta <= N")
    return 2 * math.sqrt(N) * math.sin(math.pi / 2 ** eta)


def dmin_qam_formula(N: int, eta: int) -> float:
    if not 1 <= eta <= N:
        raise ValueError("need 1 <= eta <= N")
    if N % 2 == 0:
        return math.sqrt(2) ** (N - eta + 2) * math.sqrt(1.5 * N / (2 ** N - 1))
    return math.sqrt(2) ** (N - eta + 3) * math.sqrt(1.5 * N / (2 ** (N + 1) - 1))


def bpsk_dmin_squared() -> float:
    return 4.0


def make_constellation(kind: str, N: int) -> Constellation:
    if kind == "psk":
        return make_psk(N)
    if kind == "qam":
        return make_qam(N)
    raise ValueError(f"unknown constellation kind {kind!r}")
