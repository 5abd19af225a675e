"""Monte Carlo message-error rates over complex AWGN.

SNR is Eb/N0 in dB with Eb = 1: a 2^N-ary symbol of energy N carries N
index-coded bits, and each BPSK baseline symbol has unit energy.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.special import erfc

from .gf2 import BitVec
from .index_code import EncodingMatrix, encode, known_transmissions, linear_decoder, receiver_views
from .labeling import Labeling
from .problem import IndexCodingProblem, normalize

RNG_ALGORITHM = "PCG64/SeedSequence"
CHUNK = 1 << 14


@dataclass(frozen=True)
class NoiseModel:
    """``n0`` is the one-sided noise spectral density; each real dimension gets variance n0/2."""

    n0: float
    bandwidth_normalized: bool = True

    def __post_init__(self):
        if not self.n0 > 0:
            raise ValueError("n0 must be positive")

    @classmethod
    def from_snr_db(cls, snr_db: float, bandwidth_normalized: bool = True) -> "NoiseModel":
        return cls(10 ** (-snr_db / 10), bandwidth_normalized)

    def sigma(self, real_dims: int = 2) -> float:
        """Per-dimension standard deviation for a scheme occupying ``real_dims`` real dimensions.

        With bandwidth normalization, a scheme using more dimensions than one
        complex symbol sees proportionally more noise power.
        """
        var = self.n0 / 2
        if self.bandwidth_normalized and real_dims > 2:
            var *= real_dims / 2
        return math.sqrt(var)


@dataclass(frozen=True)
class CurvePoint:
    receiver_id: str
    snr_db: float
    trials: int
    errors: int

    @property
    def rate(self) -> float:
        return self.errors / self.trials


@dataclass(frozen=True)
class SimResult:
    scheme: str
    seed: int
    points: tuple[CurvePoint, ...]
    rng: str = RNG_ALGORITHM
    meta: Mapping[str, str] = field(default_factory=dict, compare=False)

    def rate(self, receiver_id: str, snr_db: float) -> float:
        for p in self.points:
            if p.receiver_id == receiver_id and p.snr_db == snr_db:
                return p.rate
        raise KeyError((receiver_id, snr_db))

    def curve(self, receiver_id: str) -> list[CurvePoint]:
        return [p for p in self.points if p.receiver_id == receiver_id]


def q_function(x):
    """Gaussian tail probability P(Z > x)."""
    return 0.5 * erfc(np.asarray(x) / math.sqrt(2))


def two_point_error(d2: float, n0: float) -> float:
    """ML error probability between two equiprobable points at squared distance ``d2``."""
    return float(q_function(math.sqrt(d2 / (2 * n0))))


def _rng(seed: int, *path: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *path])))


def _parity(a: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(a) & 1).astype(np.int64)


def _pack(bits: np.ndarray) -> np.ndarray:
    """Rows of 0/1 to MSB-first integers."""
    weights = 1 << np.arange(bits.shape[1] - 1, -1, -1, dtype=np.int64)
    return bits.astype(np.int64) @ weights


def _span_elements(rows: Sequence[int]) -> np.ndarray:
    elems = [0]
    for r in rows:
        if r not in elems:
            elems += [e ^ r for e in elems]
    return np.array(sorted(set(elems)), dtype=np.int64)


class _ReceiverModel:
    """Precomputed per-receiver decoding data for the batched simulator."""

    def __init__(self, code: EncodingMatrix, knows, want: int):
        n = code.n
        self.want = want
        self.known_rows = np.array([code.rows[k] if k in knows else 0 for k in range(n)], dtype=np.int64)
        self.coset = _span_elements([code.rows[k] for k in range(n) if k not in knows])
        dec = linear_decoder(code, knows, want)
        self.code_mask = dec.code_mask
        self.known_mask = dec.known_mask
        self.want_bit = 1 << (n - 1 - want)
        self.S = known_transmissions(code, knows)

    def offsets(self, x_bits: np.ndarray) -> np.ndarray:
        # XOR of the rows selected by the known messages
        sel = x_bits.astype(bool)
        out = np.zeros(x_bits.shape[0], dtype=np.int64)
        for k in np.flatnonzero(self.known_rows):
            out[sel[:, k]] ^= self.known_rows[k]
        return out

    def recover(self, codewords: np.ndarray, x_packed: np.ndarray) -> np.ndarray:
        return _parity(codewords & self.code_mask) ^ _parity(x_packed & self.known_mask)


def _ml_codewords(received: np.ndarray, offsets: np.ndarray, coset: np.ndarray,
                  point_of: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Nearest candidate per row; equal distances go to the lower point index."""
    cand = offsets[:, None] ^ coset[None, :]
    idx = point_of[cand]
    dist = np.abs(received[:, None] - points[idx]) ** 2
    best = dist.min(axis=1, keepdims=True)
    masked = np.where(dist == best, idx, points.size)
    win = masked.argmin(axis=1)
    return cand[np.arange(cand.shape[0]), win]


def transmit(x: BitVec, code: EncodingMatrix, labeling: Labeling) -> complex:
    return labeling.signal(encode(x, code).value)


def add_noise(s, model: NoiseModel, rng: np.random.Generator, real_dims: int = 2):
    """Complex AWGN sample(s) added to ``s``."""
    s = np.asarray(s, dtype=complex)
    sigma = model.sigma(real_dims)
    noise = rng.normal(0.0, sigma, size=s.shape) + 1j * rng.normal(0.0, sigma, size=s.shape)
    out = s + noise
    return complex(out) if out.ndim == 0 else out


def ml_decode(r: complex, knows, realization, labeling: Labeling, code: EncodingMatrix,
              want: int) -> tuple[BitVec, int]:
    """Decode one received sample given the receiver's side information.

    ``realization`` maps each known message to its bit. Returns the decoded
    codeword and the recovered demanded bit.
    """
    knows = frozenset(knows)
    if set(realization) != set(knows):
        raise ValueError("realization must assign exactly the known messages")
    model = _ReceiverModel(code, knows, want)
    x = np.zeros((1, code.n), dtype=np.int64)
    for k, b in realization.items():
        x[0, k] = b
    cw = _ml_codewords(np.array([r]), model.offsets(x), model.coset,
                       np.array(labeling.point_of), labeling.constellation.points)
    bit = int(model.recover(cw, _pack(x))[0])
    return BitVec(int(cw[0]), code.N), bit


def _scheme_name(labeling: Labeling) -> str:
    return labeling.constellation.kind.upper()


def _chunks(trials: int):
    for start in range(0, trials, CHUNK):
        yield start // CHUNK, min(CHUNK, trials - start)


def simulate(problem: IndexCodingProblem, code: EncodingMatrix, labeling: Labeling,
             snr_grid_db: Sequence[float], trials: int, seed: int,
             bandwidth_normalized: bool = True) -> SimResult:
    """Message-error rate of every receiver's demand at each SNR."""
    if trials < 1:
        raise ValueError("trials must be positive")
    receivers = normalize(problem).receivers
    point_of = np.array(labeling.point_of)
    points = labeling.constellation.points
    L_rows = np.array(code.rows, dtype=np.int64)
    out = []
    for si, snr in enumerate(snr_grid_db):
        model = NoiseModel.from_snr_db(snr, bandwidth_normalized)
        for ri, r in enumerate(receivers):
            want = next(iter(r.wants))
            rm = _ReceiverModel(code, r.knows, want)
            errors = 0
            for ci, size in _chunks(trials):
                rng = _rng(seed, si, ri, ci)
                x = rng.integers(0, 2, size=(size, code.n), dtype=np.int64)
                xp = _pack(x)
                cw = np.bitwise_xor.reduce(np.where(x.astype(bool), L_rows, 0), axis=1)
                rx = add_noise(points[point_of[cw]], model, rng)
                dec = _ml_codewords(rx, rm.offsets(x), rm.coset, point_of, points)
                bits = rm.recover(dec, xp)
                errors += int(np.count_nonzero(bits != x[:, want]))
            out.append(CurvePoint(r.id, float(snr), trials, errors))
    return SimResult(_scheme_name(labeling), seed, tuple(out))


def simulate_bpsk_baseline(problem: IndexCodingProblem, code: EncodingMatrix,
                           snr_grid_db: Sequence[float], trials: int, seed: int,
                           bandwidth_normalized: bool = True) -> SimResult:
    """N unit-energy antipodal symbols per transmission, hard sign decisions per bit.

    Code bits computable from side information are taken as known.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    receivers = normalize(problem).receivers
    N = code.N
    L_rows = np.array(code.rows, dtype=np.int64)
    shifts = np.arange(N - 1, -1, -1, dtype=np.int64)
    out = []
    for si, snr in enumerate(snr_grid_db):
        model = NoiseModel.from_snr_db(snr, bandwidth_normalized)
        sigma = model.sigma(N)
        for ri, r in enumerate(receivers):
            want = next(iter(r.wants))
            rm = _ReceiverModel(code, r.knows, want)
            known_y = sum(1 << (N - 1 - j) for j in rm.S)
            errors = 0
            for ci, size in _chunks(trials):
                rng = _rng(seed, si, ri, ci)
                x = rng.integers(0, 2, size=(size, code.n), dtype=np.int64)
                xp = _pack(x)
                cw = np.bitwise_xor.reduce(np.where(x.astype(bool), L_rows, 0), axis=1)
                ybits = (cw[:, None] >> shifts) & 1
                received = (1 - 2 * ybits) + rng.normal(0.0, sigma, size=ybits.shape)
                hard = _pack((received < 0).astype(np.int64))
                dec = (hard & ~known_y) | (cw & known_y)
                bits = rm.recover(dec, xp)
                errors += int(np.count_nonzero(bits != x[:, want]))
            out.append(CurvePoint(r.id, float(snr), trials, errors))
    return SimResult("BPSK", seed, tuple(out))


def curves_csv(results: Sequence[SimResult]) -> str:
    buf = io.StringIO()
    for res in results:
        buf.write(f"# scheme={res.scheme} seed={res.seed} rng={res.rng}\n")
    buf.write("# scheme,receiver,snr_db,trials,errors,rate\n")
    for res in results:
        for p in res.points:
            buf.write(f"{res.scheme},{p.receiver_id},{p.snr_db:g},{p.trials},{p.errors},{p.rate:.6e}\n")
    return buf.getvalue()


def snr_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive grid from ``start`` to ``stop``."""
    if step <= 0:
        raise ValueError("step must be positive")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    if count < 1:
        raise ValueError("empty SNR grid")
    return [round(start + k * step, 10) for k in range(count)]


def receiver_ids(problem: IndexCodingProblem, code: EncodingMatrix) -> list[str]:
    return [v.receiver_id for v in receiver_views(code, problem)]
