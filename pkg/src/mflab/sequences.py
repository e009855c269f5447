"""Bounded sequences, lag correlations and almost periodic approximation.

A BoundedSeq is a 1-based indexed, complex valued sequence with a known sup
bound.  It either wraps a concrete sample window (a sieve output, say) or a
closed-form rule.  Everything downstream works through vectorised evaluation
on int64 index arrays.

Lag correlations F_N(k) = (1/N) * sum_{n=1..N} g(n+k) * conj(g(n)) are the
finite-scale stand-in for the autocorrelation of g; tables of them feed the
spectral modules.  Averages use the chunked compensated summation helper;
windows backed by integer samples take an exact integer path instead.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidRangeError, LagTooLargeError
from .sieve import SignSeq
from .summation import KahanAccumulator, index_chunks


@dataclass
class BoundedSeq:
    """Complex sequence on 1-based indices with a sup bound.

    Attributes:
        fn: vectorised evaluator, int64 index array to value array.
        sup_bound: upper bound for |g(n)|, not required to be attained.
        label: short descriptive tag carried into reports.
        samples: optional concrete int8 window (index 1 at position 0);
            when present, correlation sums run in exact integer arithmetic.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    sup_bound: float
    label: str = "custom"
    samples: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if not self.sup_bound >= 0:
            raise ValueError(f"sup_bound must be >= 0, got {self.sup_bound}")

    def eval(self, idx: np.ndarray) -> np.ndarray:
        return self.fn(np.asarray(idx, dtype=np.int64))

    @classmethod
    def from_signs(cls, seq: SignSeq) -> "BoundedSeq":
        """Wrap a sieve window; indices outside it raise InvalidRangeError."""
        if seq.start != 1:
            # keep the fast integer path simple: re-anchor is the caller's job
            raise InvalidRangeError("from_signs expects a window starting at index 1")
        values = seq.values

        def fn(idx: np.ndarray) -> np.ndarray:
            if len(idx) and (idx[0] < 1 or idx[-1] > len(values)):
                raise InvalidRangeError("index outside the sampled window")
            return values[idx - 1].astype(np.float64)

        return cls(fn, 1.0, label=seq.label, samples=values)

    @classmethod
    def from_samples(cls, values: np.ndarray, label: str = "custom",
                     sup_bound: float | None = None) -> "BoundedSeq":
        """Wrap an arbitrary sample window anchored at index 1."""
        arr = np.asarray(values)
        if sup_bound is None:
            sup_bound = float(np.max(np.abs(arr))) if len(arr) else 0.0
        ints = arr if arr.dtype == np.int8 else None

        def fn(idx: np.ndarray) -> np.ndarray:
            if len(idx) and (idx[0] < 1 or idx[-1] > len(arr)):
                raise InvalidRangeError("index outside the sampled window")
            return arr[idx - 1]

        return cls(fn, sup_bound, label=label, samples=ints)

    @classmethod
    def exponential(cls, theta: float, label: str | None = None) -> "BoundedSeq":
        """The unimodular sequence n -> exp(i * n * theta)."""
        t = float(theta)
        return cls(lambda idx: np.exp(1j * t * idx), 1.0,
                   label=label or f"exp({t:.6g})")


def modulate(g: BoundedSeq, theta: float) -> BoundedSeq:
    """Pointwise twist n -> g(n) * exp(i * n * theta); preserves sup_bound."""
    t = float(theta)
    return BoundedSeq(lambda idx: g.eval(idx) * np.exp(1j * t * idx),
                      g.sup_bound, label=f"{g.label}*exp({t:.6g})")


@dataclass
class CorrelationTable:
    """Lag correlations of one sequence at a fixed window length.

    values[k] holds F_N(k) for k = 0..K.  Only non-negative lags are stored;
    F_N(-k) is recovered by conjugation and is deliberately never written.
    """

    N: int
    K: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if len(self.values) != self.K + 1:
            raise ValueError("values must have K + 1 entries")

    def value(self, k: int) -> complex:
        """F_N(k) for -K <= k <= K, negative lags by conjugation."""
        if abs(k) > self.K:
            raise LagTooLargeError(f"|k|={abs(k)} exceeds table K={self.K}")
        v = complex(self.values[abs(k)])
        return v.conjugate() if k < 0 else v

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k", "re", "im"])
            for k in range(self.K + 1):
                v = complex(self.values[k])
                writer.writerow([k, repr(v.real), repr(v.imag)])


def _window_products_sum(g: BoundedSeq, k: int, lo: int, hi: int) -> complex:
    """sum_{n=lo..hi-1} g(n+k) * conj(g(n)), chunked and compensated."""
    if g.samples is not None:
        w = g.samples
        if hi - 1 + k > len(w):
            raise InvalidRangeError("window with lag runs past the sampled data")
        prod = w[lo - 1 + k : hi - 1 + k] * w[lo - 1 : hi - 1]
        return float(np.sum(prod, dtype=np.int64))
    acc = KahanAccumulator()
    for idx in index_chunks(lo, hi):
        acc.add(np.sum(g.eval(idx + k) * np.conj(g.eval(idx))))
    return acc.total


def correlation_table(g: BoundedSeq, N: int, K: int) -> CorrelationTable:
    """Tabulate F_N(k) for k = 0..K; needs g on [1, N+K].

    Raises LagTooLargeError when K >= N.
    """
    if N < 1:
        raise InvalidRangeError(f"N must be >= 1, got {N}")
    if K < 0 or K >= N:
        raise LagTooLargeError(f"need 0 <= K < N, got K={K}, N={N}")
    vals = np.empty(K + 1, dtype=np.complex128)
    for k in range(K + 1):
        vals[k] = _window_products_sum(g, k, 1, N + 1) / N
    return CorrelationTable(N, K, vals)


def cross_correlation(g: BoundedSeq, h: BoundedSeq, N: int) -> complex:
    """(1/N) * sum_{n=1..N} g(n) * conj(h(n))."""
    if N < 1:
        raise InvalidRangeError(f"N must be >= 1, got {N}")
    if g.samples is not None and h.samples is not None:
        if N > len(g.samples) or N > len(h.samples):
            raise InvalidRangeError("window runs past the sampled data")
        s = np.sum(g.samples[:N] * h.samples[:N], dtype=np.int64)
        return complex(int(s) / N)
    acc = KahanAccumulator()
    for idx in index_chunks(1, N + 1):
        acc.add(np.sum(g.eval(idx) * np.conj(h.eval(idx))))
    return acc.total / N


@dataclass
class TrigPoly:
    """Finite trigonometric polynomial P(n) = sum_k c_k * exp(i alpha_k n).

    Frequencies are radians in [0, 2*pi), pairwise distinct, ascending.
    """

    freqs: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        self.freqs = np.asarray(self.freqs, dtype=np.float64)
        self.coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if len(self.freqs) != len(self.coeffs):
            raise ValueError("freqs and coeffs must align")
        if len(self.freqs) > 1 and not np.all(np.diff(self.freqs) > 0):
            raise ValueError("frequencies must be strictly ascending")

    def __len__(self) -> int:
        return len(self.freqs)

    def eval(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        out = np.zeros(idx.shape, dtype=np.complex128)
        for a, c in zip(self.freqs, self.coeffs):
            out += c * np.exp(1j * a * idx)
        return out

    def modulated(self, theta: float) -> "TrigPoly":
        """P(n) * exp(i n theta): every frequency shifts by theta mod 2*pi."""
        shifted = np.mod(self.freqs + theta, 2.0 * np.pi)
        order = np.argsort(shifted, kind="stable")
        return TrigPoly(shifted[order], self.coeffs[order])

    def as_seq(self, sup_bound: float | None = None) -> BoundedSeq:
        bound = float(np.sum(np.abs(self.coeffs))) if sup_bound is None else sup_bound
        return BoundedSeq(self.eval, bound, label="trigpoly")

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["alpha", "re_c", "im_c"])
            for a, c in zip(self.freqs, self.coeffs):
                writer.writerow([repr(float(a)), repr(c.real), repr(c.imag)])


def besicovitch_distance(g: BoundedSeq, p: TrigPoly | BoundedSeq, N: int) -> float:
    """Mean absolute deviation (1/N) * sum_{n=1..N} |g(n) - p(n)|."""
    if N < 1:
        raise InvalidRangeError(f"N must be >= 1, got {N}")
    acc = KahanAccumulator()
    for idx in index_chunks(1, N + 1):
        acc.add(np.sum(np.abs(g.eval(idx) - p.eval(idx))))
    return acc.total.real / N


def trig_approx(g: BoundedSeq, M: int, N: int) -> TrigPoly:
    """Best-peak trigonometric approximation of g over [1, N].

    Takes the M strongest bins of the size-N periodogram of g as
    frequencies, skipping any bin within 2 grid steps of one already chosen
    (circularly), then attaches the empirical coefficients
    c_k = (1/N) * sum_{n=1..N} g(n) * exp(-i alpha_k n).

    A sequence that vanishes identically on [1, N] yields the empty
    polynomial.  The selection is deterministic: bins are ranked by power
    with the lower bin index winning ties.
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    if N < 1:
        raise InvalidRangeError(f"N must be >= 1, got {N}")
    w = g.eval(np.arange(1, N + 1, dtype=np.int64)).astype(np.complex128)
    # fft computes sum_m w[m] e^{-2 pi i j m / N} over m = 0..N-1, which is
    # sum_n g(n) e^{-i alpha_j n} up to one factor e^{+i alpha_j}
    spectrum = np.fft.fft(w)
    power = np.abs(spectrum) ** 2
    order = np.argsort(-power, kind="stable")
    chosen: list[int] = []
    blocked = np.zeros(N, dtype=bool)
    for j in order:
        if len(chosen) == M:
            break
        if blocked[j] or power[j] == 0.0:
            continue
        chosen.append(int(j))
        for d in range(-2, 3):
            blocked[(j + d) % N] = True
    if not chosen:
        return TrigPoly(np.empty(0), np.empty(0, dtype=np.complex128))
    bins = np.array(sorted(chosen), dtype=np.int64)
    alphas = 2.0 * np.pi * bins / N
    coeffs = spectrum[bins] * np.exp(-1j * alphas) / N
    return TrigPoly(alphas, coeffs)
