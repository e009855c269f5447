"""Decay experiments for sign sequences against structured targets.

Each experiment evaluates one normalised average at a grid of window
lengths N and reports the values together with coarse decay indicators.
Averages over integer-valued windows are computed in exact integer
arithmetic and divided once at the end; modulated averages go through the
chunked compensated summation helper.  Reports are written as JSON with
sorted keys, so identical configurations produce byte-identical files
apart from the wall-clock field.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .cache import read_cache
from .errors import AllSquaredError, InvalidRangeError, NotDisjointError
from .sequences import BoundedSeq, TrigPoly
from .sieve import LABELS, sieve
from .summation import CHUNK, KahanAccumulator

# golden-ratio frequency used by the default battery
THETA_STAR = 2.0 * math.pi * (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_GRID = (10**5, 10**6, 10**7)
LARGE_N_LIMIT = 10**7


# ---------------------------------------------------------------------------
# Window provider

_MEMO: dict[str, np.ndarray] = {}


def sign_window(label: str, hi: int, cache_dir: str | Path | None = None) -> np.ndarray:
    """Values of a label for n = 1..hi as an int8 array (index n-1).

    Windows are memoised per label and regrown geometrically, so a battery
    of experiments at nested N reuses one sieve pass.  When cache_dir holds
    a file named <label>.bin it is read (and fully verified) first; a cache
    that does not reach hi falls back to sieving.
    """
    if label not in LABELS:
        raise ValueError(f"unknown label {label!r}")
    have = _MEMO.get(label)
    if have is not None and len(have) >= hi:
        return have[:hi]
    if cache_dir is not None:
        path = Path(cache_dir) / f"{label}.bin"
        if path.exists():
            seq = read_cache(path)  # raises on corruption; caller maps to exit 3
            if seq.label == label and seq.start == 1 and len(seq) >= hi:
                _MEMO[label] = seq.values
                return seq.values[:hi]
    grown = max(hi, 2 * len(have) if have is not None else hi)
    _MEMO[label] = sieve(label, 1, grown + 1).values
    return _MEMO[label][:hi]


def _modulated_average(mask: np.ndarray, theta: float, N: int) -> complex:
    """(1/N) * sum_{n=1..N} mask[n-1] * exp(i n theta), exact when theta = 0."""
    if theta == 0.0:
        return complex(int(np.sum(mask[:N], dtype=np.int64)) / N)
    acc = KahanAccumulator()
    for lo in range(0, N, CHUNK):
        hi = min(lo + CHUNK, N)
        n = np.arange(lo + 1, hi + 1, dtype=np.float64)
        acc.add(np.sum(mask[lo:hi] * np.exp(1j * theta * n)))
    return acc.total / N


# ---------------------------------------------------------------------------
# The experiments


def mobius_exponential_sum(theta: float, N: int,
                           cache_dir: str | Path | None = None) -> complex:
    """(1/N) * sum_{n<=N} mobius(n) * exp(i n theta)."""
    if N < 1:
        raise InvalidRangeError(f"N must be >= 1, got {N}")
    return _modulated_average(sign_window("mobius", N, cache_dir), theta, N)


def squarefree_modulated_sum(shifts, theta: float, N: int,
                             cache_dir: str | Path | None = None) -> complex:
    """Mobius average twisted by exp(i n theta), restricted to the n whose
    shifted neighbours n + a are all square-free."""
    if N < 1:
        raise InvalidRangeError(f"N must be >= 1, got {N}")
    shifts = sorted(set(int(a) for a in shifts))
    if min(shifts, default=1) < 1:
        raise InvalidRangeError("shifts must be >= 1")
    reach = max(shifts, default=0)
    mu = sign_window("mobius", N, cache_dir)
    sq = sign_window("squarefree", N + reach, cache_dir)
    mask = mu[:N].copy()
    for a in shifts:
        mask *= sq[a : a + N]
    return _modulated_average(mask, theta, N)


@dataclass(frozen=True)
class Pattern:
    """Shift pattern with exponents: shifts[i] carries exponents[i] in {1, 2}."""

    shifts: tuple[int, ...]
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.shifts) != len(self.exponents):
            raise ValueError("shifts and exponents must align")
        if len(set(self.shifts)) != len(self.shifts):
            raise NotDisjointError("pattern shifts must be distinct")
        if any(a < 0 for a in self.shifts):
            raise InvalidRangeError("shifts must be non-negative")
        if not set(self.exponents) <= {1, 2}:
            raise ValueError("exponents must be 1 or 2")
        if len(self.shifts) == 0:
            raise InvalidRangeError("pattern must be non-empty")


def pattern_correlation(pattern: Pattern, N: int, label: str = "mobius",
                        cache_dir: str | Path | None = None) -> float:
    """(1/N) * sum_{n<=N} of the product of label(n + a)^e over the pattern.

    At least one exponent must be 1; squaring every factor leaves no sign
    content and raises AllSquaredError.
    """
    if N < 1:
        raise InvalidRangeError(f"N must be >= 1, got {N}")
    if 1 not in pattern.exponents:
        raise AllSquaredError("pattern needs at least one exponent equal to 1")
    reach = max(pattern.shifts)
    w = sign_window(label, N + reach, cache_dir)
    acc = np.ones(N, dtype=np.int8)
    for a, e in zip(pattern.shifts, pattern.exponents):
        part = w[a : a + N]
        acc = acc * (part * part if e == 2 else part)
    return int(np.sum(acc, dtype=np.int64)) / N


def two_point_correlation(h: int, X: int,
                          cache_dir: str | Path | None = None) -> float:
    """|(1/X) * sum_{j<=X} liouville(j) * liouville(j+h)|."""
    if h < 1 or X < 1:
        raise InvalidRangeError(f"need h >= 1 and X >= 1, got h={h}, X={X}")
    lam = sign_window("liouville", X + h, cache_dir)
    s = int(np.sum(lam[:X] * lam[h : h + X], dtype=np.int64))
    return abs(s) / X


def small_correlation_fraction(H: int, X: int, delta: float,
                               cache_dir: str | Path | None = None) -> float:
    """Fraction of lags h <= H whose two-point sum is below delta * X."""
    if H < 1 or X < 1:
        raise InvalidRangeError(f"need H >= 1 and X >= 1, got H={H}, X={X}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    lam = sign_window("liouville", X + H, cache_dir)
    base = lam[:X]
    hits = 0
    for h in range(1, H + 1):
        s = abs(int(np.sum(base * lam[h : h + X], dtype=np.int64)))
        if s <= delta * X:
            hits += 1
    return hits / H


def windowed_sum_energy(k: int, h: int, N: int,
                        cache_dir: str | Path | None = None,
                        with_spectral: bool = True) -> tuple[float, float | None]:
    """Mean square of h-term Mobius window sums, directly and spectrally.

    direct = (1/N) * sum_{n<=N} |sum_{l=1..h} mobius(n + k*l)|^2.  The
    spectral route integrates the squared Dirichlet kernel |D_h(k theta)|^2
    against the periodogram of the window [1, N + h*k].  The two agree up
    to edge effects: |direct - spectral| <= (2*h*k/N) * h^2.

    The spectral route costs an FFT with at least 2*(N + h*k) bins, so
    callers that only need the direct statistic (decay scans over large N)
    pass with_spectral=False and get (direct, None).
    """
    from .spectral import dirichlet_energy, periodogram

    if k < 1 or h < 1 or N < 1:
        raise InvalidRangeError(f"need k, h, N >= 1, got k={k}, h={h}, N={N}")
    reach = h * k
    mu = sign_window("mobius", N + reach, cache_dir)
    sums = np.zeros(N, dtype=np.int32)
    for l in range(1, h + 1):
        sums += mu[k * l : k * l + N]
    direct = int(np.sum(sums * sums, dtype=np.int64)) / N
    if not with_spectral:
        return direct, None

    m = N + reach
    bins = 1 << max(2 * m - 1, 8 * h * k - 1, 4095).bit_length()
    g = BoundedSeq.from_samples(mu[:m], label="mobius", sup_bound=1.0)
    gram = periodogram(g, m, bins=bins)
    spectral = dirichlet_energy(gram.measure, h, k)
    return direct, spectral


def short_interval_average(H: int, X: int,
                           cache_dir: str | Path | None = None) -> float:
    """(1/(H*X)) * sum_{x=X..2X-1} |sum_{x < k <= x+H} mobius(k)|."""
    if H < 1 or X < 1:
        raise InvalidRangeError(f"need H >= 1 and X >= 1, got H={H}, X={X}")
    mu = sign_window("mobius", 2 * X + H, cache_dir)
    csum = np.zeros(2 * X + H + 1, dtype=np.int64)
    csum[1:] = np.cumsum(mu, dtype=np.int64)
    x = np.arange(X, 2 * X, dtype=np.int64)
    inner = np.abs(csum[x + H] - csum[x])
    return int(np.sum(inner, dtype=np.int64)) / (H * X)


def rotation_orthogonality(alpha: float, poly: TrigPoly, N: int,
                           cache_dir: str | Path | None = None) -> complex:
    """(1/N) * sum_{n<=N} mobius(n) * P(n * alpha) for a trigonometric P.

    Evaluates term by term: the harmonic at frequency a contributes its
    coefficient times the plain exponential average at a * alpha, exactly
    by linearity.
    """
    if N < 1:
        raise InvalidRangeError(f"N must be >= 1, got {N}")
    total = 0.0 + 0.0j
    for a, c in zip(poly.freqs, poly.coeffs):
        theta = math.remainder(float(a) * alpha, 2.0 * math.pi)
        total += complex(c) * mobius_exponential_sum(theta, N, cache_dir)
    return total


# ---------------------------------------------------------------------------
# Reports

ExperimentFn = Callable[..., object]


@dataclass
class ExperimentReport:
    """One experiment on one N grid, ready to serialise."""

    id: str
    params: dict
    grid: list[int]
    values: list[complex]
    indicators: dict
    runtime_ms: float
    input_checksum: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "params": self.params,
            "grid": [
                {"N": n, "value_re": v.real, "value_im": v.imag}
                for n, v in zip(self.grid, self.values)
            ],
            "indicators": self.indicators,
            "runtime_ms": self.runtime_ms,
            "input_checksum": self.input_checksum,
        }

    def write(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n")


def input_checksum(exp_id: str, params: dict, grid: list[int]) -> str:
    blob = json.dumps({"id": exp_id, "params": params, "grid": grid}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _resolve_theta(params: dict) -> float:
    if "theta_over_2pi" in params:
        return 2.0 * math.pi * float(params["theta_over_2pi"])
    return float(params.get("theta", 0.0))


def _poly_from_params(params: dict) -> TrigPoly:
    terms = params.get("poly", [])
    freqs = [float(t["freq"]) for t in terms]
    coeffs = [complex(float(t.get("re", 0.0)), float(t.get("im", 0.0))) for t in terms]
    order = np.argsort(freqs, kind="stable")
    return TrigPoly(np.array(freqs)[order], np.array(coeffs)[order])


def _run_on_grid(exp_id: str, params: dict, grid: list[int],
                 cache_dir: str | Path | None) -> list[complex]:
    values: list[complex] = []
    for N in grid:
        if exp_id == "mobius_exponential":
            v = mobius_exponential_sum(_resolve_theta(params), N, cache_dir)
        elif exp_id == "squarefree_shifts":
            v = squarefree_modulated_sum(params["shifts"], _resolve_theta(params), N, cache_dir)
        elif exp_id == "pattern":
            pat = Pattern(tuple(params["shifts"]), tuple(params["exponents"]))
            v = pattern_correlation(pat, N, params.get("label", "mobius"), cache_dir)
        elif exp_id == "two_point":
            v = two_point_correlation(int(params["h"]), N, cache_dir)
        elif exp_id == "small_fraction":
            v = small_correlation_fraction(int(params["H"]), N, float(params["delta"]), cache_dir)
        elif exp_id == "window_energy":
            direct, _ = windowed_sum_energy(int(params["k"]), int(params["h"]), N,
                                            cache_dir, with_spectral=False)
            v = direct / int(params["h"]) ** 2
        elif exp_id == "short_interval":
            v = short_interval_average(int(params["H"]), N, cache_dir)
        elif exp_id == "rotation":
            v = rotation_orthogonality(float(params["alpha"]), _poly_from_params(params), N, cache_dir)
        else:
            raise ValueError(f"unknown experiment id {exp_id!r}")
        values.append(complex(v))
    return values


EXPERIMENT_IDS = (
    "mobius_exponential",
    "squarefree_shifts",
    "pattern",
    "two_point",
    "small_fraction",
    "window_energy",
    "short_interval",
    "rotation",
)


def run_experiment(exp_id: str, params: dict, grid: list[int] | None = None,
                   cache_dir: str | Path | None = None,
                   workers: int = 1) -> ExperimentReport:
    """Run one experiment over an N grid and assemble its report.

    The shard plan (chunk size and worker count) is recorded in the params
    so that reruns compare like for like; partial sums are always merged in
    fixed chunk order regardless of the worker count.
    """
    grid = sorted(int(n) for n in (grid or DEFAULT_GRID))
    if exp_id not in EXPERIMENT_IDS:
        raise ValueError(f"unknown experiment id {exp_id!r}")
    params = dict(params)
    params["shards"] = {"chunk": CHUNK, "workers": int(workers)}
    checksum = input_checksum(exp_id, params, grid)
    t0 = time.perf_counter()
    values = _run_on_grid(exp_id, params, grid, cache_dir)
    elapsed = (time.perf_counter() - t0) * 1000.0
    mags = [abs(v) for v in values]
    indicators = {
        "final_abs": mags[-1],
        "max_abs": max(mags),
        # monotone along the whole grid, and the weaker endpoint comparison;
        # finite-N magnitudes often wobble at small N, so both are reported
        "decreasing_abs": all(a >= b for a, b in zip(mags, mags[1:])),
        "endpoint_decay": mags[-1] <= mags[0],
    }
    return ExperimentReport(exp_id, params, grid, values, indicators, elapsed, checksum)
