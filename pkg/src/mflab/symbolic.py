"""Block combinatorics for square-free patterns and the sign skew product.

Finite words stand in for points of the relevant shift spaces: Block2 is a
word over {0, 1} (a stretch of a square-free indicator), Block3 a word over
{-1, 0, 1} (a stretch of a sign sequence).  Both carry the index of their
first symbol so windows cut from different offsets stay comparable.

A pattern of shifts A is admissible when, for every prime p, the residues
of A modulo p^2 miss at least one class; only primes with p^2 <= |A| can
fail, which keeps the check finite.  Cylinder densities for square-free
patterns follow Mirsky: the probability that all shifts in A land on
square-free numbers is the product over p of (1 - t(p, A) / p^2) with
t(p, A) the number of distinct residues of A mod p^2.

The skew product couples a {0,1} word with a word of signs: each step
shifts the first word by one and consumes one sign exactly when the symbol
read off was a 1.  Assembling signs onto a support word intertwines this
walk with the plain shift, which the tests check symbol by symbol.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from itertools import combinations
from math import isqrt

import numpy as np

from .errors import (
    BlockExhaustedError,
    InvalidRangeError,
    NonPrimeError,
    NotDisjointError,
    SignWordTooShortError,
    WindowTooLongError,
    ZeroSetTooLargeError,
)
from .sieve import factor_oracle, primes_upto

MIRSKY_PRIME_BOUND = 10**4
ZERO_SET_CAP = 20
_BINARY_LEN_CAP = 64
_TERNARY_LEN_CAP = 39


def _as_word(values, allowed: tuple[int, ...]) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int8)
    if arr.ndim != 1:
        raise ValueError("block values must be one-dimensional")
    if not np.all(np.isin(arr, allowed)):
        raise ValueError(f"block values must lie in {allowed}")
    return arr


@dataclass
class Block2:
    """Finite word over {0, 1} starting at a 1-based index."""

    values: np.ndarray = field(repr=False)
    start: int = 1

    def __post_init__(self) -> None:
        self.values = _as_word(self.values, (0, 1))

    def __len__(self) -> int:
        return len(self.values)


@dataclass
class Block3:
    """Finite word over {-1, 0, 1} starting at a 1-based index."""

    values: np.ndarray = field(repr=False)
    start: int = 1

    def __post_init__(self) -> None:
        self.values = _as_word(self.values, (-1, 0, 1))

    def __len__(self) -> int:
        return len(self.values)


@dataclass
class SkewPoint:
    """A {0,1} word together with the sign word it has yet to consume."""

    base: Block2
    signs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.signs = _as_word(self.signs, (-1, 1))
        if len(self.signs) < int(np.sum(self.base.values)):
            raise SignWordTooShortError(
                f"{len(self.signs)} signs for {int(np.sum(self.base.values))} ones")

    def first_product(self) -> int:
        """Product of the leading symbols; 0 whenever the base starts with 0."""
        lead = int(self.base.values[0]) if len(self.base) else 0
        if lead == 0:
            return 0
        return int(self.signs[0])


def residue_count(p: int, shifts) -> int:
    """Number of distinct residues of the shift set modulo p^2.

    p must be prime (checked deterministically); shifts must be non-empty.
    """
    shifts = np.asarray(sorted(set(int(a) for a in shifts)), dtype=np.int64)
    if len(shifts) == 0:
        raise InvalidRangeError("shift set must be non-empty")
    if np.any(shifts < 0):
        raise InvalidRangeError("shifts must be non-negative")
    if p < 2 or factor_oracle(p) != [p]:
        raise NonPrimeError(f"{p} is not prime")
    return len(np.unique(shifts % (p * p)))


def is_admissible(shifts) -> bool:
    """True when the shift set misses a residue class mod p^2 for every p.

    Only primes with p^2 <= |shifts| can cover all classes, so only those
    are checked.  The empty set is admissible.  Translation invariant.
    """
    shifts = sorted(set(int(a) for a in shifts))
    if any(a < 0 for a in shifts):
        raise InvalidRangeError("shifts must be non-negative")
    size = len(shifts)
    if size == 0:
        return True
    for p in primes_upto(isqrt(size)).values:
        if residue_count(int(p), shifts) == int(p) * int(p):
            return False
    return True


@dataclass
class MirskyDensity:
    """Product-formula density next to its empirical counterpart.

    tail_lower_bound is a floor for the factor contributed by the primes
    beyond the truncation: the true product density lies within
    [product_estimate * tail_lower_bound, product_estimate].
    """

    product_estimate: float
    empirical: float
    tail_lower_bound: float


def _truncated_product(shifts: list[int], primes: np.ndarray) -> float:
    if not shifts:
        return 1.0
    arr = np.asarray(shifts, dtype=np.int64)
    out = 1.0
    for p in primes:
        sq = int(p) * int(p)
        t = len(np.unique(arr % sq))
        out *= 1.0 - t / sq
        if out == 0.0:
            break
    return out


def mirsky_cylinder_density(ones, zeros, n_check: int,
                            squarefree_window: np.ndarray | None = None,
                            prime_bound: int = MIRSKY_PRIME_BOUND) -> MirskyDensity:
    """Density of { n : n+a square-free for a in ones, not for b in zeros }.

    The product estimate truncates at prime_bound and handles the zero set
    by inclusion-exclusion over its subsets (capped at 20 shifts).  The
    empirical frequency counts matches among n = 1..n_check against a
    square-free indicator window, which is sieved on demand when not given.

    Args:
        ones: shifts required square-free.
        zeros: shifts required not square-free; disjoint from ones.
        n_check: empirical sample size, >= 1.
        squarefree_window: optional indicator values for n = 1 onward, at
            least n_check + max shift long.
        prime_bound: truncation point of the prime product.
    """
    ones = sorted(set(int(a) for a in ones))
    zeros = sorted(set(int(b) for b in zeros))
    if min(ones + zeros, default=0) < 0:
        raise InvalidRangeError("shifts must be non-negative")
    if set(ones) & set(zeros):
        raise NotDisjointError(f"shift sets overlap: {sorted(set(ones) & set(zeros))}")
    if len(zeros) > ZERO_SET_CAP:
        raise ZeroSetTooLargeError(f"zero set has {len(zeros)} shifts, cap is {ZERO_SET_CAP}")
    if n_check < 1:
        raise InvalidRangeError(f"n_check must be >= 1, got {n_check}")

    primes = primes_upto(prime_bound).values
    estimate = 0.0
    for r in range(len(zeros) + 1):
        for extra in combinations(zeros, r):
            term = _truncated_product(ones + list(extra), primes)
            estimate += term if r % 2 == 0 else -term
    size = len(ones) + len(zeros)
    tail = max(0.0, 1.0 - size / prime_bound)

    reach = max(ones + zeros, default=0)
    if squarefree_window is None:
        from .sieve import sieve

        squarefree_window = sieve("squarefree", 1, n_check + reach + 1).values
    if len(squarefree_window) < n_check + reach:
        raise WindowTooLongError("square-free window shorter than n_check plus max shift")
    mask = np.ones(n_check, dtype=bool)
    for a in ones:
        mask &= squarefree_window[a : a + n_check] == 1
    for b in zeros:
        mask &= squarefree_window[b : b + n_check] == 0
    empirical = float(np.count_nonzero(mask)) / n_check
    return MirskyDensity(estimate, empirical, tail)


# ---------------------------------------------------------------------------
# Empirical block statistics


@dataclass
class BlockTable:
    """Empirical distribution of length-L windows over N start offsets."""

    L: int
    N: int
    counts: dict[tuple[int, ...], int]

    def frequency(self, word: tuple[int, ...]) -> float:
        return self.counts.get(tuple(int(s) for s in word), 0) / self.N

    def write_csv(self, path: str) -> None:
        symbol = {-1: "-", 0: "0", 1: "+"}
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["block", "frequency"])
            for word in sorted(self.counts):
                writer.writerow(["".join(symbol[s] for s in word),
                                 repr(self.counts[word] / self.N)])


def _window_values(x) -> tuple[np.ndarray, bool]:
    if isinstance(x, (Block2, Block3)):
        values = x.values
    else:
        values = np.asarray(x, dtype=np.int8)
    binary = bool(np.all(values >= 0))
    return values, binary


def _encode_windows(values: np.ndarray, L: int, N: int, binary: bool) -> np.ndarray:
    """Integer codes of the N windows values[i : i + L]."""
    if binary:
        if L > _BINARY_LEN_CAP:
            raise WindowTooLongError(f"binary block length capped at {_BINARY_LEN_CAP}")
        base = np.uint64(2)
        digits = values.astype(np.uint64)
    else:
        if L > _TERNARY_LEN_CAP:
            raise WindowTooLongError(f"ternary block length capped at {_TERNARY_LEN_CAP}")
        base = np.uint64(3)
        digits = (values + 1).astype(np.uint64)
    codes = np.zeros(N, dtype=np.uint64)
    for j in range(L):
        codes = codes * base + digits[j : j + N]
    return codes


def _decode(code: int, L: int, binary: bool) -> tuple[int, ...]:
    base = 2 if binary else 3
    word = []
    for _ in range(L):
        code, digit = divmod(code, base)
        word.append(digit if binary else digit - 1)
    return tuple(reversed(word))


def empirical_block_measure(x, L: int, N: int) -> BlockTable:
    """Frequencies of the N length-L windows starting at offsets 0..N-1.

    Frequencies sum to exactly 1.  Raises WindowTooLongError when the data
    cannot supply N windows of length L.
    """
    if L < 1 or N < 1:
        raise InvalidRangeError(f"need L >= 1 and N >= 1, got L={L}, N={N}")
    values, binary = _window_values(x)
    if N + L - 1 > len(values):
        raise WindowTooLongError(
            f"need {N + L - 1} symbols for N={N} windows of length {L}, have {len(values)}")
    codes = _encode_windows(values, L, N, binary)
    uniq, counts = np.unique(codes, return_counts=True)
    table = {_decode(int(c), L, binary): int(m) for c, m in zip(uniq, counts)}
    return BlockTable(L, N, table)


def _marginal(table: BlockTable, drop_first: bool) -> dict[tuple[int, ...], float]:
    out: dict[tuple[int, ...], float] = {}
    for word, count in table.counts.items():
        key = word[1:] if drop_first else word[:-1]
        out[key] = out.get(key, 0.0) + count / table.N
    return out


def shift_invariance_defect(table_a: BlockTable, table_b: BlockTable | None = None) -> float:
    """Total variation between the two one-step marginals.

    Drops the last symbol of each word in the first table and the first
    symbol in the second (the same table when omitted).  For a genuinely
    shift-invariant source both marginals agree; on a finite window they
    can differ by edge windows only, so the defect is at most 2L/N.
    """
    if table_b is None:
        table_b = table_a
    if table_a.L != table_b.L:
        raise ValueError(f"tables have different L: {table_a.L} vs {table_b.L}")
    heads = _marginal(table_a, drop_first=False)
    tails = _marginal(table_b, drop_first=True)
    keys = set(heads) | set(tails)
    return 0.5 * sum(abs(heads.get(w, 0.0) - tails.get(w, 0.0)) for w in keys)


@dataclass
class EntropyEstimate:
    """log2(number of distinct L-blocks) / L along a grid of L values."""

    L_grid: list[int]
    exponents: list[float]
    envelope: list[float]


def block_entropy_estimate(x, L_grid, N: int) -> EntropyEstimate:
    """Topological entropy proxy from distinct window counts.

    envelope is the running minimum of the exponents, which is the honest
    monotone reading since block counts are submultiplicative.
    """
    grid = sorted(int(L) for L in L_grid)
    if not grid or grid[0] < 1:
        raise InvalidRangeError("L grid must be non-empty with L >= 1")
    values, binary = _window_values(x)
    if N + grid[-1] - 1 > len(values):
        raise WindowTooLongError("data too short for the largest block length")
    exps = []
    for L in grid:
        codes = _encode_windows(values, L, N, binary)
        distinct = len(np.unique(codes))
        exps.append(math.log2(distinct) / L)
    envelope = list(np.minimum.accumulate(exps))
    return EntropyEstimate(grid, exps, envelope)


# ---------------------------------------------------------------------------
# The sign skew product


def square_map(y: Block3) -> Block2:
    """Forget signs: symbol-wise square of a {-1, 0, 1} word."""
    return Block2(y.values * y.values, start=y.start)


def skew_step(pt: SkewPoint) -> SkewPoint:
    """One step: shift the base word, consume a sign when a 1 was read."""
    if len(pt.base) == 0:
        raise BlockExhaustedError("base word is exhausted")
    read = int(pt.base.values[0])
    return SkewPoint(Block2(pt.base.values[1:], start=pt.base.start + 1),
                     pt.signs[read:])


def apply_signs(x: Block2, signs) -> Block3:
    """Place signs on the support of x: the j-th one of x gets signs[j].

    Raises SignWordTooShortError when there are fewer signs than ones.
    """
    signs = _as_word(signs, (-1, 1))
    ones = int(np.sum(x.values))
    if len(signs) < ones:
        raise SignWordTooShortError(f"{len(signs)} signs for {ones} ones")
    out = np.zeros(len(x.values), dtype=np.int8)
    out[x.values == 1] = signs[:ones]
    return Block3(out, start=x.start)


def extract_signs(y: Block3) -> tuple[Block2, np.ndarray]:
    """Inverse of apply_signs up to unused signs: (support word, signs read)."""
    return square_map(y), y.values[y.values != 0].copy()
