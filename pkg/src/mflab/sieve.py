"""Segmented sieves for the Mobius, Liouville and square-free indicators.

All three labels are produced from one segment pass.  A segment keeps, for
every index n in a window of 2**20 indices, the number of distinct small
prime divisors, the total number of prime divisors with multiplicity, the
product of the small-prime parts, and a square-free flag.  Any index whose
accumulated product falls short of the index itself has exactly one prime
divisor above the segment's root bound, which tops up both counters.

The Liouville sign comes from the parity of the full divisor count, the
Mobius sign from the parity of the distinct count masked by the square-free
flag.  The two parities are accumulated separately on purpose: the pointwise
identity mobius = liouville * squarefree then cross-checks two independent
counting routes instead of restating a definition.

Indices are 1-based and 64-bit throughout.  Ranges are half open: [lo, hi)
covers lo, lo+1, ..., hi-1.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from .errors import InvalidRangeError, RangeOverflowError

SEGMENT = 1 << 20
MAX_INDEX = 2**63 - 1
FACTOR_ORACLE_LIMIT = 10**9

LABELS = ("mobius", "liouville", "squarefree")


@dataclass(frozen=True)
class PrimeBasis:
    """All primes up to a bound, as a sorted int64 array.

    Attributes:
        bound: inclusive upper limit of the enumeration.
        values: the primes, ascending.
    """

    bound: int
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


@dataclass
class SignSeq:
    """A window of sieve values.

    Attributes:
        label: one of "mobius", "liouville", "squarefree", or "custom".
        start: index of the first entry (1-based).
        values: int8 array; entry j holds the value at index start + j.
    """

    label: str
    start: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.start < 1:
            raise InvalidRangeError(f"start must be >= 1, got {self.start}")
        if self.values.dtype != np.int8:
            raise TypeError("SignSeq values must be int8")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def stop(self) -> int:
        """One past the last covered index."""
        return self.start + len(self.values)

    def value(self, n: int) -> int:
        """Value at index n; n must lie inside the window."""
        if not self.start <= n < self.stop:
            raise InvalidRangeError(f"index {n} outside window [{self.start}, {self.stop})")
        return int(self.values[n - self.start])

    def window(self, lo: int, hi: int) -> np.ndarray:
        """View of the values on [lo, hi)."""
        if not (self.start <= lo < hi <= self.stop):
            raise InvalidRangeError(f"[{lo}, {hi}) not inside [{self.start}, {self.stop})")
        return self.values[lo - self.start : hi - self.start]


def primes_upto(bound: int) -> PrimeBasis:
    """Enumerate all primes p <= bound with a plain Eratosthenes pass.

    Args:
        bound: inclusive limit, any non-negative integer.

    Returns:
        PrimeBasis with the ascending primes.
    """
    if bound < 0:
        raise InvalidRangeError(f"bound must be >= 0, got {bound}")
    if bound < 2:
        return PrimeBasis(bound, np.empty(0, dtype=np.int64))
    flags = np.ones(bound + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(bound) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return PrimeBasis(bound, np.flatnonzero(flags).astype(np.int64))


_ORACLE_PRIMES: list[int] = []


def factor_oracle(n: int) -> list[int]:
    """Factor n by deterministic trial division.

    Kept deliberately independent of the sieve: no shared tables beyond a
    straight prime enumeration, so it can serve as a ground-truth check.

    Args:
        n: integer with 1 <= n <= 10**9.

    Returns:
        The multiset of prime divisors as an ascending list, with
        multiplicity.  factor_oracle(1) == [].
    """
    if n < 1:
        raise InvalidRangeError(f"n must be >= 1, got {n}")
    if n > FACTOR_ORACLE_LIMIT:
        raise RangeOverflowError(f"factor_oracle is guarded at {FACTOR_ORACLE_LIMIT}, got {n}")
    if not _ORACLE_PRIMES:
        _ORACLE_PRIMES.extend(int(p) for p in primes_upto(isqrt(FACTOR_ORACLE_LIMIT)).values)
    out: list[int] = []
    m = n
    for p in _ORACLE_PRIMES:
        if p * p > m:
            break
        while m % p == 0:
            out.append(p)
            m //= p
    if m > 1:
        out.append(m)
    return out


def oracle_values(n: int) -> tuple[int, int, int]:
    """(mobius, liouville, squarefree) at n, derived from factor_oracle."""
    factors = factor_oracle(n)
    distinct = len(set(factors))
    squarefree = 1 if distinct == len(factors) else 0
    liouville = -1 if len(factors) % 2 else 1
    mobius = (-1 if distinct % 2 else 1) * squarefree
    return mobius, liouville, squarefree


def _segment_tables(lo: int, hi: int, primes: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Raw (mobius, liouville, squarefree) int8 arrays on [lo, hi)."""
    size = hi - lo
    idx = np.arange(lo, hi, dtype=np.int64)
    total = np.zeros(size, dtype=np.int8)      # divisor count with multiplicity
    distinct = np.zeros(size, dtype=np.int8)   # distinct prime divisor count
    squarefree = np.ones(size, dtype=bool)
    partial = np.ones(size, dtype=np.int64)    # product of small-prime parts
    top = isqrt(hi - 1)
    for p in primes:
        p = int(p)
        if p > top:
            break
        first = (-lo) % p
        total[first::p] += 1
        distinct[first::p] += 1
        partial[first::p] *= p
        q = p * p
        if q < hi:
            squarefree[(-lo) % q :: q] = False
        while q < hi:
            start = (-lo) % q
            total[start::q] += 1
            partial[start::q] *= p
            q *= p
    # A shortfall in the accumulated product means exactly one prime factor
    # above top remains; it is simple, so it bumps both counters by one.
    leftover = partial != idx
    total[leftover] += 1
    distinct[leftover] += 1
    liouville = np.where(total & 1, np.int8(-1), np.int8(1))
    mobius = np.where(distinct & 1, np.int8(-1), np.int8(1))
    mobius[~squarefree] = 0
    return mobius, liouville, squarefree.astype(np.int8)


_LABEL_SLOT = {"mobius": 0, "liouville": 1, "squarefree": 2}


def sieve(label: str, lo: int, hi: int, workers: int = 1) -> SignSeq:
    """Sieve one label over the half-open index range [lo, hi).

    Args:
        label: "mobius", "liouville" or "squarefree".
        lo: first index, >= 1.
        hi: one past the last index; must satisfy lo < hi <= 2**63 - 1.
        workers: segments are computed by this many threads and assembled
            in index order, so the result does not depend on the count.

    Returns:
        SignSeq covering [lo, hi).
    """
    if label not in _LABEL_SLOT:
        raise ValueError(f"unknown label {label!r}; expected one of {LABELS}")
    if hi > MAX_INDEX:
        raise RangeOverflowError(f"hi={hi} exceeds the 64-bit index width")
    if lo < 1 or hi <= lo:
        raise InvalidRangeError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")

    slot = _LABEL_SLOT[label]
    primes = primes_upto(isqrt(hi - 1)).values
    bounds = [(s, min(s + SEGMENT, hi)) for s in range(lo, hi, SEGMENT)]
    out = np.empty(hi - lo, dtype=np.int8)

    def fill(piece: tuple[int, int]) -> np.ndarray:
        return _segment_tables(piece[0], piece[1], primes)[slot]

    if workers == 1 or len(bounds) == 1:
        parts = map(fill, bounds)
    else:
        pool = ThreadPoolExecutor(max_workers=workers)
        parts = pool.map(fill, bounds)
    for (s, e), part in zip(bounds, parts):
        out[s - lo : e - lo] = part
    if workers > 1 and len(bounds) > 1:
        pool.shutdown()
    return SignSeq(label, lo, out)
