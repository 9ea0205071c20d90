"""Sign patterns, shifted correlations and discrepancy of Liouville's function.

Pattern index convention: the window ``(lambda(n), ..., lambda(n+k-1))`` maps
to ``sum_j b_j * 2**(k-1-j)`` with ``b_j = 1`` when the j-th sign is -1, so
the first sign is the most significant bit and index 0 is all +1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numba
import numpy as np

from .sieve import iter_segments, sieve_segment

__all__ = [
    "BudgetExceededError",
    "PatternCensus",
    "CorrelationResult",
    "pattern_signs",
    "pattern_census",
    "correlation",
    "averaged_chowla",
    "log_chowla",
    "discrepancy_scan",
    "DiscrepancyResult",
]

MAX_PATTERN_K = 6
AVG_CHOWLA_BUDGET = 5 * 10**9

_SEGMENT = 1 << 22


class BudgetExceededError(ValueError):
    pass


def pattern_signs(index: int, k: int) -> tuple[int, ...]:
    return tuple(-1 if (index >> (k - 1 - j)) & 1 else 1 for j in range(k))


@dataclass
class PatternCensus:
    N: int
    k: int
    counts: np.ndarray

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.N

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "k": self.k,
            "patterns": ["".join("+" if s > 0 else "-" for s in pattern_signs(i, self.k)) for i in range(2**self.k)],
            "counts": self.counts.tolist(),
            "frequencies": self.frequencies.tolist(),
        }


@dataclass
class CorrelationResult:
    N: int
    shifts: tuple[int, ...]
    sum: int

    @property
    def normalized(self) -> float:
        return self.sum / self.N

    def as_dict(self) -> dict:
        return {"N": self.N, "shifts": list(self.shifts), "sum": self.sum, "normalized": self.normalized}


@numba.njit(nogil=True, cache=True)
def _census(bits, k, nwin, counts):
    mask = (1 << k) - 1
    code = 0
    for j in range(k - 1):
        code = (code << 1) | bits[j]
    for i in range(nwin):
        code = ((code << 1) | bits[i + k - 1]) & mask
        counts[code] += 1


def pattern_census(N: int, k: int, *, segment: int = _SEGMENT, threads: int = 1) -> PatternCensus:
    """Count each sign pattern over the windows starting at n = 1 .. N-k+1."""
    if not 1 <= k <= MAX_PATTERN_K:
        raise ValueError(f"k must be in [1, {MAX_PATTERN_K}], got {k}")
    if N < k:
        raise ValueError(f"N={N} must be >= k={k}")
    counts = np.zeros(2**k, dtype=np.int64)
    last = N - k + 1
    for tab in iter_segments(1, last, segment=segment, overlap=k - 1, threads=threads):
        bits = (tab.omega_total & 1).astype(np.int64)
        _census(bits, k, len(tab) - (k - 1), counts)
    return PatternCensus(N, k, counts)


@numba.njit(nogil=True, cache=True)
def _shifted_product_sum(lam, shifts, count):
    total = 0
    for i in range(count):
        v = 1
        for s in shifts:
            v *= lam[i + s]
        total += v
    return total


def _check_shifts(shifts: Sequence[int]) -> tuple[int, ...]:
    shifts = tuple(int(s) for s in shifts)
    if not shifts:
        raise ValueError("at least one shift is required")
    if len(set(shifts)) != len(shifts):
        raise ValueError(f"shifts must be distinct, got {list(shifts)}")
    if min(shifts) < 0:
        raise ValueError("shifts must be non-negative")
    return shifts


def correlation(N: int, shifts: Sequence[int], *, segment: int = _SEGMENT, threads: int = 1) -> CorrelationResult:
    """Sum over n = 1..N of prod_i lambda(n + h_i)."""
    shifts = _check_shifts(shifts)
    if N < 1:
        raise ValueError("N must be >= 1")
    if max(shifts) > N:
        raise ValueError("largest shift must not exceed N")
    hmax = max(shifts)
    arr = np.array(shifts, dtype=np.int64)
    total = 0
    for tab in iter_segments(1, N, segment=segment, overlap=hmax, threads=threads):
        total += int(_shifted_product_sum(tab.liouville.astype(np.int64), arr, len(tab) - hmax))
    return CorrelationResult(N, shifts, total)


def _reduce_multiset(shifts: tuple[int, ...]) -> tuple[int, ...]:
    # lambda(n)^2 = 1, so shifts occurring an even number of times drop out
    return tuple(s for s in sorted(set(shifts)) if shifts.count(s) % 2)


def averaged_chowla(x: int, h: int, k: int, *, budget: int = AVG_CHOWLA_BUDGET) -> float:
    """(1 / (h^k x)) * sum over all 1 <= h_1..h_k <= h of |sum_{n<=x} prod lambda(n+h_i)|.

    Repeated shift tuples are included.  Tuples are grouped by multiset, since
    the inner sum only depends on which shifts occur an odd number of times.
    """
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    if not x >= h >= 1:
        raise ValueError("need x >= h >= 1")
    multisets = list(itertools.combinations_with_replacement(range(1, h + 1), k))
    reduced = {}
    for ms in multisets:
        reduced.setdefault(_reduce_multiset(ms), 0)
    if len(reduced) * x > budget:
        raise BudgetExceededError(f"{len(reduced)} shift sets x {x} exceeds budget {budget}")
    tab = sieve_segment(1, x + h)
    lam = tab.liouville.astype(np.int64)
    for key in reduced:
        if not key:
            reduced[key] = x
        else:
            # index i holds n = i + 1, so lambda(n + s) sits at i + s
            reduced[key] = abs(int(_shifted_product_sum(lam, np.array(key, dtype=np.int64), x)))
    total = 0
    for ms in multisets:
        # number of ordered tuples realising this multiset
        mult = math.factorial(k)
        for s in set(ms):
            mult //= math.factorial(ms.count(s))
        total += mult * reduced[_reduce_multiset(ms)]
    return total / (h**k * x)


@numba.njit(nogil=True, cache=True)
def _log_sum(lam, n0, shift, count):
    # Neumaier-compensated sum of lambda(n) lambda(n+shift) / n
    s = 0.0
    c = 0.0
    for i in range(count):
        term = lam[i] * lam[i + shift] / (n0 + i)
        t = s + term
        if abs(s) >= abs(term):
            c += (s - t) + term
        else:
            c += (term - t) + s
        s = t
    return s, c


def log_chowla(x: int, shift: int = 1, *, segment: int = _SEGMENT, threads: int = 1) -> float:
    """(sum_{n<=x} lambda(n) lambda(n+shift) / n) / log x."""
    if x < 2:
        raise ValueError("x must be >= 2")
    if shift < 1:
        raise ValueError("shift must be >= 1")
    parts = []
    for tab in iter_segments(1, x, segment=segment, overlap=shift, threads=threads):
        s, c = _log_sum(tab.liouville.astype(np.float64), tab.lo, shift, len(tab) - shift)
        parts.extend((s, c))
    return math.fsum(parts) / math.log(x)


@dataclass
class DiscrepancyResult:
    N: int
    max_abs: int
    argmax_d: int
    argmax_n: int

    def as_dict(self) -> dict:
        return {"N": self.N, "max_abs": self.max_abs, "argmax_d": self.argmax_d, "argmax_n": self.argmax_n}


@numba.njit(nogil=True, cache=True)
def _discrepancy(values, N):
    # values[i] = f(i + 1); d-major loop, ties keep the smallest d then n
    best = -1
    bd = 0
    bn = 0
    for d in range(1, N + 1):
        s = 0
        for j in range(1, N // d + 1):
            s += values[j * d - 1]
            a = abs(s)
            if a > best:
                best = a
                bd = d
                bn = j
    return best, bd, bn


def discrepancy_scan(N: int, values: Optional[np.ndarray] = None) -> DiscrepancyResult:
    """Max over d, n with dn <= N of |f(d) + f(2d) + ... + f(nd)|.

    ``values`` holds f(1..N); Liouville's function is used when omitted.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if values is None:
        values = sieve_segment(1, N).liouville
    values = np.asarray(values)
    if values.size < N:
        raise ValueError("need f(1..N)")
    values = values[:N]
    if np.any(values == 0):
        first = int(np.nonzero(values == 0)[0][0]) + 1
        raise ValueError(f"f vanishes at n={first}; the scanner needs values in {{-1, +1}}")
    if np.any(np.abs(values) != 1):
        raise ValueError("f must take values in {-1, +1}")
    best, d, n = _discrepancy(values.astype(np.int64), N)
    return DiscrepancyResult(N, int(best), int(d), int(n))
