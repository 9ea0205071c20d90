"""Segmented factor sieve producing exact arithmetic-function tables.

Every other module reads its data from :class:`FactorTable`, which carries
Omega(n) (prime factors counted with multiplicity) and a flag byte per
integer of a contiguous range ``[lo, hi]``.  Liouville, Moebius and von
Mangoldt values are derived from those two arrays on demand.

The sieve works on cache-sized blocks.  For each prime power ``p^k`` up to
``hi`` it bumps Omega and multiplies a running product for every multiple of
``p^k`` in the block; whatever is left after dividing ``n`` by that product
is a single prime above ``sqrt(hi)``.  No probabilistic primality testing is
involved anywhere.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional

import numba
import numpy as np

__all__ = [
    "FLAG_SQUAREFREE",
    "FLAG_PRIME_POWER",
    "FLAG_PRIME",
    "DEFAULT_SEGMENT_BUDGET",
    "SieveError",
    "RangeInvertedError",
    "SegmentTooLargeError",
    "FactorTable",
    "PrimeList",
    "small_primes",
    "sieve_segment",
    "iter_segments",
    "mertens_lambda",
    "primes_in",
    "prime_pi",
    "write_cache",
    "read_cache",
]

FLAG_SQUAREFREE = 1
FLAG_PRIME_POWER = 2
FLAG_PRIME = 4

DEFAULT_SEGMENT_BUDGET = 1 << 26
CACHE_VERSION = 1
HARD_CAP = (1 << 63) - 1

_BLOCK = 1 << 18


class SieveError(ValueError):
    pass


class RangeInvertedError(SieveError):
    pass


class SegmentTooLargeError(SieveError):
    pass


@dataclass
class FactorTable:
    """Arithmetic data for every integer in ``[lo, hi]``.

    ``omega_total[i]`` and ``flags[i]`` describe ``n = lo + i``.  ``lpf`` (the
    largest prime factor, 1 for n=1) is only present when requested.
    """

    lo: int
    hi: int
    omega_total: np.ndarray
    flags: np.ndarray
    lpf: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def index(self, n: int) -> int:
        if n not in self:
            raise IndexError(f"{n} outside table range [{self.lo}, {self.hi}]")
        return n - self.lo

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1, dtype=np.int64)

    @property
    def liouville(self) -> np.ndarray:
        return (1 - 2 * (self.omega_total & 1)).astype(np.int8)

    @property
    def mobius(self) -> np.ndarray:
        return self.liouville * (self.flags & FLAG_SQUAREFREE).astype(np.int8)

    @property
    def squarefree(self) -> np.ndarray:
        return (self.flags & FLAG_SQUAREFREE) != 0

    @property
    def is_prime(self) -> np.ndarray:
        return (self.flags & FLAG_PRIME) != 0

    @property
    def is_prime_power(self) -> np.ndarray:
        return (self.flags & FLAG_PRIME_POWER) != 0

    def mangoldt(self) -> np.ndarray:
        """Lambda(n) = log p at n = p^k, else 0 (float64)."""
        out = np.zeros(len(self), dtype=np.float64)
        idx = np.nonzero(self.is_prime_power)[0]
        if idx.size == 0:
            return out
        if self.lpf is not None:
            p = self.lpf[idx].astype(np.float64)
        else:
            n = (self.lo + idx).astype(np.float64)
            k = self.omega_total[idx].astype(np.float64)
            p = np.rint(n ** (1.0 / k))
        out[idx] = np.log(p)
        return out

    def slice(self, lo: int, hi: int) -> "FactorTable":
        """Sub-table for ``[lo, hi]`` sharing memory with this one."""
        if lo > hi:
            raise RangeInvertedError(f"lo={lo} > hi={hi}")
        a, b = self.index(lo), self.index(hi) + 1
        return FactorTable(
            lo,
            hi,
            self.omega_total[a:b],
            self.flags[a:b],
            None if self.lpf is None else self.lpf[a:b],
        )

    @staticmethod
    def concat(tables: list["FactorTable"]) -> "FactorTable":
        for left, right in zip(tables, tables[1:]):
            if right.lo != left.hi + 1:
                raise SieveError("tables are not contiguous")
        with_lpf = all(t.lpf is not None for t in tables)
        return FactorTable(
            tables[0].lo,
            tables[-1].hi,
            np.concatenate([t.omega_total for t in tables]),
            np.concatenate([t.flags for t in tables]),
            np.concatenate([t.lpf for t in tables]) if with_lpf else None,
        )


@dataclass
class PrimeList:
    lo: int
    hi: int
    primes: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return int(self.primes.size)

    def __iter__(self):
        return iter(self.primes.tolist())


def small_primes(limit: int) -> np.ndarray:
    """All primes <= limit by a plain Eratosthenes sieve."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mark = np.ones(limit + 1, dtype=bool)
    mark[:2] = False
    mark[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if mark[p]:
            mark[p * p :: 2 * p] = False
    return np.nonzero(mark)[0].astype(np.int64)


@numba.njit(nogil=True, cache=True)
def _factor_block(lo, hi, primes, omega, flags, lpf, want_lpf):
    # omega/flags/lpf are views of length hi-lo+1, filled in place.
    size = hi - lo + 1
    prod = np.ones(size, dtype=np.int64)
    distinct = np.zeros(size, dtype=np.uint8)
    for i in range(size):
        omega[i] = 0
        flags[i] = 1
        if want_lpf:
            lpf[i] = 1
    for pi in range(primes.size):
        p = primes[pi]
        if p * p > hi:
            break
        pk = p
        k = 1
        while pk <= hi:
            start = ((lo + pk - 1) // pk) * pk
            for j in range(start - lo, size, pk):
                omega[j] += 1
                prod[j] *= p
                if k == 1:
                    distinct[j] += 1
                    if want_lpf:
                        lpf[j] = p
                elif k == 2:
                    flags[j] = 0
            if pk > hi // p:
                break
            pk *= p
            k += 1
    for i in range(size):
        n = lo + i
        if prod[i] != n:
            # n / prod is a single prime above sqrt(hi)
            omega[i] += 1
            distinct[i] += 1
            if want_lpf:
                lpf[i] = n // prod[i]
        f = flags[i]
        if distinct[i] == 1:
            f |= 2
            if omega[i] == 1:
                f |= 4
        flags[i] = f


_prime_cache: dict[int, np.ndarray] = {}


def _base_primes(hi: int) -> np.ndarray:
    limit = math.isqrt(hi) + 1
    for have, arr in _prime_cache.items():
        if have >= limit:
            return arr
    # round up so nearby calls share a single sieve
    limit = max(limit, 1 << 16)
    arr = small_primes(limit)
    _prime_cache.clear()
    _prime_cache[limit] = arr
    return arr


def _check_range(lo: int, hi: int) -> None:
    if lo > hi:
        raise RangeInvertedError(f"lo={lo} > hi={hi}")
    if lo < 1:
        raise SieveError(f"lo must be >= 1, got {lo}")
    if hi > HARD_CAP // 2:
        raise SieveError(f"hi={hi} beyond practical cap")


def sieve_segment(
    lo: int,
    hi: int,
    *,
    with_lpf: bool = False,
    budget: int = DEFAULT_SEGMENT_BUDGET,
    threads: int = 1,
) -> FactorTable:
    """Exact factor table for ``[lo, hi]``.

    Raises:
        RangeInvertedError: ``lo > hi``.
        SegmentTooLargeError: the range holds more than ``budget`` integers.
    """
    lo, hi = int(lo), int(hi)
    _check_range(lo, hi)
    size = hi - lo + 1
    if size > budget:
        raise SegmentTooLargeError(f"{size} integers exceeds segment budget {budget}")
    primes = _base_primes(hi)
    omega = np.empty(size, dtype=np.uint8)
    flags = np.empty(size, dtype=np.uint8)
    lpf = np.empty(size if with_lpf else 1, dtype=np.int64)

    def run(a: int) -> None:
        b = min(a + _BLOCK, size)
        _factor_block(
            lo + a,
            lo + b - 1,
            primes,
            omega[a:b],
            flags[a:b],
            lpf[a:b] if with_lpf else lpf,
            with_lpf,
        )

    starts = range(0, size, _BLOCK)
    if threads > 1 and size > _BLOCK:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, starts))
    else:
        for a in starts:
            run(a)
    return FactorTable(lo, hi, omega, flags, lpf if with_lpf else None)


def iter_segments(
    lo: int,
    hi: int,
    *,
    segment: int = 1 << 22,
    overlap: int = 0,
    with_lpf: bool = False,
    threads: int = 1,
) -> Iterator[FactorTable]:
    """Stream ``[lo, hi]`` as consecutive tables of ``segment`` integers.

    Each table is extended by ``overlap`` integers past its nominal end (and
    past ``hi``) so window statistics can read ``n + shift`` without stitching.
    """
    _check_range(lo, hi)
    a = lo
    while a <= hi:
        b = min(a + segment - 1, hi)
        yield sieve_segment(
            a, b + overlap, with_lpf=with_lpf, budget=segment + overlap, threads=threads
        )
        a = b + 1


def mertens_lambda(x: int, *, segment: int = 1 << 22, threads: int = 1) -> int:
    """L(x): the sum of Liouville's function over 1..x, streamed by segment."""
    if x < 1:
        raise SieveError(f"x must be >= 1, got {x}")
    total = 0
    for tab in iter_segments(1, x, segment=segment, threads=threads):
        total += len(tab) - 2 * int(np.count_nonzero(tab.omega_total & 1))
    return total


def primes_in(lo: int, hi: int, *, threads: int = 1) -> PrimeList:
    if lo > hi:
        raise RangeInvertedError(f"lo={lo} > hi={hi}")
    chunks = []
    for tab in iter_segments(max(lo, 1), hi, threads=threads):
        chunks.append(tab.lo + np.nonzero(tab.is_prime)[0])
    primes = np.concatenate(chunks).astype(np.int64) if chunks else np.zeros(0, np.int64)
    return PrimeList(lo, hi, primes)


def prime_pi(x: int) -> int:
    if x < 2:
        return 0
    return len(primes_in(2, x))


def write_cache(table: FactorTable, path: str | Path) -> Path:
    """Write the binary record file plus its JSON sidecar.

    Records are two little-endian bytes per integer (Omega, flags), ``n``
    implied by offset from ``lo``.
    """
    path = Path(path)
    rec = np.empty((len(table), 2), dtype="<u1")
    rec[:, 0] = table.omega_total
    rec[:, 1] = table.flags
    path.write_bytes(rec.tobytes())
    sidecar = {
        "lo": table.lo,
        "hi": table.hi,
        "version": CACHE_VERSION,
        "record": ["omega:u8", "flags:u8"],
        "flags": {"squarefree": FLAG_SQUAREFREE, "prime_power": FLAG_PRIME_POWER, "prime": FLAG_PRIME},
    }
    side = path.with_name(path.name + ".json")
    side.write_text(json.dumps(sidecar, indent=2))
    return side


def read_cache(path: str | Path) -> FactorTable:
    path = Path(path)
    meta = json.loads(path.with_name(path.name + ".json").read_text())
    if meta.get("version") != CACHE_VERSION:
        raise SieveError(f"unsupported cache version {meta.get('version')}")
    rec = np.frombuffer(path.read_bytes(), dtype="<u1").reshape(-1, 2)
    if rec.shape[0] != meta["hi"] - meta["lo"] + 1:
        raise SieveError("cache length does not match sidecar range")
    return FactorTable(meta["lo"], meta["hi"], rec[:, 0].copy(), rec[:, 1].copy())
