"""Short-interval sums S(x, h) of Liouville / von Mangoldt weights.

S(x, h) sums a weight over ``x < n <= x + h``.  A scan over integer ``x`` in
``[X, 2X)`` is used in place of the integral over real x.  Because S is a
step function that only jumps at integers, the unit-stride sum equals that
integral exactly when h is an integer.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numba
import numpy as np

from .sieve import FactorTable, sieve_segment

__all__ = [
    "WEIGHTS",
    "HIST_EDGES",
    "IntervalSumStats",
    "interval_sum",
    "weights_for",
    "moving_sum_scan",
    "variance_scan",
]

WEIGHTS = ("lambda", "mangoldt")

HIST_WIDTH = 0.25
HIST_RANGE = 6.0
# interior edges; the two outer bins collect overflow
HIST_EDGES = np.arange(-HIST_RANGE, HIST_RANGE + HIST_WIDTH / 2, HIST_WIDTH)

_CHUNK = 1 << 20


def weights_for(table: FactorTable, weight: str) -> np.ndarray:
    if weight == "lambda":
        return table.liouville.astype(np.int64)
    if weight == "mangoldt":
        return table.mangoldt()
    raise ValueError(f"unknown weight {weight!r}; expected one of {WEIGHTS}")


def interval_sum(table: FactorTable, x: int, h: int, weight: str = "lambda") -> float:
    """Exact sum of the weight over ``x < n <= x + h``."""
    if h < 1:
        raise ValueError("h must be >= 1")
    if x + 1 < table.lo or x + h > table.hi:
        raise IndexError(f"[{x + 1}, {x + h}] outside table range [{table.lo}, {table.hi}]")
    sub = table.slice(x + 1, x + h)
    w = weights_for(sub, weight)
    if weight == "lambda":
        return int(w.sum())
    return float(np.sum(w))


@numba.njit(nogil=True, cache=True)
def _sliding(w, h, count, out):
    # out[i] = sum(w[i : i + h]); exact for integer w
    s = w[:h].sum()
    out[0] = s
    for i in range(1, count):
        s += w[i + h - 1] - w[i - 1]
        out[i] = s


def _window_sums(w: np.ndarray, h: int, count: int) -> np.ndarray:
    out = np.empty(count, dtype=w.dtype)
    _sliding(w, h, count, out)
    return out


def moving_sum_scan(
    X: int, h: int, weight: str = "lambda", *, chunk: int = _CHUNK
) -> Iterator[np.ndarray]:
    """Yield S(x, h) for x = X, X+1, ..., 2X-1 in consecutive chunks.

    Each chunk re-primes its window from fresh sieve data, so chunks are
    independent of one another.
    """
    _check_scan(X, h, 1)
    x = X
    while x < 2 * X:
        count = min(chunk, 2 * X - x)
        tab = sieve_segment(x + 1, x + count - 1 + h)
        yield _window_sums(weights_for(tab, weight), h, count)
        x += count


@dataclass
class IntervalSumStats:
    X: int
    h: int
    step: int
    weight: str = "lambda"
    count: int = 0
    sum_sq: float = 0
    max_abs: float = 0
    thresholds: tuple = ()
    exceptional_counts: dict = field(default_factory=dict)
    histogram: np.ndarray = field(default_factory=lambda: np.zeros(HIST_EDGES.size + 1, np.int64))

    @property
    def mean_sq(self) -> float:
        return float(self.sum_sq) / self.count if self.count else 0.0

    @property
    def normalized_variance(self) -> float:
        return self.mean_sq / self.h**2

    def merge(self, other: "IntervalSumStats") -> "IntervalSumStats":
        return IntervalSumStats(
            self.X,
            self.h,
            self.step,
            self.weight,
            self.count + other.count,
            self.sum_sq + other.sum_sq,
            max(self.max_abs, other.max_abs),
            self.thresholds,
            {e: self.exceptional_counts[e] + other.exceptional_counts[e] for e in self.thresholds},
            self.histogram + other.histogram,
        )

    def row(self) -> dict:
        out = {
            "x_start": self.X,
            "h": self.h,
            "count": self.count,
            "mean_sq": self.mean_sq,
            "normalized_variance": self.normalized_variance,
            "max_abs": float(self.max_abs),
        }
        for eps in self.thresholds:
            out[f"exc_{eps:g}"] = self.exceptional_counts[eps]
        return out

    def to_dict(self) -> dict:
        out = self.row()
        out.update(step=self.step, weight=self.weight)
        out["histogram"] = {
            "bin_width": HIST_WIDTH,
            "range": [-HIST_RANGE, HIST_RANGE],
            "counts": self.histogram.tolist(),
        }
        return out


def _check_scan(X: int, h: int, step: int) -> None:
    if h < 1:
        raise ValueError("h must be >= 1")
    if step < 1:
        raise ValueError("step must be >= 1")
    if h >= X:
        raise ValueError(f"h={h} must be smaller than X={X}")


def _partial_stats(X, h, step, weight, thresholds, x0, x1) -> IntervalSumStats:
    # x0 is aligned to the stride; x1 exclusive
    tab = sieve_segment(x0 + 1, x1 - 1 + h)
    w = weights_for(tab, weight)
    s = _window_sums(w, h, x1 - x0)[::step]
    if weight == "mangoldt":
        s = s - h
        sum_sq = float(np.dot(s, s))
    else:
        s = s.astype(np.int64)
        sum_sq = int(np.dot(s, s))
    a = np.abs(s)
    hist = np.bincount(
        np.searchsorted(HIST_EDGES, s / np.sqrt(h), side="right"),
        minlength=HIST_EDGES.size + 1,
    )
    return IntervalSumStats(
        X,
        h,
        step,
        weight,
        int(s.size),
        sum_sq,
        a.max() if a.size else 0,
        tuple(thresholds),
        {e: int(np.count_nonzero(a > e * h)) for e in thresholds},
        hist,
    )


def variance_scan(
    X: int,
    h: int,
    step: int = 1,
    weight: str = "lambda",
    thresholds: Sequence[float] = (),
    *,
    threads: int = 1,
    chunk: int = 1 << 22,
) -> IntervalSumStats:
    """Mean of S(x,h)^2 over x in [X, 2X) at the given stride.

    For the von Mangoldt weight the centred sum S - h is used.  Partial
    statistics over fixed x-chunks are merged in chunk order, so the result
    does not depend on ``threads``.
    """
    _check_scan(X, h, step)
    if weight not in WEIGHTS:
        raise ValueError(f"unknown weight {weight!r}")
    thresholds = tuple(sorted(float(e) for e in thresholds))
    chunk = max(step, chunk - chunk % step)
    bounds = [(x, min(x + chunk, 2 * X)) for x in range(X, 2 * X, chunk)]

    def run(b):
        return _partial_stats(X, h, step, weight, thresholds, *b)

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    stats = parts[0]
    for p in parts[1:]:
        stats = stats.merge(p)
    return stats
