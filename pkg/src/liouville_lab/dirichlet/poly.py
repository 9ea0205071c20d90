"""Finite Dirichlet polynomials A(y) = sum_n a(n) n^{iy} and fast evaluation."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numba
import numpy as np

from ..sieve import sieve_segment

__all__ = ["DirichletPolynomial", "evaluate", "evaluate_many", "evaluate_grid"]


@dataclass
class DirichletPolynomial:
    """Coefficients ``coeffs[i] = a(support_lo + i)``; zero outside the support."""

    support_lo: int
    support_hi: int
    coeffs: np.ndarray
    tag: str = "raw"

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if self.support_lo < 1 or self.support_hi < self.support_lo:
            raise ValueError(f"bad support [{self.support_lo}, {self.support_hi}]")
        if self.coeffs.size != self.support_hi - self.support_lo + 1:
            raise ValueError("coefficient array does not match the support")

    @classmethod
    def from_mapping(cls, coeffs: Mapping[int, complex], tag: str = "raw") -> "DirichletPolynomial":
        if not coeffs:
            return cls(1, 1, np.zeros(1), tag)
        lo, hi = min(coeffs), max(coeffs)
        arr = np.zeros(hi - lo + 1, dtype=np.complex128)
        for n, v in coeffs.items():
            arr[n - lo] = v
        return cls(lo, hi, arr, tag)

    @classmethod
    def liouville(cls, lo: int, hi: int) -> "DirichletPolynomial":
        return cls(lo, hi, sieve_segment(lo, hi).liouville, "raw")

    @classmethod
    def on_primes(cls, P: int, values=1.0) -> "DirichletPolynomial":
        """a(p) = values (scalar or one per prime <= P), zero at composites."""
        tab = sieve_segment(1, P)
        arr = np.zeros(P, dtype=np.complex128)
        mask = tab.is_prime
        arr[mask] = values
        return cls(1, P, arr, "prime-restricted")

    @classmethod
    def random_unit(cls, N: int, rng: np.random.Generator) -> "DirichletPolynomial":
        return cls(1, N, np.exp(2j * np.pi * rng.random(N)), "raw")

    @classmethod
    def read_csv(cls, path: str | Path) -> "DirichletPolynomial":
        coeffs: dict[int, complex] = {}
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                coeffs[int(row["n"])] = complex(float(row["re"]), float(row.get("im") or 0.0))
        return cls.from_mapping(coeffs)

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "re", "im"])
            for n, a in zip(self.n, self.coeffs):
                if a != 0:
                    w.writerow([int(n), repr(float(a.real)), repr(float(a.imag))])

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.support_lo, self.support_hi + 1, dtype=np.int64)

    def __getitem__(self, n: int) -> complex:
        if self.support_lo <= n <= self.support_hi:
            return complex(self.coeffs[n - self.support_lo])
        return 0j

    def nonzero(self) -> tuple[np.ndarray, np.ndarray]:
        idx = np.nonzero(self.coeffs)[0]
        return self.support_lo + idx, self.coeffs[idx]

    @property
    def l2_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    @property
    def l1(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def log_span(self) -> float:
        """log(max n / min n) over the nonzero coefficients."""
        n, _ = self.nonzero()
        return math.log(n[-1] / n[0]) if n.size else 0.0

    def __call__(self, y):
        return evaluate(self, y)


@numba.njit(nogil=True, cache=True)
def _eval_points(logn, a, ys, out):
    for k in range(ys.size):
        y = ys[k]
        sr = 0.0
        si = 0.0
        cr = 0.0
        ci = 0.0
        for j in range(logn.size):
            ph = y * logn[j]
            c = math.cos(ph)
            s = math.sin(ph)
            tr = a[j].real * c - a[j].imag * s
            ti = a[j].real * s + a[j].imag * c
            # Kahan on both parts
            yr = tr - cr
            t = sr + yr
            cr = (t - sr) - yr
            sr = t
            yi = ti - ci
            t = si + yi
            ci = (t - si) - yi
            si = t
        out[k] = complex(sr, si)


@numba.njit(nogil=True, cache=True)
def _eval_uniform(logn, a, y0, dy, count, out):
    # z_j tracks a_j n_j^{iy}; advanced by the fixed rotation n_j^{i dy}
    m = logn.size
    z = np.empty(m, dtype=np.complex128)
    w = np.empty(m, dtype=np.complex128)
    for j in range(m):
        w[j] = complex(math.cos(dy * logn[j]), math.sin(dy * logn[j]))
    for k in range(count):
        if k % 256 == 0:  # reseed exact phases to stop drift
            y = y0 + k * dy
            for j in range(m):
                ph = y * logn[j]
                z[j] = a[j] * complex(math.cos(ph), math.sin(ph))
        s = 0j
        for j in range(m):
            s += z[j]
            z[j] *= w[j]
        out[k] = s


def _terms(poly: DirichletPolynomial) -> tuple[np.ndarray, np.ndarray]:
    n, a = poly.nonzero()
    return np.log(n.astype(np.float64)), np.ascontiguousarray(a)


def evaluate(poly: DirichletPolynomial, y: float) -> complex:
    """A(y) at a single frequency, summed with exact rounding."""
    n, a = poly.nonzero()
    if n.size == 0:
        return 0j
    terms = a * np.exp(1j * y * np.log(n.astype(np.float64)))
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def evaluate_many(poly: DirichletPolynomial, ys) -> np.ndarray:
    ys = np.ascontiguousarray(np.asarray(ys, dtype=np.float64).ravel())
    out = np.zeros(ys.size, dtype=np.complex128)
    logn, a = _terms(poly)
    if logn.size:
        _eval_points(logn, a, ys, out)
    return out


def evaluate_grid(poly: DirichletPolynomial, y0: float, dy: float, count: int) -> np.ndarray:
    """A(y0 + k dy) for k = 0..count-1 by phase recurrence."""
    out = np.zeros(int(count), dtype=np.complex128)
    logn, a = _terms(poly)
    if logn.size and count:
        _eval_uniform(logn, a, float(y0), float(dy), int(count), out)
    return out
