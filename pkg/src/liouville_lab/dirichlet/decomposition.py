"""Weighted coefficient builders: Liouville's function times prime-factor counts.

A layer is a prime interval ``(lo, hi)`` cut into dyadic blocks
``[2^j lo, 2^{j+1} lo)``.  For layers with block starts P, Q, ... the product

    sum over blocks, sum over p in P_j, q in Q_k, ...,
        sum over X / (P_{j+1} Q_{k+1} ...) <= m <= 2X / (P_j Q_k ...)
        lambda(p) lambda(q) ... lambda(m) (p q ... m)^{iy}

has coefficient lambda(n) * omega_P(n) * omega_Q(n) * ... at every n in
[X, 2X].  With one layer the m-range is [X/P_{j+1}, 2X/P_j]; with three it is
[M/8, 2M] for M = X/(P_j P1_j1 Q_k), which is the same rule.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..sieve import primes_in, sieve_segment
from .poly import DirichletPolynomial

__all__ = [
    "PrimeBlockDecomposition",
    "parse_layers",
    "dyadic_blocks",
    "omega_in",
    "build_decomposition",
    "decomposition_mismatches",
    "turan_variance",
    "TuranResult",
    "restricted_factorization_error",
    "RestrictedFactorization",
]


def parse_layers(text: str) -> list[tuple[int, int]]:
    """``"2:10;100:1000"`` -> [(2, 10), (100, 1000)]."""
    layers = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        lo, hi = part.split(":")
        layers.append((int(lo), int(hi)))
    return layers


def dyadic_blocks(lo: int, hi: int) -> list[tuple[int, int, np.ndarray]]:
    """(P_j, P_{j+1}, primes in [P_j, P_{j+1}) clipped to [lo, hi]) for each block."""
    primes = primes_in(lo, hi).primes
    blocks = []
    j = 0
    while (lo << j) <= hi:
        a, b = lo << j, lo << (j + 1)
        blocks.append((a, b, primes[(primes >= a) & (primes < b)]))
        j += 1
    return blocks


def omega_in(n: np.ndarray, primes: Sequence[int]) -> np.ndarray:
    """Number of distinct primes from ``primes`` dividing each n."""
    n = np.asarray(n, dtype=np.int64)
    out = np.zeros(n.shape, dtype=np.int64)
    for p in primes:
        out += n % int(p) == 0
    return out


@dataclass
class PrimeBlockDecomposition:
    layers: list[tuple[int, int]]
    X: int
    dyadic_blocks: list[list[tuple[int, int, np.ndarray]]] = field(repr=False)
    W: list[float]

    @property
    def layer_primes(self) -> list[np.ndarray]:
        return [np.concatenate([b[2] for b in blocks]) if blocks else np.zeros(0, np.int64) for blocks in self.dyadic_blocks]

    def expected(self, n: np.ndarray, liouville: np.ndarray) -> np.ndarray:
        """lambda(n) * prod over layers of omega_layer(n)."""
        out = liouville.astype(np.int64)
        for primes in self.layer_primes:
            out = out * omega_in(n, primes)
        return out

    def as_dict(self) -> dict:
        return {
            "layers": [list(l) for l in self.layers],
            "X": self.X,
            "blocks": [[[a, b, int(ps.size)] for a, b, ps in blocks] for blocks in self.dyadic_blocks],
            "W": self.W,
        }


def _check_layers(layers: Sequence[tuple[int, int]], X: int) -> list[tuple[int, int]]:
    layers = [(int(a), int(b)) for a, b in layers]
    if not layers:
        raise ValueError("at least one layer is required")
    for a, b in layers:
        if a < 2 or b < a:
            raise ValueError(f"bad layer [{a}, {b}]")
    ordered = sorted(layers)
    for (a1, b1), (a2, b2) in zip(ordered, ordered[1:]):
        if a2 <= b1:
            raise ValueError(f"layers [{a1}, {b1}] and [{a2}, {b2}] overlap")
    if math.prod(a for a, _ in layers) >= X:
        raise ValueError("product of layer minima must be below X")
    return layers


def build_decomposition(layers: Sequence[tuple[int, int]], X: int) -> tuple[PrimeBlockDecomposition, DirichletPolynomial]:
    """Materialise the layered convolution coefficients by explicit enumeration."""
    layers = _check_layers(layers, X)
    L = len(layers)
    blocks = [dyadic_blocks(a, b) for a, b in layers]
    W = [math.fsum(1.0 / p for blk in bl for p in blk[2].tolist()) for bl in blocks]
    decomp = PrimeBlockDecomposition(layers, X, blocks, W)

    top = 2 * X * 2**L  # n < 2^{L+1} X
    lam = sieve_segment(1, top).liouville.astype(np.int64)
    coeffs = np.zeros(top + 1, dtype=np.int64)
    sign = (-1) ** L
    for choice in itertools.product(*[[b for b in bl if b[2].size] for bl in blocks]):
        starts = math.prod(c[0] for c in choice)
        ends = math.prod(c[1] for c in choice)
        m_lo = max(1, -(-X // ends))
        m_hi = (2 * X) // starts
        if m_hi < m_lo:
            continue
        m_vals = lam[m_lo - 1 : m_hi]
        for ps in itertools.product(*[c[2].tolist() for c in choice]):
            d = math.prod(ps)
            coeffs[d * m_lo : d * m_hi + 1 : d] += sign * m_vals
    nz = np.nonzero(coeffs)[0]
    if nz.size == 0:
        poly = DirichletPolynomial(1, 1, np.zeros(1), "decomposition")
    else:
        poly = DirichletPolynomial(int(nz[0]), int(nz[-1]), coeffs[nz[0] : nz[-1] + 1], "decomposition")
    return decomp, poly


def decomposition_mismatches(decomp: PrimeBlockDecomposition, poly: DirichletPolynomial) -> np.ndarray:
    """n in [X, 2X] where the coefficient differs from lambda(n) prod omega_layer(n)."""
    X = decomp.X
    n = np.arange(X, 2 * X + 1, dtype=np.int64)
    want = decomp.expected(n, sieve_segment(X, 2 * X).liouville)
    got = np.array([poly[int(k)] for k in n])
    if np.any(got.imag != 0):
        return n
    return n[got.real.astype(np.int64) != want]


@dataclass
class TuranResult:
    variance: float
    W: float
    ratio: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def turan_variance(layer: tuple[int, int] | None, X: int) -> TuranResult:
    """Sum over X <= n <= 2X of (omega_P(n) - W(P))^2, with ratio variance / (X W)."""
    if layer is None:
        return TuranResult(0.0, 0.0, 0.0)
    lo, hi = layer
    primes = primes_in(lo, hi).primes if hi >= lo else np.zeros(0, np.int64)
    if primes.size == 0:
        return TuranResult(0.0, 0.0, 0.0)
    if primes[-1] >= X:
        raise ValueError("layer primes must lie below X")
    W = math.fsum(1.0 / p for p in primes.tolist())
    om = omega_in(np.arange(X, 2 * X + 1), primes).astype(np.float64)
    var = math.fsum((om - W) ** 2)
    return TuranResult(var, W, var / (X * W))


@dataclass
class RestrictedFactorization:
    X: int
    layer: tuple[int, int]
    max_abs_error: float
    l1_error: float
    l1_exact: float
    support_matches: bool
    error_support_size: int
    support_of_error: str

    @property
    def relative_l1(self) -> float:
        return self.l1_error / self.l1_exact if self.l1_exact else 0.0

    def as_dict(self) -> dict:
        out = dict(self.__dict__)
        out["layer"] = list(self.layer)
        out["relative_l1"] = self.relative_l1
        return out


def restricted_factorization_error(layer: tuple[int, int], X: int, *, atol: float = 1e-9) -> RestrictedFactorization:
    """Coefficient-level gap between lambda(n) 1_S(n) and its (omega+1)-weighted factorisation.

    S is the set of n with a prime factor in the layer.  The weighted form
    gives lambda(n) * sum_{p | n} 1/(omega_P(n/p) + 1), which equals lambda(n)
    unless p^2 | n for some layer prime p.  The support of the gap is checked
    against exactly that set.
    """
    lo, hi = layer
    primes = primes_in(lo, hi).primes
    n = np.arange(X, 2 * X + 1, dtype=np.int64)
    lam = sieve_segment(1, 2 * X).liouville.astype(np.float64)
    om_n = omega_in(n, primes)
    exact = np.where(om_n > 0, lam[n - 1], 0.0)
    approx = np.zeros(n.size)
    for p in primes.tolist():
        m = np.arange(-(-X // p), (2 * X) // p + 1, dtype=np.int64)
        if m.size == 0:
            continue
        w = lam[m - 1] * lam[p - 1] / (omega_in(m, primes) + 1)
        approx[m * p - X] += w
    gap = exact - approx
    nonzero = np.abs(gap) > atol
    square = np.zeros(n.size, dtype=bool)
    for p in primes.tolist():
        square |= n % (p * p) == 0
    matches = bool(np.array_equal(nonzero, square))
    desc = (
        f"{int(nonzero.sum())} of {n.size} coefficients differ; "
        + ("exactly those divisible by p^2 for a layer prime p" if matches else "support differs from the p^2 | n set")
    )
    return RestrictedFactorization(
        X,
        (lo, hi),
        float(np.abs(gap).max()) if gap.size else 0.0,
        math.fsum(np.abs(gap)),
        math.fsum(np.abs(exact)),
        matches,
        int(nonzero.sum()),
        desc,
    )
