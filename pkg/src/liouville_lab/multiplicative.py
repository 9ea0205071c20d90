"""Bounded real multiplicative functions: tabulation, mean values, sign changes.

A :class:`MultiplicativeFunctionSpec` gives f at primes (and, for plain
multiplicative functions, at higher prime powers).  Tabulation walks the
same block sieve as :mod:`liouville_lab.sieve`, multiplying in f(p^k) for
each exact prime power dividing n.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numba
import numpy as np

from .sieve import FactorTable, _base_primes, primes_in, sieve_segment

__all__ = [
    "MissingPrimePowerRule",
    "MultiplicativeFunctionSpec",
    "WirsingReport",
    "tabulate",
    "pretentious_distance",
    "wirsing_mean",
    "short_vs_long",
    "sign_changes",
    "smooth_in_interval",
    "smooth_offsets",
]

COMPLETELY = "completely_multiplicative"
MULTIPLICATIVE = "multiplicative"

_SERIES_CUTOFF = 1e-15


class MissingPrimePowerRule(ValueError):
    pass


@dataclass
class MultiplicativeFunctionSpec:
    """f with f(1) = 1 and |f| <= 1, fixed by its values at prime powers.

    ``prime_rule(p)`` gives f(p).  For completely multiplicative kinds
    f(p^k) = f(p)^k; otherwise ``prime_power_rule(p, k)`` must cover k >= 2.
    ``builtin`` names a fast path ("lambda", "mu", "mu2", "one", "smooth").
    """

    kind: str
    prime_rule: Callable[[int], float]
    prime_power_rule: Optional[Callable[[int, int], float]] = None
    name: str = "custom"
    builtin: Optional[str] = None
    smooth_bound: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (COMPLETELY, MULTIPLICATIVE):
            raise ValueError(f"unknown kind {self.kind!r}")

    @classmethod
    def liouville(cls) -> "MultiplicativeFunctionSpec":
        return cls(COMPLETELY, lambda p: -1.0, name="lambda", builtin="lambda")

    @classmethod
    def mobius(cls) -> "MultiplicativeFunctionSpec":
        return cls(MULTIPLICATIVE, lambda p: -1.0, lambda p, k: 0.0, name="mu", builtin="mu")

    @classmethod
    def mobius_squared(cls) -> "MultiplicativeFunctionSpec":
        return cls(MULTIPLICATIVE, lambda p: 1.0, lambda p, k: 0.0, name="mu2", builtin="mu2")

    @classmethod
    def one(cls) -> "MultiplicativeFunctionSpec":
        return cls(COMPLETELY, lambda p: 1.0, name="one", builtin="one")

    @classmethod
    def smooth_indicator(cls, y: float) -> "MultiplicativeFunctionSpec":
        """1 on integers whose prime factors are all <= y."""
        return cls(
            COMPLETELY,
            lambda p: 1.0 if p <= y else 0.0,
            name=f"smooth:{y:g}",
            builtin="smooth",
            smooth_bound=float(y),
        )

    @classmethod
    def named(cls, name: str) -> "MultiplicativeFunctionSpec":
        if name.startswith("smooth:"):
            return cls.smooth_indicator(float(name.split(":", 1)[1]))
        table = {"lambda": cls.liouville, "mu": cls.mobius, "mu2": cls.mobius_squared, "one": cls.one}
        if name not in table:
            raise ValueError(f"unknown function {name!r}; expected one of {sorted(table)} or smooth:<y>")
        return table[name]()

    @classmethod
    def from_dict(cls, data: dict) -> "MultiplicativeFunctionSpec":
        """Build from the JSON spec format.

        ``{"kind": ..., "rule": "<named rule>"}`` or
        ``{"kind": ..., "primes": [[p, value], ...], "default": v,
           "prime_powers": [[p, k, value], ...]}``.
        Primes missing from "primes" take "default"; prime powers missing from
        "prime_powers" take "prime_power_default" when given.
        """
        if "rule" in data:
            return cls.named(data["rule"])
        kind = data.get("kind", COMPLETELY)
        primes = {int(p): float(v) for p, v in data.get("primes", [])}
        default = data.get("default")
        powers = {(int(p), int(k)): float(v) for p, k, v in data.get("prime_powers", [])}
        pp_default = data.get("prime_power_default")

        def prime_rule(p: int) -> float:
            if p in primes:
                return primes[p]
            if default is None:
                raise MissingPrimePowerRule(f"no value for prime {p} and no default")
            return float(default)

        power_rule = None
        if kind == MULTIPLICATIVE:

            def power_rule(p: int, k: int) -> float:
                if (p, k) in powers:
                    return powers[(p, k)]
                if pp_default is None:
                    raise MissingPrimePowerRule(f"no value for {p}^{k}")
                return float(pp_default)

        return cls(kind, prime_rule, power_rule, name=data.get("name", "custom"))

    @classmethod
    def from_json(cls, path: str | Path) -> "MultiplicativeFunctionSpec":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def at_prime(self, p: int) -> float:
        v = float(self.prime_rule(int(p)))
        if abs(v) > 1:
            raise ValueError(f"|f({p})| = {abs(v)} exceeds 1")
        return v

    def at_prime_power(self, p: int, k: int) -> float:
        if k == 0:
            return 1.0
        if k == 1:
            return self.at_prime(p)
        if self.kind == COMPLETELY:
            return self.at_prime(p) ** k
        if self.prime_power_rule is None:
            raise MissingPrimePowerRule(f"multiplicative spec needs f({p}^{k})")
        v = float(self.prime_power_rule(int(p), int(k)))
        if abs(v) > 1:
            raise ValueError(f"|f({p}^{k})| = {abs(v)} exceeds 1")
        return v


@numba.njit(nogil=True, cache=True)
def _mult_block(lo, hi, primes, fpk, out):
    # fpk[i, k] = f(p_i^k); leaves the unfactored remainder (1 or a large prime)
    size = hi - lo + 1
    rem = np.empty(size, dtype=np.int64)
    for i in range(size):
        rem[i] = lo + i
        out[i] = 1.0
    for pi in range(primes.size):
        p = primes[pi]
        if p * p > hi:
            break
        start = ((lo + p - 1) // p) * p
        for j in range(start - lo, size, p):
            k = 0
            r = rem[j]
            while r % p == 0:
                r //= p
                k += 1
            rem[j] = r
            out[j] *= fpk[pi, k]
    return rem


def _tabulate_general(spec: MultiplicativeFunctionSpec, lo: int, hi: int) -> np.ndarray:
    primes = _base_primes(hi)
    small = primes[primes * primes <= hi]
    kmax = max(1, int(math.log(hi, 2)) + 1)
    fpk = np.zeros((small.size, kmax + 1))
    for i, p in enumerate(small.tolist()):
        pk = 1
        for k in range(kmax + 1):
            if pk > hi:
                break
            fpk[i, k] = spec.at_prime_power(p, k)
            pk *= p
    out = np.empty(hi - lo + 1)
    rem = _mult_block(lo, hi, small, fpk, out)
    big = rem > 1
    if np.any(big):
        q, inv = np.unique(rem[big], return_inverse=True)
        fq = np.array([spec.at_prime(int(v)) for v in q.tolist()])
        out[big] *= fq[inv]
    return out


def tabulate(spec: MultiplicativeFunctionSpec, lo: int, hi: int, table: FactorTable | None = None) -> np.ndarray:
    """f(n) for n in [lo, hi] as float64."""
    b = spec.builtin
    if b is not None and b != "one":
        if table is None or table.lo != lo or table.hi != hi or (b == "smooth" and table.lpf is None):
            table = sieve_segment(lo, hi, with_lpf=b == "smooth", budget=max(hi - lo + 1, 1))
        if b == "lambda":
            return table.liouville.astype(np.float64)
        if b == "mu":
            return table.mobius.astype(np.float64)
        if b == "mu2":
            return table.squarefree.astype(np.float64)
        if b == "smooth":
            return (table.lpf <= spec.smooth_bound).astype(np.float64)
    if b == "one":
        return np.ones(hi - lo + 1)
    out = np.empty(hi - lo + 1)
    block = 1 << 20
    for a in range(lo, hi + 1, block):
        z = min(a + block - 1, hi)
        out[a - lo : z - lo + 1] = _tabulate_general(spec, a, z)
    return out


def _iter_values(spec, lo, hi, segment=1 << 22):
    a = lo
    while a <= hi:
        b = min(a + segment - 1, hi)
        yield a, tabulate(spec, a, b)
        a = b + 1


def pretentious_distance(spec: MultiplicativeFunctionSpec, X: int) -> float:
    """Sum over primes p <= X of (1 - f(p)) / p."""
    if X < 2:
        raise ValueError("X must be >= 2")
    primes = primes_in(2, X).primes.tolist()
    return math.fsum((1 - spec.at_prime(p)) / p for p in primes)


@dataclass
class WirsingReport:
    N: int
    prime_cutoff: int
    partial_product: float
    empirical_mean: float
    alpha: float
    beta: float
    distance: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _euler_factor(spec: MultiplicativeFunctionSpec, p: int) -> float:
    if spec.kind == COMPLETELY:
        return (1 - 1 / p) / (1 - spec.at_prime(p) / p)
    terms = [1.0]
    k = 1
    while p ** -k >= _SERIES_CUTOFF:
        terms.append(spec.at_prime_power(p, k) / p**k)
        k += 1
    return (1 - 1 / p) * math.fsum(terms)


def wirsing_mean(spec: MultiplicativeFunctionSpec, N: int, prime_cutoff: int) -> WirsingReport:
    """Truncated Euler product next to the empirical mean of f over n <= N."""
    if N < 1 or prime_cutoff < 2:
        raise ValueError("need N >= 1 and prime_cutoff >= 2")
    primes = primes_in(2, prime_cutoff).primes.tolist()
    product = math.prod(_euler_factor(spec, p) for p in primes)
    total, total_abs = [], []
    for _, vals in _iter_values(spec, 1, N):
        total.append(math.fsum(vals))
        total_abs.append(math.fsum(np.abs(vals)))
    beta = math.fsum(total) / N
    alpha = math.fsum(total_abs) / N
    distance = math.fsum((1 - spec.at_prime(p)) / p for p in primes)
    return WirsingReport(N, prime_cutoff, product, beta, alpha, beta, distance)


@dataclass
class ShortLongResult:
    X: int
    h: int
    step: int
    eps: float
    long_mean: float
    count: int
    quantiles: dict
    mean_deviation: float
    exceptional_fraction: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def short_vs_long(spec: MultiplicativeFunctionSpec, X: int, h: int, step: int = 1, eps: float = 0.1) -> ShortLongResult:
    """|S_f(x, h) - (h/X) sum_{X<=n<=2X} f(n)| over x in [X, 2X) at the given stride."""
    if not X >= h >= 1:
        raise ValueError("need X >= h >= 1")
    if step < 1:
        raise ValueError("step must be >= 1")
    top = max(2 * X, 2 * X - 1 + h)
    vals = tabulate(spec, X, top)
    long_sum = math.fsum(vals[: X + 1])
    expected = h * long_sum / X
    csum = np.concatenate([[0.0], np.cumsum(vals)])
    x = np.arange(X, 2 * X, step)
    # S(x, h) covers n = x+1..x+h, i.e. offsets x+1-X .. x+h-X
    s = csum[x + h - X + 1] - csum[x - X + 1]
    dev = np.abs(s - expected)
    qs = {str(q): float(np.quantile(dev, q)) for q in (0.5, 0.9, 0.99, 1.0)}
    return ShortLongResult(
        X,
        h,
        step,
        eps,
        long_sum / X,
        int(x.size),
        qs,
        float(dev.mean()),
        float(np.count_nonzero(dev > eps * h)) / x.size,
    )


@dataclass
class SignChangeResult:
    N: int
    count: int
    proportion: float
    nonzero: int
    note: str = ""

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def sign_changes(spec: MultiplicativeFunctionSpec, N: int) -> SignChangeResult:
    """Adjacent pairs of nonzero values (in order of n) with opposite signs."""
    if N < 2:
        raise ValueError("N must be >= 2")
    count = 0
    nonzero = 0
    last = 0.0
    for _, vals in _iter_values(spec, 1, N):
        sg = np.sign(vals[vals != 0])
        if sg.size == 0:
            continue
        nonzero += sg.size
        count += int(np.count_nonzero(sg[1:] != sg[:-1]))
        if last and sg[0] != last:
            count += 1
        last = sg[-1]
    note = "" if nonzero else "f vanishes on [1, N]"
    return SignChangeResult(N, count, count / N, nonzero, note)


@dataclass
class SmoothResult:
    N: int
    eps_exponent: float
    C: float
    found: bool
    witness: Optional[int]

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def smooth_in_interval(N: int, eps_exponent: float, C: float) -> SmoothResult:
    """First n in [N, N + C sqrt(N)] whose largest prime factor is <= N^eps."""
    if N < 4 or not 0 < eps_exponent < 1 or C < 0:
        raise ValueError("need N >= 4, 0 < eps < 1, C >= 0")
    end = N + math.floor(C * math.sqrt(N))
    tab = sieve_segment(N, end, with_lpf=True)
    hits = np.nonzero(tab.lpf <= N**eps_exponent)[0]
    if hits.size:
        return SmoothResult(N, eps_exponent, C, True, int(N + hits[0]))
    return SmoothResult(N, eps_exponent, C, False, None)


def smooth_offsets(Ns, eps_exponent: float, C: float) -> np.ndarray:
    """Offset of the first N^eps-smooth integer after each N (-1 if none within C sqrt(N)).

    One lpf table covers all sampled N.
    """
    Ns = np.asarray(Ns, dtype=np.int64)
    lo = int(Ns.min())
    hi = int(Ns.max()) + math.floor(C * math.sqrt(int(Ns.max())))
    lpf = sieve_segment(lo, hi, with_lpf=True, budget=hi - lo + 1).lpf
    out = np.full(Ns.size, -1, dtype=np.int64)
    for i, N in enumerate(Ns.tolist()):
        end = N + math.floor(C * math.sqrt(N))
        window = lpf[N - lo : end - lo + 1]
        hits = np.nonzero(window <= N**eps_exponent)[0]
        if hits.size:
            out[i] = hits[0]
    return out
