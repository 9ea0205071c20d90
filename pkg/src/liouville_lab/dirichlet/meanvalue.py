"""Numerical checks of mean-value identities and bounds for Dirichlet polynomials.

Left-hand sides that are integrals of piecewise-constant functions are
computed exactly by sweeping breakpoints.  Frequency integrals use either the
trapezoid rule on a uniform grid (exact for band-limited integrands once the
step is below 2*pi/bandwidth) or composite Gauss-Legendre panels.  Every
bound with an unspecified implied constant is reported as a ratio; nothing
here asserts the asymptotic bound itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from ..sieve import iter_segments, prime_pi, sieve_segment
from .poly import DirichletPolynomial, _eval_points, evaluate_grid, evaluate_many

__all__ = [
    "QuadratureParams",
    "QuadratureError",
    "PlancherelResult",
    "plancherel_lhs",
    "plancherel_check",
    "saffari_vaughan_ratio",
    "mean_value_integral",
    "mean_value_ratio",
    "ExceptionalSet",
    "large_values_measure",
    "halasz_montgomery_ratio",
    "twisted_sum_profile",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


class QuadratureError(RuntimeError):
    pass


@dataclass
class QuadratureParams:
    """Frequency-integral controls.

    ``y_max`` truncates infinite integrals (None picks a per-check default);
    ``rtol`` is the tolerance the Richardson estimate is checked against.
    """

    y_max: float | None = None
    step: float | None = None
    rtol: float = 1e-6


def _gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, width: float) -> float:
    if b <= a:
        return 0.0
    panels = max(1, int(math.ceil((b - a) / width)))
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    y = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return float(math.fsum(w * f(y)))


def _panel_width(poly: DirichletPolynomial, cap: float = 2.0) -> float:
    # |A(y)|^2 oscillates with frequencies up to log(max n / min n): one period per panel
    span = poly.log_span()
    return min(cap, 2 * math.pi / span) if span > 0 else cap


def _sweep(starts: np.ndarray, ends: np.ndarray, coeffs: np.ndarray) -> float:
    """Integral of |sum of active coefficients|^2, coefficient j active on [starts_j, ends_j)."""
    pos = np.concatenate([starts, ends])
    delta = np.concatenate([coeffs, -coeffs])
    order = np.lexsort((np.arange(pos.size), pos))
    pos, delta = pos[order], delta[order]
    running = np.cumsum(delta)
    gaps = np.diff(pos)
    vals = np.abs(running[:-1]) ** 2
    return float(math.fsum(vals * gaps))


def plancherel_lhs(poly: DirichletPolynomial, T: float) -> float:
    """Integral over x > 0 of |sum_{x e^{-1/T} < n <= x e^{1/T}} a(n)|^2 dx/x, exactly.

    In u = log x the integrand is piecewise constant: a(n) is active for
    ``log n - 1/T <= u < log n + 1/T``.
    """
    n, a = poly.nonzero()
    if n.size == 0:
        return 0.0
    logn = np.log(n.astype(np.float64))
    return _sweep(logn - 1.0 / T, logn + 1.0 / T, a)


def _sinc_sq_grid_tail(K: int, step: float, T: float) -> float:
    """step * sum over |k| > K of (sin(k step / T) / (k step))^2.

    Uses sum_{k>=1} sin^2(k theta) / k^2 = theta (pi - theta) / 2 for
    0 <= theta <= pi, minus the first K terms.
    """
    theta = step / T
    k = np.arange(1, K + 1, dtype=np.float64)
    head = math.fsum(np.sin(k * theta) ** 2 / k**2)
    return 2 * (theta * (math.pi - theta) / 2 - head) / step


@dataclass
class PlancherelResult:
    lhs: float
    rhs: float
    rel_err: float
    y_max: float
    step: float
    quad_err: float
    tail_bound: float
    converged: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _plancherel_rhs(poly, T, step, K):
    y = evaluate_grid(poly, -K * step, step, 2 * K + 1)
    grid = step * np.arange(-K, K + 1)
    with np.errstate(invalid="ignore", divide="ignore"):
        kern = np.where(grid == 0, 1.0 / T**2, (np.sin(grid / T) / grid) ** 2)
    return (2 / math.pi) * step * math.fsum(np.abs(y) ** 2 * kern)


def plancherel_check(poly: DirichletPolynomial, T: float, quad: QuadratureParams | None = None) -> PlancherelResult:
    """Compare the exact left side with the frequency-side quadrature.

    The right-side integrand is the Fourier transform of a function supported
    on |u| <= L with L = log(max n / min n) + 2/T, so the trapezoid rule with
    step below 2*pi/L has no discretisation error.  What remains is the
    truncation at |y| = y_max; its diagonal part sum |a(n)|^2 * tail is added
    in closed form (as the exact tail of the grid sum) and the off-diagonal part is bounded and reported.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    quad = quad or QuadratureParams()
    lhs = plancherel_lhs(poly, T)
    if poly.is_zero:
        return PlancherelResult(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, True)
    L = poly.log_span() + 2.0 / T
    step = quad.step or math.pi / L
    if step >= 2 * math.pi / L:
        raise ValueError(f"step {step} aliases; must be below 2*pi/{L:.4g}")
    y_max = quad.y_max or 2.0e4
    K = int(y_max / step)
    diag_tail = (2 / math.pi) * poly.l2_sq * _sinc_sq_grid_tail(K, step, T)
    rhs = _plancherel_rhs(poly, T, step, K) + diag_tail
    rhs_half = _plancherel_rhs(poly, T, step / 2, 2 * K) + (2 / math.pi) * poly.l2_sq * _sinc_sq_grid_tail(
        2 * K, step / 2, T
    )
    quad_err = abs(rhs - rhs_half)
    tail_bound = (2 / math.pi) * (poly.l1**2 - poly.l2_sq) * 2.0 / ((K + 0.5) * step)
    rel = abs(lhs - rhs) / max(lhs, 1e-300)
    return PlancherelResult(
        lhs, rhs, rel, (K + 0.5) * step, step, quad_err, tail_bound, quad_err <= quad.rtol * max(abs(rhs), 1e-300)
    )


@dataclass
class RatioResult:
    lhs: float
    rhs: float
    ratio: float
    quad_err: float = 0.0
    params: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio, "quad_err": self.quad_err, "params": self.params}


def _abs_sq(poly):
    return lambda y: np.abs(evaluate_many(poly, y)) ** 2


def saffari_vaughan_ratio(
    poly: DirichletPolynomial,
    h: float,
    X: float,
    c1: float = 1.0,
    c2: float = 2.0,
    quad: QuadratureParams | None = None,
) -> RatioResult:
    """Empirical implied constant of the additive-to-multiplicative short-interval bound.

    Returns lhs / ((c2^2/c1) X I) with lhs the exact integral over x of
    |sum_{x<n<=x+h} a(n)|^2 and I the frequency integral of
    |A(y)|^2 min(h^2/(c1 X)^2, 1/y^2).
    """
    quad = quad or QuadratureParams()
    if not 1 <= h <= c1 * X / 10:
        raise ValueError(f"h={h} outside [1, c1*X/10]")
    n, a = poly.nonzero()
    if n.size and (n[0] < c1 * X or n[-1] > c2 * X):
        raise ValueError("coefficients must vanish outside [c1 X, c2 X]")
    params = {"h": h, "X": X, "c1": c1, "c2": c2}
    if n.size == 0:
        return RatioResult(0.0, 0.0, 0.0, 0.0, params)
    nf = n.astype(np.float64)
    lhs = _sweep(nf - h, nf, a)
    y0 = c1 * X / h
    flat = (h / (c1 * X)) ** 2
    y_max = quad.y_max or max(200 * y0, 2000.0)
    width = _panel_width(poly, cap=8.0)
    f = _abs_sq(poly)

    def integral(w):
        inner = flat * _gauss_legendre(f, -y0, y0, w)
        outer = _gauss_legendre(lambda y: f(y) / y**2, y0, y_max, w)
        outer += _gauss_legendre(lambda y: f(y) / y**2, -y_max, -y0, w)
        return inner + outer + poly.l2_sq * 2.0 / y_max

    I = integral(width)
    I2 = integral(width / 2)
    rhs = (c2**2 / c1) * X * I
    return RatioResult(lhs, rhs, lhs / rhs if rhs else 0.0, (c2**2 / c1) * X * abs(I - I2), params)


def mean_value_integral(poly: DirichletPolynomial, T: float, width: float | None = None) -> float:
    """Integral over [-T, T] of |A(t)|^2 by Gauss-Legendre panels."""
    if poly.is_zero:
        return 0.0
    if width is None:
        width = _panel_width(poly)
    return _gauss_legendre(_abs_sq(poly), -T, T, width)


def mean_value_ratio(poly: DirichletPolynomial, T: float, quad: QuadratureParams | None = None) -> RatioResult:
    """Integral of |A(t)|^2 over [-T, T] divided by (T + N) sum |a(n)|^2, N the support end."""
    quad = quad or QuadratureParams()
    if T < 1:
        raise ValueError("T must be >= 1")
    N = poly.support_hi
    params = {"T": T, "N": N}
    if poly.is_zero:
        return RatioResult(0.0, 0.0, 0.0, 0.0, params)
    width = _panel_width(poly)
    lhs = mean_value_integral(poly, T, width)
    err = abs(lhs - mean_value_integral(poly, T, width / 2))
    if err > quad.rtol * lhs:
        raise QuadratureError(f"mean value quadrature error {err:.3g} above tolerance")
    rhs = (T + N) * poly.l2_sq
    return RatioResult(lhs, rhs, lhs / rhs, err, params)


@dataclass
class ExceptionalSet:
    """Grid frequencies in [-T, T] flagged by a threshold test.

    Each member stands for a cell of width ``grid_step`` centred on it; cells
    lie inside [-T, T], so the measure estimate never exceeds 2T.
    """

    T: float
    grid_step: float
    member_points: np.ndarray
    threshold: float = 0.0
    bound: float = float("nan")

    @property
    def measure_estimate(self) -> float:
        return self.grid_step * len(self.member_points)

    def __len__(self) -> int:
        return len(self.member_points)

    @classmethod
    def from_points(cls, points: Iterable[float], grid_step: float, T: float) -> "ExceptionalSet":
        pts = np.unique(np.asarray(list(points), dtype=np.float64))
        if pts.size and (pts.min() - grid_step / 2 < -T or pts.max() + grid_step / 2 > T):
            raise ValueError("cells must lie within [-T, T]")
        return cls(T, grid_step, pts)

    @classmethod
    def full(cls, T: float, grid_step: float) -> "ExceptionalSet":
        K = int(math.floor(T / grid_step - 0.5))
        return cls(T, grid_step, grid_step * np.arange(-K, K + 1))

    def as_dict(self) -> dict:
        return {
            "T": self.T,
            "grid_step": self.grid_step,
            "members": int(len(self)),
            "measure_estimate": self.measure_estimate,
            "threshold": self.threshold,
            "large_values_bound": self.bound,
        }


def large_values_measure(
    prime_poly: DirichletPolynomial, P: int, T: float, V: float, grid_step: float
) -> ExceptionalSet:
    """Grid estimate of the set of |t| <= T where |sum_{p<=P} a(p) p^{it}| >= pi(P)/V.

    Also records (V^2 log T)^(1 + log T / log P), the bound the measure is
    compared against.
    """
    if V < 3:
        raise ValueError("V must be >= 3")
    if grid_step > 1 / (4 * math.log(P)):
        raise ValueError(f"grid step {grid_step} too coarse; need <= 1/(4 log P) = {1 / (4 * math.log(P)):.4g}")
    n, a = prime_poly.nonzero()
    if n.size:
        if n[-1] > P:
            raise ValueError("coefficients must be supported on p <= P")
        if not np.all(sieve_segment(1, int(n[-1])).is_prime[n - 1]):
            raise ValueError("coefficients must vanish at composite n")
        if np.any(np.abs(a) > 1 + 1e-12):
            raise ValueError("|a(p)| must be <= 1")
    K = int(math.floor(T / grid_step - 0.5))
    values = np.abs(evaluate_grid(prime_poly, -K * grid_step, grid_step, 2 * K + 1))
    threshold = prime_pi(P) / V
    members = grid_step * (np.nonzero(values >= threshold)[0] - K)
    bound = (V**2 * math.log(T)) ** (1 + math.log(T) / math.log(P))
    return ExceptionalSet(T, grid_step, members.astype(np.float64), threshold, bound)


def halasz_montgomery_ratio(
    poly: DirichletPolynomial,
    E: ExceptionalSet,
    T: float,
    prime_variant: bool = False,
    eps: float = 0.1,
) -> RatioResult:
    """Integral of |A|^2 over E divided by the restricted-set mean value bound.

    General form: (N + |E| sqrt(T) log T) sum |a(n)|^2.
    Prime form:   (P/log P + |E| P exp(-log P / log(T+P)^(2/3+eps))) sum |a(p)|^2.
    """
    params = {"T": T, "prime_variant": prime_variant, "eps": eps, "measure": E.measure_estimate}
    if len(E) == 0 or poly.is_zero:
        return RatioResult(0.0, 0.0, 0.0, 0.0, params)
    if np.any(np.abs(E.member_points) > T):
        raise ValueError("E must lie within [-T, T]")
    lhs = E.grid_step * math.fsum(np.abs(evaluate_many(poly, E.member_points)) ** 2)
    N = poly.support_hi
    meas = E.measure_estimate
    if prime_variant:
        logP = math.log(N)
        main = N / logP + meas * N * math.exp(-logP / math.log(T + N) ** (2 / 3 + eps))
    else:
        main = N + meas * math.sqrt(T) * math.log(T)
    rhs = main * poly.l2_sq
    params["N"] = N
    return RatioResult(lhs, rhs, lhs / rhs, 0.0, params)


def twisted_sum_profile(kind: str, x: int, t_values: Sequence[float], *, segment: int = 1 << 22) -> list[dict]:
    """Measured cancellation in sum_{n<=x} lambda(n) n^{it} or sum_{p<=x} p^{it}.

    Each row carries |sum|, the trivial bound (x, or pi(x) for primes) and
    their ratio.
    """
    if kind not in ("liouville", "primes"):
        raise ValueError("kind must be 'liouville' or 'primes'")
    ts = np.ascontiguousarray(np.asarray(t_values, dtype=np.float64))
    parts = []
    count = 0
    for tab in iter_segments(1, x, segment=segment):
        if kind == "liouville":
            n = tab.n
            a = tab.liouville.astype(np.complex128)
        else:
            idx = np.nonzero(tab.is_prime)[0]
            n = tab.lo + idx
            a = np.ones(idx.size, dtype=np.complex128)
            count += idx.size
        out = np.zeros(ts.size, dtype=np.complex128)
        if n.size:
            _eval_points(np.log(n.astype(np.float64)), a, ts, out)
        parts.append(out)
    sums = np.array([complex(math.fsum(p.real for p in col), math.fsum(p.imag for p in col)) for col in zip(*parts)])
    trivial = float(x) if kind == "liouville" else float(count)
    return [
        {"t": float(t), "abs_sum": float(abs(s)), "re": s.real, "im": s.imag, "trivial_bound": trivial, "ratio": abs(s) / trivial}
        for t, s in zip(ts, sums)
    ]
