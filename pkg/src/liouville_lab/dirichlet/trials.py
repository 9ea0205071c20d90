"""Seeded randomized trial suites for the mean-value checks.

Trial i draws from ``np.random.default_rng([seed, i])`` so any single trial
can be rerun without replaying the others.
"""

from __future__ import annotations

import math

import numpy as np

from ..sieve import sieve_segment
from .meanvalue import ExceptionalSet, halasz_montgomery_ratio, mean_value_ratio, plancherel_check
from .poly import DirichletPolynomial

__all__ = ["trial_rng", "plancherel_trials", "mean_value_trials", "hm_trials"]


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(trial)])


def random_complex(N: int, rng: np.random.Generator) -> DirichletPolynomial:
    """Gaussian complex coefficients on a random half of 1..N (always including N)."""
    a = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    keep = rng.random(N) < 0.5
    keep[-1] = True
    return DirichletPolynomial(1, N, np.where(keep, a, 0), "raw")


def plancherel_trials(N: int, T: float, trials: int, seed: int = 0) -> list[dict]:
    rows = []
    for i in range(trials):
        poly = random_complex(N, trial_rng(seed, i))
        rows.append({"trial": i, **plancherel_check(poly, T).as_dict()})
    return rows


def mean_value_trials(N: int, T: float, trials: int, seed: int = 0) -> list[dict]:
    rows = []
    for i in range(trials):
        poly = DirichletPolynomial.random_unit(N, trial_rng(seed, i))
        r = mean_value_ratio(poly, T)
        rows.append({"trial": i, "lhs": r.lhs, "rhs": r.rhs, "ratio": r.ratio, "quad_err": r.quad_err})
    return rows


def hm_trials(N: int, T: float, points: int, trials: int, seed: int = 0, eps: float = 0.1) -> list[dict]:
    """General and prime-restricted ratios on one shared test set per trial.

    Each trial draws unit coefficients on 1..N and ``points`` grid cells of
    width 1/(4 log N) inside [-T, T]; the prime variant keeps only the
    coefficients at primes.
    """
    step = 1 / (4 * math.log(N))
    K = int(math.floor(T / step - 0.5))
    is_prime = sieve_segment(1, N).is_prime
    rows = []
    for i in range(trials):
        rng = trial_rng(seed, i)
        poly = DirichletPolynomial.random_unit(N, rng)
        E = ExceptionalSet.from_points(step * rng.integers(-K, K + 1, points), step, T)
        prime_poly = DirichletPolynomial(1, N, np.where(is_prime, poly.coeffs, 0), "prime-restricted")
        g = halasz_montgomery_ratio(poly, E, T)
        p = halasz_montgomery_ratio(prime_poly, E, T, prime_variant=True, eps=eps)
        rows.append(
            {
                "trial": i,
                "cells": len(E),
                "general_lhs": g.lhs,
                "general_rhs": g.rhs,
                "general_ratio": g.ratio,
                "prime_lhs": p.lhs,
                "prime_rhs": p.rhs,
                "prime_ratio": p.ratio,
            }
        )
    return rows
