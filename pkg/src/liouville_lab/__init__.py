"""Desk-scale numerical experiments on Liouville's function in short intervals."""

from .sieve import FactorTable, sieve_segment, iter_segments, mertens_lambda, primes_in
from .intervals import IntervalSumStats, variance_scan, interval_sum
from .chowla import pattern_census, correlation, averaged_chowla, log_chowla, discrepancy_scan
from .multiplicative import MultiplicativeFunctionSpec, tabulate, wirsing_mean, sign_changes, short_vs_long, smooth_in_interval

__version__ = "0.1.0"

__all__ = [
    "FactorTable",
    "sieve_segment",
    "iter_segments",
    "mertens_lambda",
    "primes_in",
    "IntervalSumStats",
    "variance_scan",
    "interval_sum",
    "pattern_census",
    "correlation",
    "averaged_chowla",
    "log_chowla",
    "discrepancy_scan",
    "MultiplicativeFunctionSpec",
    "tabulate",
    "wirsing_mean",
    "sign_changes",
    "short_vs_long",
    "smooth_in_interval",
]
