import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from liouville_lab.intervals import interval_sum, moving_sum_scan, variance_scan
from liouville_lab.sieve import sieve_segment


def brute_sums(X, h, weight="lambda"):
    t = sieve_segment(1, 2 * X + h)
    w = t.liouville.astype(float) if weight == "lambda" else t.mangoldt()
    c = np.concatenate([[0.0], np.cumsum(w)])
    x = np.arange(X, 2 * X)
    return c[x + h] - c[x]


def test_interval_sum_direct():
    t = sieve_segment(1, 20)
    assert interval_sum(t, 0, 10) == 0
    assert interval_sum(t, 3, 4) == 1 - 1 + 1 - 1
    assert interval_sum(t, 0, 10, "mangoldt") == pytest.approx(math.log(2520))
    with pytest.raises(IndexError):
        interval_sum(t, 15, 10)


def test_unit_window_variance_is_one():
    s = variance_scan(10**6, 1, thresholds=[0.5])
    assert s.normalized_variance == 1.0
    assert s.exceptional_counts[0.5] == 10**6


def test_desk_value_lambda_h100():
    s = variance_scan(10**6, 100, thresholds=[0.2])
    assert s.count == 10**6
    assert s.normalized_variance == pytest.approx(0.0099177344, abs=1e-12)
    assert s.normalized_variance < 0.05


def test_histogram_counts_everything():
    s = variance_scan(10**5, 64)
    assert s.histogram.sum() == s.count == 10**5


@given(X=st.integers(50, 3000), h=st.integers(1, 49), chunk=st.integers(1, 700))
def test_sliding_matches_prefix_sums(X, h, chunk):
    got = np.concatenate(list(moving_sum_scan(X, h, chunk=chunk)))
    assert np.array_equal(got, brute_sums(X, h))


@given(X=st.integers(50, 3000), h=st.integers(1, 49), step=st.integers(1, 17), chunk=st.integers(17, 500))
def test_stride_consistency(X, h, step, chunk):
    ref = brute_sums(X, h)[::step]
    s = variance_scan(X, h, step, chunk=chunk)
    assert s.count == ref.size == len(range(X, 2 * X, step))
    assert s.sum_sq == int(np.dot(ref, ref))
    assert s.max_abs == np.abs(ref).max()


@given(X=st.integers(100, 2000), h=st.integers(2, 99))
def test_mangoldt_sums_are_centered(X, h):
    ref = brute_sums(X, h, "mangoldt") - h
    s = variance_scan(X, h, weight="mangoldt", chunk=256)
    assert s.sum_sq == pytest.approx(float(np.dot(ref, ref)), rel=1e-9)


@given(X=st.integers(1000, 20000), h=st.integers(4, 200), eps=st.lists(st.floats(0.01, 1.5), min_size=2, max_size=5, unique=True))
def test_exceptional_counts_monotone_in_threshold(X, h, eps):
    s = variance_scan(X, h, thresholds=eps)
    counts = [s.exceptional_counts[e] for e in sorted(eps)]
    assert counts == sorted(counts, reverse=True)


def test_threads_and_chunking_do_not_change_stats():
    a = variance_scan(10**6, 300, 3, thresholds=[0.1], threads=1, chunk=1 << 18)
    b = variance_scan(10**6, 300, 3, thresholds=[0.1], threads=4, chunk=1 << 16)
    assert a.to_dict() == b.to_dict()


@pytest.mark.parametrize("X, h, step", [(100, 100, 1), (100, 0, 1), (100, 10, 0)])
def test_rejects_bad_scans(X, h, step):
    with pytest.raises(ValueError):
        variance_scan(X, h, step)


def test_row_columns():
    row = variance_scan(1000, 10, thresholds=[0.2, 0.5]).row()
    assert list(row) == ["x_start", "h", "count", "mean_sq", "normalized_variance", "max_abs", "exc_0.2", "exc_0.5"]
