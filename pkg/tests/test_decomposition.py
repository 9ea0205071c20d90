import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from liouville_lab.dirichlet import build_decomposition, omega_in, restricted_factorization_error, turan_variance
from liouville_lab.dirichlet.decomposition import decomposition_mismatches, dyadic_blocks, parse_layers
from liouville_lab.sieve import sieve_segment

import oracles


def test_parse_layers():
    assert parse_layers("2:10;100:1000") == [(2, 10), (100, 1000)]


def test_dyadic_blocks_cover_layer():
    blocks = dyadic_blocks(11, 100)
    assert [b[:2] for b in blocks] == [(11, 22), (22, 44), (44, 88), (88, 176)]
    assert sum(b[2].size for b in blocks) == 21


@pytest.mark.parametrize(
    "layers",
    [[(2, 10)], [(2, 10), (11, 100)], [(2, 10), (11, 50), (53, 200)], [(2, 10), (100, 1000)]],
)
def test_identity_exact_at_1e4(layers):
    decomp, poly = build_decomposition(layers, 10**4)
    assert decomposition_mismatches(decomp, poly).size == 0


def test_small_hand_checked_coefficient():
    # 12 = 2^2 * 3: lambda = -1, two distinct primes from {2..10}
    decomp, poly = build_decomposition([(2, 10)], 10)
    assert poly[12] == -2


@given(X=st.integers(30, 600), a=st.integers(2, 6), span=st.integers(0, 12))
def test_identity_random_single_layer(X, a, span):
    if a >= X:
        return
    decomp, poly = build_decomposition([(a, a + span)], X)
    assert decomposition_mismatches(decomp, poly).size == 0


def test_rejects_overlapping_layers():
    with pytest.raises(ValueError, match="overlap"):
        build_decomposition([(2, 10), (7, 20)], 1000)


def test_omega_in():
    n = np.array([1, 6, 12, 30, 49])
    assert omega_in(n, [2, 3, 5]).tolist() == [0, 2, 2, 3, 0]


def test_turan_layer_ratio():
    r = turan_variance((2, 10), 10**4)
    assert r.W == pytest.approx(1 / 2 + 1 / 3 + 1 / 5 + 1 / 7)
    assert r.ratio < 5


def test_turan_single_prime_bernoulli():
    X, p = 10**4, 101
    r = turan_variance((p, p), X)
    W = 1 / p
    closed = (X + 1) * W * (1 - W)
    assert abs(r.variance - closed) <= 4 * W
    # brute force from the definition
    om = np.array([1.0 if n % p == 0 else 0.0 for n in range(X, 2 * X + 1)])
    assert r.variance == pytest.approx(math.fsum((om - W) ** 2), rel=1e-12)


def test_turan_empty_layer():
    assert turan_variance((24, 28), 1000).variance == 0.0


def brute_restricted_gap(layer, X):
    lo, hi = layer
    ps = [p for p in range(lo, hi + 1) if oracles.is_prime(p)]
    gaps = []
    for n in range(X, 2 * X + 1):
        divs = [p for p in ps if n % p == 0]
        exact = oracles.liouville(n) if divs else 0
        approx = sum(oracles.liouville(n) / (sum(1 for q in ps if (n // p) % q == 0) + 1) for p in divs)
        gaps.append(exact - approx)
    return gaps


def test_restricted_factorization_gap_support_and_size():
    r = restricted_factorization_error((2, 10), 10**4)
    assert r.support_matches
    gaps = brute_restricted_gap((2, 10), 10**4)
    l1_exact = sum(1 for n in range(10**4, 2 * 10**4 + 1) if any(n % p == 0 for p in (2, 3, 5, 7)))
    assert r.l1_error == pytest.approx(math.fsum(abs(g) for g in gaps), rel=1e-12)
    assert r.l1_exact == l1_exact
    assert r.relative_l1 == pytest.approx(0.15697865, abs=1e-8)


def test_restricted_gap_only_at_square_multiples():
    gaps = brute_restricted_gap((2, 10), 50)
    assert gaps[51 - 50] == 0
    assert gaps[52 - 50] != 0


def test_restricted_gap_vanishes_for_large_layer_primes():
    # every layer prime exceeds sqrt(2X), so no n in [X, 2X] has a repeated layer factor
    r = restricted_factorization_error((150, 400), 10**4)
    assert r.l1_error == 0.0 and r.support_matches and r.l1_exact > 0
