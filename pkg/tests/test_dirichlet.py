import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from liouville_lab.dirichlet import (
    DirichletPolynomial,
    ExceptionalSet,
    QuadratureParams,
    evaluate,
    evaluate_grid,
    evaluate_many,
    halasz_montgomery_ratio,
    large_values_measure,
    mean_value_ratio,
    plancherel_check,
    plancherel_lhs,
    saffari_vaughan_ratio,
    twisted_sum_profile,
)
from liouville_lab.dirichlet.meanvalue import mean_value_integral


def triangle_oracle(poly, T):
    """Closed form of the left side: sum a_m conj(a_n) max(0, 2/T - |log m - log n|)."""
    n, a = poly.nonzero()
    d = np.abs(np.log(n)[:, None] - np.log(n)[None, :])
    return float(np.real(np.sum(np.outer(a, a.conj()) * np.maximum(0.0, 2 / T - d))))


def mean_value_oracle(poly, T):
    """Closed form of the integral of |A|^2 over [-T, T]."""
    n, a = poly.nonzero()
    d = np.log(n)[:, None] - np.log(n)[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        k = np.where(d == 0, 2 * T, 2 * np.sin(T * d) / d)
    return float(np.real(np.sum(np.outer(a, a.conj()) * k)))


def test_single_term_plancherel_exact():
    p = DirichletPolynomial.from_mapping({1: 1})
    r = plancherel_check(p, 1.0)
    assert r.lhs == 2.0
    assert r.rel_err < 1e-9


def test_two_far_terms_have_no_cross_term():
    p = DirichletPolynomial.from_mapping({1: 1, 8: 1})
    r = plancherel_check(p, 1.0)
    assert r.lhs == 4.0
    assert r.rel_err < 1e-7


def test_liouville_block_plancherel():
    p = DirichletPolynomial.liouville(100, 200)
    r = plancherel_check(p, 5.0)
    assert r.lhs == pytest.approx(triangle_oracle(p, 5.0), rel=1e-12)
    assert r.rel_err < 1e-6 and r.converged


@given(seed=st.integers(0, 2**32), N=st.integers(2, 200), T=st.sampled_from([1.0, 3.0, 10.0]))
def test_plancherel_lhs_matches_triangle_kernel(seed, N, T):
    rng = np.random.default_rng(seed)
    p = DirichletPolynomial(1, N, rng.standard_normal(N) + 1j * rng.standard_normal(N))
    assert plancherel_lhs(p, T) == pytest.approx(triangle_oracle(p, T), rel=1e-9, abs=1e-9)


def test_plancherel_rejects_aliasing_step():
    p = DirichletPolynomial.liouville(1, 100)
    with pytest.raises(ValueError):
        plancherel_check(p, 1.0, QuadratureParams(step=10.0))


def test_evaluation_paths_agree():
    rng = np.random.default_rng(1)
    p = DirichletPolynomial.random_unit(300, rng)
    ys = 0.37 * np.arange(-600, 601)
    grid = evaluate_grid(p, ys[0], 0.37, ys.size)
    pts = evaluate_many(p, ys)
    assert np.max(np.abs(grid - pts)) < 1e-9
    assert evaluate(p, 5.5) == pytest.approx(evaluate_many(p, [5.5])[0], abs=1e-10)


def test_mean_value_two_terms():
    p = DirichletPolynomial.from_mapping({1: 1, 2: 1})
    want = 40 + 4 * math.sin(10 * math.log(2)) / math.log(2)
    r = mean_value_ratio(p, 10.0)
    assert r.lhs == pytest.approx(want, rel=1e-10)
    assert r.ratio == pytest.approx(want / 24, rel=1e-10)


@given(seed=st.integers(0, 2**32), N=st.integers(2, 300), T=st.floats(1, 200))
def test_mean_value_integral_matches_closed_form(seed, N, T):
    p = DirichletPolynomial.random_unit(N, np.random.default_rng(seed))
    assert mean_value_integral(p, T) == pytest.approx(mean_value_oracle(p, T), rel=1e-8)


def test_saffari_vaughan_ratios():
    X, h = 1000, 50
    ones = DirichletPolynomial(X, 2 * X, np.ones(X + 1))
    lam = DirichletPolynomial.liouville(X, 2 * X)
    for p in (ones, lam):
        r = saffari_vaughan_ratio(p, h, X)
        assert 0 < r.ratio < 1
        assert r.quad_err < 1e-6 * r.rhs
    with pytest.raises(ValueError):
        saffari_vaughan_ratio(ones, 500, X)
    with pytest.raises(ValueError):
        saffari_vaughan_ratio(DirichletPolynomial.liouville(1, 2000), h, X)


def test_large_values_small_case():
    P, T = 100, 100.0
    E = large_values_measure(DirichletPolynomial.on_primes(P), P, T, 3, 1 / (4 * math.log(P)))
    assert 0.0 in E.member_points
    assert E.measure_estimate <= 2 * T
    assert E.measure_estimate < E.bound


@given(V1=st.floats(3, 30), V2=st.floats(3, 30))
def test_large_values_monotone_in_V(V1, V2):
    P, T = 200, 300.0
    poly = DirichletPolynomial.on_primes(P)
    step = 1 / (4 * math.log(P))
    a = large_values_measure(poly, P, T, min(V1, V2), step)
    b = large_values_measure(poly, P, T, max(V1, V2), step)
    assert a.measure_estimate <= b.measure_estimate
    assert set(a.member_points) <= set(b.member_points)


def test_large_values_preconditions():
    P = 100
    step = 1 / (4 * math.log(P))
    with pytest.raises(ValueError):
        large_values_measure(DirichletPolynomial.on_primes(P), P, 100.0, 2, step)
    with pytest.raises(ValueError):
        large_values_measure(DirichletPolynomial.on_primes(P), P, 100.0, 3, 1.0)
    with pytest.raises(ValueError):
        large_values_measure(DirichletPolynomial.liouville(1, P), P, 100.0, 3, step)


def test_exceptional_set_cells():
    E = ExceptionalSet.full(10.0, 0.5)
    assert E.measure_estimate <= 20.0
    with pytest.raises(ValueError):
        ExceptionalSet.from_points([9.9], 0.5, 10.0)


def test_hm_full_set_reduces_to_mean_value():
    p = DirichletPolynomial.random_unit(64, np.random.default_rng(3))
    T = 200.0
    step = 1 / (8 * math.log(64))
    r = halasz_montgomery_ratio(p, ExceptionalSet.full(T, step), T)
    assert r.lhs == pytest.approx(mean_value_oracle(p, T), rel=2e-3)


def test_hm_empty_set_and_prime_denominator():
    p = DirichletPolynomial.on_primes(256, 1.0)
    assert halasz_montgomery_ratio(p, ExceptionalSet(100.0, 0.1, np.zeros(0)), 100.0).ratio == 0.0
    E = ExceptionalSet.from_points([0.0, 1.0, 2.0], 0.05, 1e4)
    g = halasz_montgomery_ratio(p, E, 1e4)
    q = halasz_montgomery_ratio(p, E, 1e4, prime_variant=True)
    assert q.lhs == g.lhs
    assert q.rhs < g.rhs


def test_twisted_profiles():
    rows = twisted_sum_profile("primes", 10**6, [0.0, 100.0])
    assert rows[0]["abs_sum"] == 78498 and rows[0]["ratio"] == 1.0
    assert rows[1]["ratio"] < 0.2
    lam = twisted_sum_profile("liouville", 10**6, [0.0])
    assert lam[0]["abs_sum"] == 530 and lam[0]["trivial_bound"] == 10**6


def test_coefficient_csv_roundtrip(tmp_path):
    p = DirichletPolynomial.from_mapping({3: 1 + 2j, 7: -0.5})
    p.write_csv(tmp_path / "c.csv")
    q = DirichletPolynomial.read_csv(tmp_path / "c.csv")
    assert (q.support_lo, q.support_hi) == (3, 7)
    assert q[3] == 1 + 2j and q[7] == -0.5 and q[5] == 0
