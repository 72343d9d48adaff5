"""Distribution curves and Lebesgue / weak / Lorentz norms against oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscillab.fixtures import domain_1d, random_piecewise
from oscillab.grid import GridFunction
from oscillab.measure import (
    WeightedSampleSet,
    distribution,
    distribution_of_samples,
    lebesgue_norm,
    lorentz_norm,
    power_identity_check,
    truncated_sup,
    weak_norm,
    weighted_weak_norm,
)

INF = math.inf


def brute_force_measure(u, q, t):
    """mu{|u|^q > t} by direct counting."""
    return u.domain.cell_volume * int(np.count_nonzero(np.abs(u.values) ** q > t))


def test_distribution_of_zero_function():
    u = GridFunction(domain_1d(8), np.zeros(8))
    curve = distribution(u, 2.0)
    assert curve.breakpoints.size == 0
    assert lorentz_norm(curve, 1.0) == 0.0
    assert lorentz_norm(curve, INF) == 0.0


def test_distribution_of_indicator():
    # chi_A with |A| = 0.5 on the unit-measure box [0, 1]
    d = domain_1d(8, 0.0, 1.0)
    u = GridFunction(d, [1.0] * 4 + [0.0] * 4)
    curve = distribution(u, 1.0)
    assert np.allclose(curve.breakpoints, [1.0])
    assert curve.support_measure == pytest.approx(0.5)
    assert curve.value_at(0.5) == pytest.approx(0.5)
    assert curve.value_at(1.0) == 0.0


def test_distribution_matches_brute_force_counting():
    u = random_piecewise(128, seed=4)
    q = 1.7
    curve = distribution(u, q)
    peak = float(np.max(np.abs(u.values)) ** q)
    for t in np.linspace(peak * 1e-3, peak * 1.1, 97):
        assert curve.value_at(float(t)) == pytest.approx(
            brute_force_measure(u, q, t), abs=1e-12
        )


def test_indicator_lorentz_closed_form():
    # ||chi_A||_{q,gamma} = |A|^{1/q} (q/gamma)^{1/gamma}
    d = domain_1d(10, 0.0, 1.0)
    u = GridFunction(d, [1.0] * 3 + [0.0] * 7)
    area = 0.3
    for q in (1.0, 2.0, 3.5):
        curve = distribution(u, q)
        assert lorentz_norm(curve, INF) == pytest.approx(area ** (1.0 / q))
        for g in (0.5, 1.0, 2.0):
            expected = area ** (1.0 / q) * (q / g) ** (1.0 / g)
            assert lorentz_norm(curve, g) == pytest.approx(expected, rel=1e-12)


def test_lorentz_qq_equals_lebesgue():
    for seed in range(5):
        u = random_piecewise(200, seed=seed)
        for q in (0.5, 1.0, 2.0, 3.0):
            assert lorentz_norm(distribution(u, q), q) == pytest.approx(
                lebesgue_norm(u, q), rel=1e-10
            )


def test_lorentz_vs_quadrature_oracle():
    # dense-t trapezoid quadrature of lambda(t)^{g/q} t^{g/q-1} dt
    u = random_piecewise(64, seed=7)
    q, g = 2.0, 1.5
    curve = distribution(u, q)
    peak = float(curve.breakpoints[-1])
    t = np.linspace(peak * 1e-7, peak, 400_001)
    lam = np.array([curve.value_at(float(x)) for x in t])
    integral = np.trapezoid(lam ** (g / q) * t ** (g / q - 1.0), t)
    assert lorentz_norm(curve, g) == pytest.approx(integral ** (1.0 / g), rel=1e-3)


def test_weak_norm_chebyshev_and_lorentz_bounds():
    for seed in range(5):
        u = random_piecewise(150, seed=seed)
        for q in (1.0, 2.0):
            w = weak_norm(u, q)
            assert w <= lebesgue_norm(u, q) * (1 + 1e-12)
            for g in (0.5, 1.0, 2.0):
                bound = (g / q) ** (1.0 / g) * lorentz_norm(distribution(u, q), g)
                assert w <= bound * (1 + 1e-12)


def test_homogeneity_exact():
    u = random_piecewise(100, seed=1)
    v = u.with_values(3.0 * u.values)
    for q in (1.0, 2.0):
        for g in (0.5, 1.0, INF):
            assert lorentz_norm(distribution(v, q), g) == pytest.approx(
                3.0 * lorentz_norm(distribution(u, q), g), rel=1e-14
            )


def test_truncated_sup_against_brute_force():
    u = random_piecewise(90, seed=13)
    curve = distribution(u, 1.0)
    peak = float(curve.breakpoints[-1])
    dense_s = np.linspace(peak * 1e-5, peak * 1.2, 20_001)
    for upper in (0.3 * peak, peak, 2.0 * peak):
        s = dense_s[dense_s <= upper]
        oracle = max(float(x) * curve.value_at(float(x)) for x in s)
        val = truncated_sup(curve, upper)
        assert val >= oracle - 1e-12
        assert val <= weak_norm(u, 1.0) ** 1.0 + 1e-12  # restricted sup


def test_truncated_sup_rescaling_monotonicity():
    u = random_piecewise(90, seed=3)
    curve = distribution(u, 2.0)
    peak = float(curve.breakpoints[-1])
    grid = np.geomspace(peak * 1e-3, 2.0 * peak, 20)
    for a, b in zip(grid, grid[1:]):
        assert truncated_sup(curve, float(b)) <= (b / a) * truncated_sup(
            curve, float(a)
        ) * (1 + 1e-12)


def test_truncated_sup_single_step_below_value():
    d = domain_1d(8, 0.0, 1.0)
    u = GridFunction(d, [2.0] * 4 + [0.0] * 4)  # |A| = 0.5, value^q = 2 at q=1
    curve = distribution(u, 1.0)
    assert truncated_sup(curve, 0.7) == pytest.approx(0.7 * 0.5)


def test_power_identity_on_random_functions():
    for seed in range(5):
        u = random_piecewise(128, seed=seed)
        for r, p, g in ((1.0, 2.0, 2.0), (2.0, 1.0, 1.0), (0.5, 2.0, INF), (3.0, 0.7, 1.5)):
            assert power_identity_check(u, r, p, g).passed


def test_empty_region_rejected():
    u = random_piecewise(16, seed=0)
    with pytest.raises(ValueError):
        distribution(u, 1.0, region=np.zeros(16, dtype=bool))
    with pytest.raises(ValueError):
        lebesgue_norm(u, 1.0, region=np.zeros(16, dtype=bool))


def test_region_restriction():
    d = domain_1d(8, 0.0, 1.0)
    u = GridFunction(d, [5.0] * 4 + [1.0] * 4)
    left_half = np.array([True] * 4 + [False] * 4)
    assert lebesgue_norm(u, 1.0, region=left_half) == pytest.approx(2.5)


def test_weighted_weak_norm_closed_forms():
    one = WeightedSampleSet(np.array([3.0]), np.array([0.25]))
    assert weighted_weak_norm(one, 2.0) == pytest.approx(0.25 * 9.0)
    same = WeightedSampleSet(np.full(5, 2.0), np.full(5, 0.1))
    assert weighted_weak_norm(same, 1.0) == pytest.approx(0.5 * 2.0)


def test_weighted_weak_norm_brute_force():
    rng = np.random.default_rng(21)
    vals = rng.normal(size=40)
    weights = rng.uniform(0.01, 1.0, size=40)
    samples = WeightedSampleSet(vals, weights)
    q = 1.3
    pow_vals = np.abs(vals) ** q
    dense_t = np.linspace(pow_vals.max() * 1e-6, pow_vals.max(), 10_001)
    oracle = max(float(t) * float(weights[pow_vals > t].sum()) for t in dense_t)
    val = weighted_weak_norm(samples, q)
    assert val >= oracle - 1e-12
    assert val <= oracle * (1 + 1e-2)


@given(st.integers(min_value=0, max_value=1000), st.floats(min_value=0.4, max_value=4.0))
@settings(max_examples=40, deadline=None)
def test_chebyshev_property(seed, q):
    u = random_piecewise(64, seed=seed)
    assert weak_norm(u, q) <= lebesgue_norm(u, q) * (1 + 1e-12)


@given(st.integers(min_value=0, max_value=1000))
@settings(max_examples=30, deadline=None)
def test_distribution_measures_nonincreasing_and_bounded(seed):
    u = random_piecewise(64, seed=seed)
    curve = distribution(u, 2.0)
    if curve.breakpoints.size:
        assert np.all(np.diff(curve.measures) <= 0)
        assert curve.support_measure <= u.domain.total_measure + 1e-12
        assert curve.measures[-1] == 0.0  # bounded functions exhaust their support


def test_samples_weights_must_be_positive():
    with pytest.raises(ValueError):
        WeightedSampleSet(np.array([1.0]), np.array([0.0]))
    with pytest.raises(ValueError):
        WeightedSampleSet(np.array([]), np.array([]))


def test_distribution_of_samples_merges_ties():
    curve = distribution_of_samples(np.array([1.0, 1.0, 2.0]), np.array([0.1, 0.2, 0.3]), 1.0)
    assert np.allclose(curve.breakpoints, [1.0, 2.0])
    assert curve.support_measure == pytest.approx(0.6)
    assert np.allclose(curve.measures, [0.3, 0.0])
