"""Interpolation-inequality harness: exact suites, ratio scans, witnesses."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscillab.fixtures import (
    FixtureFamily,
    gaussian_bump,
    log_singular,
    random_piecewise,
    step,
)
from oscillab.harness import (
    THEOREM_IDS,
    bmo_ratio_scan,
    bmo_value,
    char_sandwich_check,
    exact_inequality_suite,
    theorem_case,
    translation_interp_check,
    vmo_vanishing_check,
    young_epsilon_check,
)
from oscillab.jump import box_mask

INF = math.inf

SCAN_FAMILIES = [
    FixtureFamily("step"),
    FixtureFamily("log_singular"),
    FixtureFamily("hoelder_bump"),
]


def test_exact_suite_passes_on_named_fixtures():
    for build in (step, log_singular, gaussian_bump):
        reports = exact_inequality_suite(build(128))
        failed = [r for r in reports if not r.passed]
        assert not failed, [r.op for r in failed]


@given(st.integers(min_value=0, max_value=2000))
@settings(max_examples=25, deadline=None)
def test_exact_suite_passes_on_random_functions(seed):
    reports = exact_inequality_suite(random_piecewise(64, seed=seed))
    assert all(r.passed for r in reports)


def test_exact_suite_passes_in_2d():
    reports = exact_inequality_suite(random_piecewise(32, seed=77, dim=2))
    assert all(r.passed for r in reports)


def test_young_epsilon_scalar_cases():
    assert young_epsilon_check(2.0, 3.0, 1.0, 2.0).passed
    assert young_epsilon_check(0.0, 5.0, 0.1, 1.5).passed
    # equality case: a*b = a^p/p + b^q/q at eps=1 when a^p = b^q
    r = young_epsilon_check(2.0, 2.0, 1.0, 2.0)
    assert r.lhs == pytest.approx(r.rhs)
    with pytest.raises(ValueError):
        young_epsilon_check(1.0, 1.0, -1.0, 2.0)


def test_min_truncation_indicator_oracle():
    # chi_A with k=1, p=1, q=2, gamma=1: lhs = 2|A|^{1/2}, C = 4,
    # middle = |A|^{1/2}: the chain reads 2|A|^{1/2} <= 4|A|^{1/2}
    from oscillab.fixtures import domain_1d
    from oscillab.grid import GridFunction
    from oscillab.harness import _lemma_min_truncation

    d = domain_1d(16, 0.0, 1.0)
    u = GridFunction(d, [1.0] * 4 + [0.0] * 12)  # |A| = 0.25
    first, second = _lemma_min_truncation(u, 1.0, 1.0, 2.0, 1.0)
    assert first.lhs == pytest.approx(2.0 * 0.25**0.5, rel=1e-12)
    assert first.rhs == pytest.approx(4.0 * 0.25**0.5, rel=1e-12)
    assert first.passed and second.passed


@pytest.mark.parametrize("theorem", THEOREM_IDS)
def test_ratio_scans_pass_per_theorem(theorem):
    grids = {
        "local_lorentz": [{"p": 1.0, "q": 2.0, "gamma": 2.0}, {"p": 0.5, "q": 2.0, "gamma": 1.0}],
        "global_lorentz": [{"p": 1.0, "q": 2.0, "gamma": 2.0}, {"p": 1.0, "q": 3.0, "gamma": 4.0}],
        "lebesgue": [{"p": 1.0, "q": 2.0}, {"p": 2.0, "q": 3.0}],
        "frac_sobolev": [{"p": 1.0, "q": 2.0, "s": 0.5}],
        "besov": [{"p": 1.0, "q": 2.0, "s": 0.5}],
        "bv": [{"q": 2.0}],
        "general_besov": [{"p": 2.0, "w": 1.0, "s": 0.5}, {"p": 3.0, "w": 1.5, "s": 0.4, "besov_q": 3.0}],
        "gradient_sobolev": [{"p": 2.0, "s": 0.75}],
    }
    report = bmo_ratio_scan(SCAN_FAMILIES, theorem, grids[theorem], resolution=96)
    assert report.passed, report.extras


def test_ratio_scan_flags_constant_functions():
    const = FixtureFamily("random_piecewise", {"seed": 0, "blocks": 1, "amplitude": 0.0})
    report = bmo_ratio_scan([const], "lebesgue", [{"p": 1.0, "q": 2.0}], resolution=32)
    assert report.extras["hypothesis_flagged"] == 1
    assert report.extras["n_cases"] == 0


def test_theorem_case_records_factors():
    u = step(128, a=1.0, x0=0.0)
    case = theorem_case(u, "lebesgue", {"p": 1.0, "q": 2.0}, fixture="step")
    assert case is not None
    # closed forms for the flush step on [-1, 1]: ||u||_2 = sqrt(|A|),
    # ||u||_1 = |A|, BMO double-average sweep = 1/2
    area = float(np.count_nonzero(u.values)) * u.domain.cell_volume
    assert case.lhs == pytest.approx(math.sqrt(area), rel=1e-12)
    assert case.rhs_factors["lp"] == pytest.approx(area**0.5, rel=1e-12)
    assert case.rhs_factors["bmo"] == pytest.approx(math.sqrt(0.5), rel=1e-12)
    assert math.isfinite(case.ratio)


def test_theorem_case_unknown_id():
    with pytest.raises(ValueError):
        theorem_case(step(64), "bogus_theorem", {"p": 1.0, "q": 2.0})


def test_char_sandwich_on_log_singularity():
    u = log_singular(256)
    k = max(bmo_value(u), 1.0)
    report = char_sandwich_check(u, k, 2.0, 1.0)
    assert report.passed
    assert report.extras["constant_witness"] >= 1.0  # chain is increasing


def test_char_sandwich_flags_small_k():
    u = log_singular(256)
    report = char_sandwich_check(u, 1e-6, 2.0, 1.0)
    assert not report.passed
    assert "hypothesis_violation" in report.extras


def test_char_sandwich_witness_stable_under_refinement():
    witnesses = []
    for n in (256, 512):
        u = log_singular(n)
        witnesses.append(char_sandwich_check(u, 2.0, 2.0, 1.0).extras["constant_witness"])
    assert witnesses[1] == pytest.approx(witnesses[0], rel=0.2)


def test_vmo_vanishing_for_smooth_bump():
    u = gaussian_bump(512)
    report = vmo_vanishing_check(u, 1.0, 2.0, 0.5, [64, 32, 16, 8, 4, 2, 1])
    assert report.passed
    energies = report.extras["energies"]
    assert energies[-1] <= 0.1 * energies[0]


def test_vmo_sharpness_for_step():
    # q = p = 1, s = 1 on a window missing the support boundary: E(h) = |a|
    u = step(512, a=1.5, x0=0.0)
    window = box_mask(u, -0.5, 0.5)
    report = vmo_vanishing_check(
        u, 1.0, 1.0, 1.0, [32, 16, 8, 4, 2, 1], region=window, expect_vanishing=False
    )
    assert report.passed
    assert np.allclose(report.extras["energies"], 1.5, rtol=1e-12)


def test_translation_interp_chain():
    u = random_piecewise(256, seed=42)
    report = translation_interp_check(u, (7,), 1.0, 2.0)
    assert report.passed
    assert report.extras["constant_witness"] >= 1.0 - 1e-12  # clipping shrinks


def test_translation_interp_requires_p_below_q():
    u = random_piecewise(64, seed=1)
    with pytest.raises(ValueError):
        translation_interp_check(u, (3,), 2.0, 2.0)


def test_translation_interp_flags_small_k():
    u = random_piecewise(256, seed=42)
    report = translation_interp_check(u, (7,), 1.0, 2.0, k=1e-9)
    assert not report.passed
    assert "hypothesis_violation" in report.extras
