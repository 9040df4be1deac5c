import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsgibbs import DataError, HsState, RegressionData, SamplerConfig, chib_marginal_likelihood, effective_sample_size, ess_vs_thinning, run_chain
from hsgibbs.diagnostics import conditional_log_density, default_ordinate_point, log_prior, ordinate_blocks

from oracles import (
    ar1,
    p1_log_marginal_half_cauchy_sigma,
    p1_log_marginal_scale_product,
    p1_posterior,
)

X3 = np.array([-1.0, 0.2, 0.9])
Y3 = np.array([-1.9, 0.1, 2.2])


@pytest.fixture(scope="module")
def tiny():
    return RegressionData.from_arrays(X3, Y3)


@pytest.fixture(scope="module")
def tiny_truth(tiny):
    return p1_posterior(tiny.X[:, 0], tiny.y)[0]


# -- effective sample size ---------------------------------------------------------


def test_ess_iid():
    x = np.random.default_rng(1).standard_normal(100_000)
    assert 0.97 <= effective_sample_size(x) / x.size <= 1.03


def test_ess_ar1_half():
    x = ar1(np.random.default_rng(2), 0.5, 1_000_000)
    assert abs(effective_sample_size(x) / x.size - 1 / 3) < 0.02


def test_ess_ar1_strong():
    x = ar1(np.random.default_rng(3), 0.9, 1_000_000)
    assert abs(effective_sample_size(x) / x.size * 19 - 1) < 0.15


def test_ess_rejects_short_and_constant():
    with pytest.raises(DataError):
        effective_sample_size(np.arange(99.0))
    with pytest.raises(DataError):
        effective_sample_size(np.ones(500))
    with pytest.raises(DataError):
        effective_sample_size(np.ones((200, 2)))
    bad = np.random.default_rng(0).standard_normal(200)
    bad[5] = np.nan
    with pytest.raises(DataError):
        effective_sample_size(bad)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000), rho=st.floats(-0.5, 0.95), shift=st.floats(-1e3, 1e3), scale=st.floats(1e-3, 1e3))
def test_ess_affine_invariant_and_bounded(seed, rho, shift, scale):
    x = ar1(np.random.default_rng(seed), rho, 2_000)
    e = effective_sample_size(x)
    assert 0 < e
    assert e == pytest.approx(effective_sample_size(shift + scale * x), rel=1e-6)


def test_ess_vs_thinning_iid_and_rows():
    draws = np.random.default_rng(4).standard_normal((50_000, 3))
    reps = ess_vs_thinning(draws, [1, 2, 4, 8, 16])
    assert [r.thin_level for r in reps] == [1, 2, 4, 8, 16]
    for r in reps:
        assert r.ess_proportion.shape == (3,)
        # the ESS proportion of iid noise scatters with sd close to 3 / sqrt(n)
        assert np.all(np.abs(r.ess_proportion - 1) < 12 / math.sqrt(r.n_draws))


def test_ess_vs_thinning_ar1_thin4():
    x = ar1(np.random.default_rng(5), 0.5, 1_000_000)
    (rep,) = ess_vs_thinning(x, [4])
    target = (1 - 0.5**4) / (1 + 0.5**4)
    assert rep.ess_proportion[0] == pytest.approx(target, abs=0.02)
    assert rep.n_draws == 250_000


def test_ess_vs_thinning_monotone_for_positive_autocorrelation():
    x = ar1(np.random.default_rng(6), 0.8, 400_000)
    props = [r.ess_proportion[0] for r in ess_vs_thinning(x, [1, 2, 4, 8, 16])]
    assert all(b >= a - 0.03 for a, b in zip(props, props[1:]))
    assert props[-1] > props[0]


def test_ess_vs_thinning_rejects_insufficient_length():
    with pytest.raises(DataError):
        ess_vs_thinning(np.random.default_rng(0).standard_normal(1000), [16])
    with pytest.raises(DataError):
        ess_vs_thinning(np.random.default_rng(0).standard_normal(1000), [0])


def test_ess_vs_thinning_accepts_chain_output(tiny):
    out = run_chain(tiny, SamplerConfig(n_burn=100, n_keep=2000, seed=1))
    (rep,) = ess_vs_thinning(out, [2])
    assert rep.per_coefficient_ess.shape == (1,)


# -- Chib ---------------------------------------------------------------------------


def test_ordinate_blocks_follow_sweep_order():
    assert ordinate_blocks(SamplerConfig()) == ["beta", "sigma2", "lambda2", "tau2", "nu", "xi"]
    cfg = SamplerConfig(prior_variant="horseshoe_plus", sigma_prior="half_cauchy")
    assert ordinate_blocks(cfg) == ["beta", "sigma2", "omega_sigma", "lambda2", "tau2", "nu", "xi", "eta2", "phi"]


@pytest.fixture(scope="module")
def chib_tiny(tiny):
    return chib_marginal_likelihood(tiny, SamplerConfig(n_burn=500, n_keep=20_000, seed=1))


def test_chib_breakdown_sums_bitwise(chib_tiny):
    total = 0.0
    for v in chib_tiny.ordinate_breakdown.values():
        total += v
    assert total == chib_tiny.log_marginal
    keys = list(chib_tiny.ordinate_breakdown)
    assert keys[:2] == ["likelihood", "prior"]
    assert keys[2:] == [f"posterior.{b}" for b in ordinate_blocks(SamplerConfig())]
    # one pilot plus one run per block except the last, which is exact
    assert chib_tiny.n_reduced_runs == 1 + len(keys[2:]) - 1
    assert chib_tiny.block_std_errors["xi"] == 0.0


def test_chib_matches_quadrature(chib_tiny, tiny_truth):
    assert abs(chib_tiny.log_marginal - tiny_truth) < 0.05


def test_chib_two_seeds_consistent(tiny, chib_tiny):
    other = chib_marginal_likelihood(tiny, SamplerConfig(n_burn=500, n_keep=20_000, seed=2))
    se = math.hypot(chib_tiny.std_error, other.std_error)
    assert abs(other.log_marginal - chib_tiny.log_marginal) < 3 * se


def test_chib_scaling_of_response(tiny, chib_tiny, tiny_truth):
    c = 3.0
    scaled = RegressionData.from_arrays(X3, c * Y3)
    truth_scaled = p1_posterior(scaled.X[:, 0], scaled.y)[0]
    # the noise-scale prior makes the evidence scale exactly as c^-n
    assert truth_scaled - tiny_truth == pytest.approx(-3 * math.log(c), abs=1e-6)
    est = chib_marginal_likelihood(scaled, SamplerConfig(n_burn=500, n_keep=20_000, seed=3))
    se = math.hypot(est.std_error, chib_tiny.std_error)
    assert abs((est.log_marginal - chib_tiny.log_marginal) - (truth_scaled - tiny_truth)) < max(3 * se, 0.05)


def test_chib_invariant_to_ordinate_point(tiny, chib_tiny):
    p = chib_tiny.ordinate_point
    other = HsState(
        beta=p.beta * 0.9, sigma2=p.sigma2 * 1.3, lambda2=p.lambda2 * 0.6, tau2=p.tau2 * 1.5,
        nu=p.nu * 1.2, xi=p.xi * 0.8,
    )
    est = chib_marginal_likelihood(tiny, SamplerConfig(n_burn=500, n_keep=20_000, seed=4), other)
    se = math.hypot(est.std_error, chib_tiny.std_error)
    assert abs(est.log_marginal - chib_tiny.log_marginal) < max(3 * se, 0.05)
    assert est.n_reduced_runs == len(ordinate_blocks(SamplerConfig())) - 1


@pytest.mark.slow
@pytest.mark.parametrize("form", ["conventional", "paper"])
def test_chib_horseshoe_plus_against_quadrature(tiny, form):
    truth = p1_log_marginal_scale_product(tiny.X[:, 0], tiny.y, 3)
    cfg = SamplerConfig(n_burn=500, n_keep=20_000, seed=5, prior_variant="horseshoe_plus", hs_plus_form=form)
    est = chib_marginal_likelihood(tiny, cfg)
    assert abs(est.log_marginal - truth) < max(3 * est.std_error, 0.05)


@pytest.mark.slow
def test_chib_half_cauchy_sigma_against_quadrature(tiny):
    truth = p1_log_marginal_half_cauchy_sigma(tiny.X[:, 0], tiny.y)
    est = chib_marginal_likelihood(tiny, SamplerConfig(n_burn=500, n_keep=20_000, seed=6, sigma_prior="half_cauchy"))
    assert abs(est.log_marginal - truth) < max(3 * est.std_error, 0.05)


def test_default_ordinate_point_uses_mean_and_medians(tiny):
    out = run_chain(tiny, SamplerConfig(n_burn=100, n_keep=500, seed=1))
    pt = default_ordinate_point(out)
    assert pt.beta == pytest.approx(out.beta_draws.mean(0))
    assert pt.tau2 == pytest.approx(np.median(out.tau2_draws))


def test_conditional_log_density_rejects_unknown_block(tiny):
    s = HsState.initial(1)
    with pytest.raises(ValueError):
        conditional_log_density("gamma", s, s, tiny, SamplerConfig())


def test_log_prior_is_finite_for_all_variants():
    s = HsState.initial(2, "horseshoe_plus", "half_cauchy")
    s.beta = np.array([0.3, -0.2])
    for form in ("conventional", "paper"):
        cfg = SamplerConfig(prior_variant="horseshoe_plus", sigma_prior="half_cauchy", hs_plus_form=form)
        assert math.isfinite(log_prior(s, cfg))
