# -*- coding:utf-8 -*-
import math

import numpy as np
import pytest
from scipy import stats

from core.errors import DomainError
from core.sgp.kernel import SgpParams, psd
from core.sgp.prior import (ExponentialPrior, PsdPrior, median_psd, psd_to_sigma, quantile_grid,
	sigma_to_psd, to_sigma_rate)


def test_rate_matches_threshold():
	prior = ExponentialPrior(u=2.0, p=0.1)
	assert prior.survival(2.0) == pytest.approx(0.1, rel=1e-12)
	assert prior.rate == pytest.approx(math.log(10) / 2)


def test_median_of_half_probability_statement():
	assert median_psd(PsdPrior(u=0.01, p=0.5, h=1.0)) == pytest.approx(0.01, rel=1e-12)


@pytest.mark.parametrize('alpha', [0.3, 2 * math.pi, 11.0])
@pytest.mark.parametrize('h', [0.1, 1.0, 12.5])
def test_psd_sigma_round_trip(alpha, h):
	values = np.array([1e-3, 0.5, 4.0])
	back = sigma_to_psd(psd_to_sigma(values, alpha, h), alpha, h)
	np.testing.assert_allclose(back, values, rtol=1e-12)
	np.testing.assert_allclose(sigma_to_psd(values, alpha, h), psd(SgpParams(alpha, 1.0), h) * values, rtol=1e-12)


@pytest.mark.parametrize('alpha', [0.5, math.pi, 20.0])
def test_induced_sigma_prior_keeps_threshold(alpha):
	prior = PsdPrior(u=0.3, p=0.2, h=2.0)
	rate = to_sigma_rate(prior, alpha)
	sigma_u = psd_to_sigma(prior.u, alpha, prior.h)
	assert math.exp(-rate * sigma_u) == pytest.approx(prior.p, abs=1e-10)
	assert psd(SgpParams(alpha, float(sigma_u)), prior.h) == pytest.approx(prior.u, rel=1e-12)


@pytest.mark.parametrize('alpha', [0.5, 2 * math.pi])
def test_psd_draws_map_to_exponential_sigma(alpha):
	prior = PsdPrior(u=1.0, p=0.5, h=10.0)
	sigmas = psd_to_sigma(prior.sample(np.random.default_rng(8), 100000), alpha, prior.h)
	result = stats.kstest(sigmas, 'expon', args=(0.0, 1.0 / to_sigma_rate(prior, alpha)))
	assert result.statistic < 0.01


def test_quantile_grid():
	prior = ExponentialPrior(1.0, 0.5)
	nodes = quantile_grid(prior, 5)
	assert np.all(np.diff(nodes) > 0)
	assert nodes[0] == pytest.approx(prior.quantile(0.05))
	assert nodes[-1] == pytest.approx(prior.quantile(0.95))
	np.testing.assert_allclose(quantile_grid(prior, 1), [median_psd(PsdPrior(1.0, 0.5))])


def test_logpdf_support():
	prior = ExponentialPrior(1.0, 0.5)
	assert prior.logpdf(-1.0) == -np.inf
	assert prior.logpdf(0.0) == pytest.approx(math.log(prior.rate))


def test_sample_mean():
	prior = ExponentialPrior(1.0, 0.25)
	draws = prior.sample(np.random.default_rng(0), 200000)
	assert draws.mean() == pytest.approx(1.0 / prior.rate, rel=0.01)


@pytest.mark.parametrize('kwargs', [
	dict(u=0.0, p=0.5),
	dict(u=1.0, p=0.0),
	dict(u=1.0, p=1.0),
	dict(u=float('inf'), p=0.5),
])
def test_invalid_statement(kwargs):
	with pytest.raises(DomainError):
		ExponentialPrior(**kwargs)


def test_invalid_prediction_unit():
	with pytest.raises(DomainError):
		PsdPrior(1.0, 0.5, h=0.0)
	with pytest.raises(DomainError):
		to_sigma_rate(PsdPrior(1.0, 0.5), 0.0)
	with pytest.raises(DomainError):
		quantile_grid(ExponentialPrior(1.0, 0.5), 0)
