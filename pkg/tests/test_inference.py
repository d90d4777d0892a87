# -*- coding:utf-8 -*-
import math

import numpy as np
import pytest
from scipy import stats

from core.errors import ConfigError, DomainError, ModelError
from core.inference import (ComponentSpec, GridAxis, ModelSpec, Representation, axis_marginals, excess_summary,
	fit, forecast, normalize_weights, sample_eta, simulate_dataset)
from core.sgp.kernel import BoundaryBasis, SgpParams, covariance_matrix
from core.sgp.prior import ExponentialPrior, PsdPrior

PRIOR = PsdPrior(u=1.0, p=0.5, h=1.0)


def single_node_spec(x, y, alpha, psd_level, noise_sd, **kwargs):
	comp = ComponentSpec('season', PRIOR, alpha=alpha, psd_levels=(psd_level,),
		representation=kwargs.pop('representation', Representation.STATE_SPACE),
		r=kwargs.pop('r', 30), family=kwargs.pop('family', 'sbspline'))
	return ModelSpec(x, y, [comp], noise_levels=(noise_sd,), **kwargs)


class TestDenseOracle:

	@pytest.mark.parametrize('seed', range(20))
	def test_single_node_matches_dense_gaussian(self, seed):
		rng = np.random.default_rng(seed)
		n = int(rng.integers(5, 31))
		x = np.cumsum(rng.uniform(0.1, 0.6, n))
		y = rng.standard_normal(n)
		alpha = rng.uniform(0.5, 4.0)
		level = rng.uniform(0.2, 2.0)
		noise = rng.uniform(0.2, 1.0)
		V, B = 10.0, 5.0
		spec = single_node_spec(x, y, alpha, level, noise, fixed_prior_var=V, boundary_prior_var=B)
		result = fit(spec)
		sigma = spec.components[0].sigma_at(level)

		Phi = BoundaryBasis(alpha).evaluate(x)
		K_g = covariance_matrix(SgpParams(alpha, sigma), x)
		K_latent = B * Phi @ Phi.T + K_g
		K_eta = V + K_latent
		K_y = K_eta + noise ** 2 * np.eye(n)
		A = np.linalg.solve(K_y, K_eta).T
		mean = A @ y
		var = np.diag(K_eta - A @ K_eta)

		assert result.log_ml[0] == pytest.approx(stats.multivariate_normal(np.zeros(n), K_y).logpdf(y), rel=1e-8)
		assert result.hyper_weights.tolist() == [1.0]
		np.testing.assert_allclose(result.fitted_mean, mean, atol=1e-8)
		np.testing.assert_allclose(result.fitted_sd, np.sqrt(var), atol=1e-8)
		latent = np.linalg.solve(K_y, K_latent).T @ y
		np.testing.assert_allclose(result.latent_mean['season'], latent, atol=1e-8)
		beta = V * np.linalg.solve(K_y, np.ones(n)) @ y
		assert result.fixed_mean['intercept'] == pytest.approx(beta, abs=1e-8)

	def test_intervals_contain_mean(self):
		rng = np.random.default_rng(3)
		x = np.linspace(0.5, 6.0, 12)
		spec = single_node_spec(x, rng.standard_normal(12), 2.0, 0.5, 0.5)
		result = fit(spec)
		assert np.all(result.credible_lower <= result.fitted_mean)
		assert np.all(result.fitted_mean <= result.credible_upper)
		width = result.credible_upper - result.credible_lower
		np.testing.assert_allclose(width, 2 * 1.96 * result.fitted_sd, rtol=0.15)


def test_noiseless_sinusoid_recovered():
	alpha = 2 * math.pi / 3
	x = np.linspace(0.25, 9.0, 36)
	y = 2 * np.cos(alpha * x) + 0.5 * np.sin(alpha * x)
	spec = single_node_spec(x, y, alpha, 1e-3, 1e-4, intercept=False)
	result = fit(spec)
	assert np.max(np.abs(result.fitted_mean - y)) < 1e-3
	np.testing.assert_allclose(result.latent_mean['season'], y, atol=1e-3)


def test_zero_noise_sinusoid_prefers_smallest_psd():
	alpha = 2 * math.pi / 3
	x = np.linspace(0.25, 9.0, 36)
	comp = ComponentSpec('season', PRIOR, alpha=alpha, psd_levels=(1e-3, 1e-2, 1e-1, 1.0))
	spec = ModelSpec(x, np.cos(alpha * x), [comp], noise_levels=(1e-4,), intercept=False)
	values, mass = fit(spec).axis_marginals['psd:season']
	assert values[0] == 1e-3
	assert mass[0] > 0.99


def test_interval_coverage():
	"""95% intervals of eta over 30 series simulated from the fitted model."""
	alpha = 2 * math.pi / 3
	x = np.linspace(0.25, 9.0, 40)
	sigma = ComponentSpec('season', PRIOR, alpha=alpha).sigma_at(0.4)
	inside = []
	for seed in range(30):
		data = simulate_dataset(x, [SgpParams(alpha, sigma)], 0.3, intercept=1.0, boundary=[(0.5, -0.3)], seed=seed)
		result = fit(single_node_spec(x, data.y, alpha, 0.4, 0.3, seed=seed))
		inside.append((result.credible_lower <= data.eta) & (data.eta <= result.credible_upper))
	coverage = np.mean(inside)
	assert 0.9 <= coverage <= 0.99


class TestWeights:

	def test_shift_invariance(self):
		lp = np.log([0.2, 0.3, 0.5])
		lml = np.array([-10.0, -11.5, -9.0])
		w = normalize_weights(lp, lml)
		assert w.sum() == pytest.approx(1.0, abs=1e-12)
		np.testing.assert_allclose(normalize_weights(lp, lml + 1234.5), w, rtol=1e-12)
		np.testing.assert_allclose(normalize_weights(lp + 7.0, lml), w, rtol=1e-12)

	def test_failed_nodes_excluded(self):
		w = normalize_weights(np.zeros(3), np.array([-1.0, np.nan, -1.0]))
		np.testing.assert_allclose(w, [0.5, 0.0, 0.5])
		with pytest.raises(ModelError):
			normalize_weights(np.zeros(2), np.array([np.nan, np.nan]))

	def test_axis_marginals(self):
		axes = [GridAxis('a', (1.0, 2.0)), GridAxis('b', (5.0, 6.0, 7.0))]
		w = np.arange(6.0) / 15.0
		marg = axis_marginals(axes, w)
		np.testing.assert_allclose(marg['a'][1], [3 / 15, 12 / 15])
		np.testing.assert_allclose(marg['b'][1], [3 / 15, 5 / 15, 7 / 15])


class TestModelSpec:

	def test_grid_product(self):
		comp = ComponentSpec('c', PRIOR, period_scale=1.0)
		spec = ModelSpec(np.arange(1.0, 11.0), np.zeros(10), [comp], grid_nodes=3,
			period_axis=GridAxis('period', (4.0, 5.0)))
		nodes = spec.grid_nodes_list()
		assert len(nodes) == 2 * 3 * 3
		assert [ax.name for ax in spec.axes()] == ['period', 'psd:c', 'noise']
		assert nodes[0].alphas[0] == pytest.approx(2 * math.pi / 4.0)
		assert nodes[-1].alphas[0] == pytest.approx(2 * math.pi / 5.0)
		total = np.logaddexp.reduce([n.log_prior for n in nodes])
		assert total == pytest.approx(0.0, abs=1e-12)

	def test_explicit_levels_weighted_by_density(self):
		prior = ExponentialPrior(1.0, 0.5)
		axis = GridAxis.from_prior('noise', prior, levels=(0.5, 1.5))
		w = np.exp(axis.log_weights)
		assert w[0] / w[1] == pytest.approx(math.exp(prior.rate), rel=1e-12)

	def test_invalid_component(self):
		with pytest.raises(ConfigError):
			ComponentSpec('c', PRIOR)
		with pytest.raises(ConfigError):
			ComponentSpec('c', PRIOR, period=2.0, alpha=1.0)
		with pytest.raises(ModelError):
			ModelSpec([1.0, 2.0], [0.0, 1.0], [ComponentSpec('c', PRIOR, period_scale=1.0)])

	def test_invalid_data(self):
		comp = ComponentSpec('c', PRIOR, period=2.0)
		with pytest.raises(ModelError):
			ModelSpec([1.0, 2.0], [0.0], [comp])
		with pytest.raises(DomainError):
			ModelSpec([-1.0, 2.0], [0.0, 1.0], [comp])
		with pytest.raises(ModelError):
			ModelSpec([1.0, 2.0], [0.0, 1.0], [comp, comp])

	def test_collinear_fixed_effects(self):
		x = np.linspace(1.0, 5.0, 9)
		spec = ModelSpec(x, np.zeros(9), [ComponentSpec('c', PRIOR, period=2.0)],
			covariates={'const': np.full(9, 3.0)})
		with pytest.raises(ModelError):
			fit(spec)

	def test_standardized_trend(self):
		spec = ModelSpec([2.0, 4.0, 6.0], np.zeros(3), [ComponentSpec('c', PRIOR, period=2.0)], trend_degree=2)
		F = spec.fixed_design(spec.x)
		np.testing.assert_allclose(F, [[1, -1, 1], [1, 0, 0], [1, 1, 1]])
		assert spec.fixed_names == ['intercept', 'trend1', 'trend2']


@pytest.fixture
def seasonal_data():
	x = np.arange(1.0, 41.0) / 4.0
	data = simulate_dataset(x, [SgpParams.from_period(3.0, 0.2)], 0.3, intercept=1.0,
		boundary=[(1.0, -0.5)], seed=11)
	return data


@pytest.fixture
def seasonal_spec(seasonal_data):
	comp = ComponentSpec('season', PRIOR, period=3.0)
	return ModelSpec(seasonal_data.x, seasonal_data.y, [comp], grid_nodes=2, seed=5)


class TestForecast:

	def test_matches_fit_at_training_points(self, seasonal_spec):
		result = fit(seasonal_spec)
		fc = forecast(result, seasonal_spec, seasonal_spec.x)
		np.testing.assert_allclose(fc.mean, result.fitted_mean, rtol=1e-8, atol=1e-10)
		np.testing.assert_allclose(fc.sd, result.fitted_sd, rtol=1e-8, atol=1e-10)

	def test_prediction_points_reported(self, seasonal_data):
		comp = ComponentSpec('season', PRIOR, period=3.0)
		horizon = np.array([10.5, 11.0, 12.0])
		spec = ModelSpec(seasonal_data.x, seasonal_data.y, [comp], grid_nodes=2, prediction_x=horizon)
		result = fit(spec)
		n = seasonal_data.x.size
		assert result.x.size == n + 3
		assert np.all(np.isnan(result.y[n:]))
		assert result.observed.tolist() == [True] * n + [False] * 3
		fc = forecast(result, spec, horizon)
		np.testing.assert_allclose(fc.mean, result.fitted_mean[n:], rtol=1e-8, atol=1e-10)

	def test_representations_agree(self):
		alpha = 2 * math.pi / 5
		x = np.linspace(0.2, 10.0, 60)
		data = simulate_dataset(x, [SgpParams(alpha, 0.3)], 0.2, boundary=[(0.8, 0.3)], seed=4)
		ss = fit(single_node_spec(x, data.y, alpha, 0.3, 0.2))
		fem = fit(single_node_spec(x, data.y, alpha, 0.3, 0.2, representation='fem', r=40))
		assert np.max(np.abs(ss.fitted_mean - fem.fitted_mean)) < 0.02 * np.std(data.y)
		assert fem.domains == [(0.0, 10.0)]

	def test_fem_horizon_outside_domain(self):
		x = np.linspace(0.5, 5.0, 10)
		comp = ComponentSpec('c', PRIOR, alpha=1.0, representation='fem', r=8, domain=(0.0, 5.0),
			psd_levels=(0.5,))
		spec = ModelSpec(x, np.sin(x), [comp], noise_levels=(0.3,))
		result = fit(spec)
		with pytest.raises(DomainError):
			forecast(result, spec, [6.0])


class TestPosteriorSampling:

	def test_excess_summary(self, seasonal_spec):
		result = fit(seasonal_spec)
		hx = np.array([10.25, 10.5, 10.75])
		hy = np.array([1.0, 0.5, 0.0])
		a = excess_summary(result, seasonal_spec, hx, hy, n_samples=10000)
		b = excess_summary(result, seasonal_spec, hx, hy, n_samples=10000)
		np.testing.assert_array_equal(a, b)
		expected = forecast(result, seasonal_spec, hx).mean.sum() - hy.sum()
		assert abs(a.mean() - expected) < 3 * a.std() / math.sqrt(a.size)
		np.testing.assert_array_equal(a, excess_summary(result, seasonal_spec, hx, hy, n_samples=10000,
			include_noise=False))
		noisy = excess_summary(result, seasonal_spec, hx, hy, n_samples=10000, include_noise=True)
		assert noisy.std() > a.std()

	def test_excess_summary_arguments(self, seasonal_spec):
		result = fit(seasonal_spec)
		with pytest.raises(DomainError):
			excess_summary(result, seasonal_spec, [1.0, 2.0], [1.0])

	def test_sample_eta(self, seasonal_spec):
		result = fit(seasonal_spec)
		xs = np.array([2.0, 5.5])
		draws = sample_eta(result, seasonal_spec, xs, n_samples=4000)
		assert draws.shape == (4000, 2)
		np.testing.assert_array_equal(draws, sample_eta(result, seasonal_spec, xs, n_samples=4000))
		fc = forecast(result, seasonal_spec, xs)
		assert np.all(np.abs(draws.mean(axis=0) - fc.mean) < 4 * fc.sd / math.sqrt(4000))
		positive = sample_eta(result, seasonal_spec, xs, n_samples=10, scale='exp')
		assert np.all(positive > 0)
		with pytest.raises(DomainError):
			sample_eta(result, seasonal_spec, xs, scale='log')


class TestSimulation:

	def test_reproducible(self):
		x = np.linspace(0.0, 5.0, 11)
		a = simulate_dataset(x, [SgpParams(2.0), SgpParams(0.5)], 0.1, seed=3)
		b = simulate_dataset(x, [SgpParams(2.0), SgpParams(0.5)], 0.1, seed=3)
		np.testing.assert_array_equal(a.y, b.y)
		assert sorted(a.parts) == ['sgp1', 'sgp2']
		assert a.parts['sgp1'][0] == 0.0

	def test_noiseless(self):
		x = np.linspace(1.0, 5.0, 6)
		data = simulate_dataset(x, [SgpParams(1.0)], 0.0, intercept=2.0, trend=(0.5,), seed=1)
		np.testing.assert_array_equal(data.y, data.eta)
		np.testing.assert_allclose(data.eta - data.parts['sgp1'], 2.0 + 0.5 * x)


@pytest.mark.slow
def test_period_recovery():
	"""Period marginal mode over 50 simulated series of 114 points, default grid resolution."""
	x = np.arange(1.0, 115.0)
	periods = np.round(np.arange(6.0, 12.05, 0.1), 1)
	hits = 0
	for seed in range(50):
		data = simulate_dataset(x, [SgpParams.from_period(10.1, 0.02)], 0.3, boundary=[(1.0, 0.5)], seed=seed)
		comp = ComponentSpec('cycle', PsdPrior(u=1.0, p=0.5, h=50.0), period_scale=1.0)
		spec = ModelSpec(x, data.y, [comp], period_axis=GridAxis('period', tuple(periods)), seed=seed, threads=4)
		values, mass = fit(spec).axis_marginals['period']
		if abs(values[int(np.argmax(mass))] - 10.1) <= 0.2:
			hits += 1
	assert hits >= 45


def test_coarse_prior_axis_warns(caplog):
	prior = ExponentialPrior(u=1.0, p=0.5)
	with caplog.at_level('WARNING', logger='core.inference.model'):
		GridAxis.from_prior('noise', prior, n_nodes=3)
	assert 'at least 5' in caplog.text
	caplog.clear()
	with caplog.at_level('WARNING', logger='core.inference.model'):
		axis = GridAxis.from_prior('noise', prior, n_nodes=9)
	assert len(axis) == 9
	assert caplog.text == ''
