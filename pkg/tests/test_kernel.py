# -*- coding:utf-8 -*-
import math

import numpy as np
import pytest

from core import oracle
from core.errors import DomainError
from core.sgp.kernel import (SgpParams, BoundaryBasis, covariance, covariance_matrix, correlation, psd,
	half_sine_gap, apply_operator)
from core.sgp.statespace import noise_covariance


class TestSgpParams:

	def test_period_roundtrip(self):
		p = SgpParams.from_period(10.1, 2.0)
		assert p.period == pytest.approx(10.1, rel=1e-15)
		assert p.scale == pytest.approx((2.0 / p.alpha) ** 2)

	@pytest.mark.parametrize('alpha, sigma', [(0.0, 1.0), (1e-9, 1.0), (1.0, 0.0), (float('nan'), 1.0), (1.0, -1)])
	def test_invalid(self, alpha, sigma):
		with pytest.raises(DomainError):
			SgpParams(alpha, sigma)


class TestBoundaryBasis:

	def test_values_at_origin(self):
		B = BoundaryBasis(2.5)
		assert B.evaluate(0.0).tolist() == [1.0, 0.0]

	def test_operator_annihilates(self):
		B = BoundaryBasis(math.pi)
		xs = np.linspace(0, 7, 50)
		assert np.max(np.abs(B.apply_operator(xs))) < 1e-12

	def test_operator_on_callable_pair(self):
		a = 1.3
		xs = np.linspace(0, 5, 30)
		f = lambda x: x * np.sin(a * x)
		f2 = lambda x: 2 * a * np.cos(a * x) - a ** 2 * x * np.sin(a * x)
		np.testing.assert_allclose(apply_operator(a, f, f2, xs), 2 * a * np.cos(a * xs), atol=1e-12)
		with pytest.raises(DomainError):
			apply_operator(0.0, f, f2, xs)

	def test_derivative_matches_finite_difference(self):
		B = BoundaryBasis(1.7)
		x, h = 0.8, 1e-6
		fd = (B.evaluate(x + h) - B.evaluate(x - h)) / (2 * h)
		np.testing.assert_allclose(B.derivative(x), fd, atol=1e-8)

	def test_description(self):
		assert 'cos' in BoundaryBasis(1.0).description


class TestCovariance:

	def test_zero_at_origin(self):
		p = SgpParams(1.0, 1.0)
		for x in (0.0, 0.5, 3.0, 100.0):
			assert covariance(p, 0.0, x) == 0.0
			assert covariance(p, x, 0.0) == 0.0

	def test_diagonal_is_variance(self):
		p = SgpParams(1.0, 1.0)
		for x in (0.3, 1.0, 4.2):
			expected = (x / 2 - math.sin(2 * x) / 4) / p.alpha ** 2
			assert covariance(p, x, x) == pytest.approx(expected, abs=1e-14)
			assert covariance(p, x, x) == pytest.approx(noise_covariance(p, x)[0, 0], rel=1e-12)

	def test_matches_quadrature_reference(self):
		p = SgpParams(2 * math.pi, 1.0)
		ref = oracle.cov_by_quadrature(p, 0.3, 0.7)
		assert abs(covariance(p, 0.3, 0.7) - ref) < 1e-10

	def test_symmetry(self):
		p = SgpParams(math.pi, 1.3)
		rng = np.random.default_rng(3)
		x1, x2 = rng.uniform(0, 10, (2, 100))
		np.testing.assert_array_equal(covariance(p, x1, x2), covariance(p, x2, x1))

	def test_scaling(self):
		rng = np.random.default_rng(4)
		x1, x2 = rng.uniform(0, 10, (2, 50))
		base = covariance(SgpParams(2.0, 1.0), x1, x2)
		scaled = covariance(SgpParams(2.0, 3.0), x1, x2)
		np.testing.assert_allclose(scaled, 9.0 * base, rtol=1e-13, atol=1e-15)

	@pytest.mark.parametrize('x1, x2', [(-1.0, 1.0), (1.0, float('inf')), (float('nan'), 0.0)])
	def test_invalid_locations(self, x1, x2):
		with pytest.raises(DomainError):
			covariance(SgpParams(1.0), x1, x2)

	@pytest.mark.parametrize('alpha', [math.pi / 4, math.pi, 2 * math.pi, 8 * math.pi])
	@pytest.mark.parametrize('sigma', [0.5, 1.0, 3.0])
	def test_quadrature_grid(self, alpha, sigma):
		"""Closed form agrees with the white-noise integral on a 20 x 20 grid."""
		p = SgpParams(alpha, sigma)
		xs = np.linspace(0, 10, 20)
		worst = 0.0
		for i, x1 in enumerate(xs):
			for x2 in xs[i:]:
				worst = max(worst, abs(covariance(p, x1, x2) - oracle.cov_by_quadrature(p, x1, x2)))
		assert worst < 1e-8 * p.scale


class TestCovarianceMatrix:

	def test_single_origin(self):
		assert covariance_matrix(SgpParams(1.0), [0.0]).tolist() == [[0.0]]

	def test_elementwise(self):
		p = SgpParams(math.pi, 1.0)
		K = covariance_matrix(p, [1.0, 2.0])
		for i, a in enumerate([1.0, 2.0]):
			for j, b in enumerate([1.0, 2.0]):
				assert K[i, j] == covariance(p, a, b)

	def test_positive_semidefinite(self):
		K = covariance_matrix(SgpParams(2 * math.pi), np.linspace(0, 5, 10))
		np.testing.assert_array_equal(K, K.T)
		assert np.min(np.linalg.eigvalsh(K)) >= -1e-10


class TestCorrelation:

	def test_unit_at_reference(self):
		p = SgpParams(2 * math.pi)
		rho = correlation(p, 5.0, np.array([0.0, 5.0]))
		assert rho[0] == 0.0
		assert rho[1] == pytest.approx(1.0, abs=1e-14)

	def test_reference_must_be_positive(self):
		with pytest.raises(DomainError):
			correlation(SgpParams(1.0), 0.0, [1.0])


class TestPsd:

	def test_full_period(self):
		p = SgpParams(2 * math.pi, 1.0)
		assert psd(p, 1.0) == pytest.approx(math.sqrt(0.5) / (2 * math.pi), rel=1e-14)

	def test_vanishing_sigma(self):
		assert psd(SgpParams(1.0, 1e-12), 1.0) < 1e-11

	def test_matches_noise_covariance(self):
		p = SgpParams(math.pi, 2.0)
		assert psd(p, 0.5) == pytest.approx(math.sqrt(noise_covariance(p, 0.5)[0, 0]), rel=1e-12)

	def test_random_identity(self):
		rng = np.random.default_rng(11)
		for _ in range(100):
			p = SgpParams(rng.uniform(0.05, 20), rng.uniform(0.1, 5))
			h = rng.uniform(0.01, 10)
			ref = math.sqrt(noise_covariance(p, h)[0, 0])
			assert abs(psd(p, h) - ref) / ref < 1e-12

	def test_monotone(self):
		p = SgpParams(2 * math.pi, 1.0)
		values = psd(p, np.linspace(0.01, 5, 500))
		assert np.all(np.diff(values) > -1e-12)

	def test_small_step_series(self):
		"""Series and direct evaluation agree around the switch."""
		alpha = 3.0
		h = 1e-2 / (2 * alpha)
		below = half_sine_gap(alpha, h * (1 - 1e-9))
		above = half_sine_gap(alpha, h * (1 + 1e-9))
		assert below == pytest.approx(above, rel=1e-6)

	@pytest.mark.parametrize('h', [0.0, -1.0])
	def test_invalid_step(self, h):
		with pytest.raises(DomainError):
			psd(SgpParams(1.0), h)
