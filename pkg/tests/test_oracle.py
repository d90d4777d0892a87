# -*- coding:utf-8 -*-
import math

import numpy as np
import pytest

from core import oracle
from core.errors import AccuracyError, DomainError
from core.sgp.kernel import SgpParams


def test_rule_exact_for_polynomials():
	rule = oracle.QuadratureRule(0.0, 2.0, 3)
	assert rule.integrate(lambda t: 5 * t ** 9 - t ** 2) == pytest.approx(2.0 ** 10 / 2 - 8.0 / 3, rel=1e-14)
	assert rule.weights.sum() == pytest.approx(2.0, rel=1e-15)
	assert rule.refined().segments == 6


def test_richardson_flags_underresolved_integrand():
	rule = oracle.QuadratureRule(0.0, 10.0, 1)
	with pytest.raises(AccuracyError) as info:
		oracle.richardson(rule, lambda t: np.sin(40 * t), 1e-12)
	assert info.value.estimate > 0


def test_covariance_closed_form_at_a_period():
	# alpha x1 = 2 pi: the integral is (x1 / 2) cos(alpha (x2 - x1)) times (sigma / alpha)^2
	p = SgpParams(math.pi, 2.0)
	val = oracle.cov_by_quadrature(p, 2.0, 2.25)
	assert val == pytest.approx(p.scale * math.cos(math.pi * 0.25), rel=1e-12)
	assert oracle.cov_by_quadrature(p, 0.0, 3.0) == 0.0


def test_covariance_arguments():
	p = SgpParams(2 * math.pi)
	with pytest.raises(DomainError):
		oracle.cov_by_quadrature(p, 0.7, 0.3)
	with pytest.raises(DomainError):
		oracle.cov_by_quadrature(p, 3.0, 4.0, segments=4)


def test_noise_covariance_small_step():
	p = SgpParams(1.0)
	d = 1e-3
	S = oracle.noise_cov_by_quadrature(p, d)
	np.testing.assert_allclose(S, [[d ** 3 / 3, d ** 2 / 2], [d ** 2 / 2, d]], rtol=1e-5)
	np.testing.assert_array_equal(oracle.noise_cov_by_quadrature(p, 0.0), np.zeros((2, 2)))


def test_dense_condition():
	P = np.diag([1.0, 4.0])
	A = np.array([[1.0, 0.0]])
	mean, cov = oracle.dense_condition(P, A, [2.0], 1.0)
	np.testing.assert_allclose(mean, [1.0, 0.0])
	np.testing.assert_allclose(cov, np.diag([0.5, 0.25]))
	mean, cov = oracle.dense_condition(P, A, [2.0], math.inf)
	np.testing.assert_allclose(mean, 0.0)
	np.testing.assert_allclose(cov, np.linalg.inv(P))
	with pytest.raises(DomainError):
		oracle.dense_condition(P, A, [1.0, 2.0], 1.0)


def test_ode_propagate():
	alpha = 3.0
	z = oracle.ode_propagate(alpha, [1.0, 0.0], 0.8)
	np.testing.assert_allclose(z, [math.cos(2.4), -alpha * math.sin(2.4)], atol=1e-10)
	np.testing.assert_array_equal(oracle.ode_propagate(alpha, [0.5, 1.0], 0.0), [0.5, 1.0])


def test_inner_product():
	val = oracle.inner_product(np.sin, np.sin, [0.0, math.pi / 2, math.pi])
	assert val == pytest.approx(math.pi / 2, rel=1e-12)


def test_empirical_covariance():
	rng = np.random.default_rng(1)
	samples = rng.standard_normal((100000, 3)) * [1.0, 2.0, 0.5]
	cov, se = oracle.empirical_covariance(samples)
	assert np.all(np.abs(cov - np.diag([1.0, 4.0, 0.25])) <= 5 * se)
