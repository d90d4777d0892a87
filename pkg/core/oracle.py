# -*- coding:utf-8 -*-
"""
Brute-force references for checking the closed forms: composite
Gauss-Legendre quadrature of the white-noise integrals, dense Gaussian
conditioning, ODE propagation and empirical covariances of samples.

Nothing here calls the kernel, state-space or finite element code it is
used to check.
"""

import math
import logging
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import AccuracyError, ConditioningError, DomainError

log = logging.getLogger(__name__)

QUAD_TOL = 1e-12
GAUSS_NODES = 16


@dataclass(frozen=True)
class QuadratureRule:
	'''Composite Gauss-Legendre rule on [a, b] with equal segments'''
	a: float
	b: float
	segments: int
	order: int = GAUSS_NODES

	def __post_init__(self):
		if not self.b >= self.a:
			raise DomainError('quadrature interval [{}, {}] is reversed'.format(self.a, self.b))
		if int(self.segments) < 1:
			raise DomainError('segments must be >= 1, got {}'.format(self.segments))

	@property
	def nodes_weights(self):
		t, w = np.polynomial.legendre.leggauss(self.order)
		edges = np.linspace(self.a, self.b, int(self.segments) + 1)
		half = np.diff(edges)[:, None] / 2
		mid = (edges[:-1, None] + edges[1:, None]) / 2
		return (mid + half * t).ravel(), (half * w).ravel()

	@property
	def nodes(self):
		return self.nodes_weights[0]

	@property
	def weights(self):
		return self.nodes_weights[1]

	def integrate(self, f):
		'''Sum of f(nodes) * weights; f may return (..., n_nodes) arrays'''
		x, w = self.nodes_weights
		return np.asarray(f(x)) @ w

	def refined(self):
		return QuadratureRule(self.a, self.b, 2 * int(self.segments), self.order)


def min_segments(alpha, length):
	'''Four segments per half period of the integrand, at least four'''
	return max(4, 4 * int(math.ceil(alpha * length / math.pi)))


def richardson(rule, f, tol, scale=1.0):
	'''
	Integral of f on the refined rule; the step-halving difference estimates
	the error and must stay below tol * scale / 10.
	'''
	coarse = rule.integrate(f)
	fine = rule.refined().integrate(f)
	estimate = float(np.max(np.abs(fine - coarse)))
	if estimate > tol * scale / 10:
		raise AccuracyError('quadrature with {} segments did not converge'.format(rule.segments), estimate)
	return fine


def cov_by_quadrature(params, x1, x2, segments=None, tol=QUAD_TOL):
	'''
	integral_0^x1 (sigma/alpha)^2 sin(alpha (x1 - t)) sin(alpha (x2 - t)) dt
	for 0 <= x1 <= x2
	'''
	alpha, sigma = params.alpha, params.sigma
	if not (0 <= x1 <= x2):
		raise DomainError('need 0 <= x1 <= x2, got x1={}, x2={}'.format(x1, x2))
	if x1 == 0:
		return 0.0
	need = int(math.ceil(alpha * x1 / math.pi)) * 4
	if segments is None:
		segments = max(need, 4)
	elif segments < need:
		raise DomainError('at least {} segments are needed, got {}'.format(need, segments))
	scale = (sigma / alpha) ** 2
	rule = QuadratureRule(0.0, float(x1), segments)
	f = lambda t: scale * np.sin(alpha * (x1 - t)) * np.sin(alpha * (x2 - t))
	return float(richardson(rule, f, tol, max(1.0, scale, x1 * scale)))


def noise_cov_by_quadrature(params, d, segments=None, tol=QUAD_TOL):
	'''
	Covariance of the state increment over a step d from integrals of the
	impulse response (sin(a u)/a, cos(a u)), u = d - t.
	'''
	alpha, sigma = params.alpha, params.sigma
	if d < 0:
		raise DomainError('d must be >= 0, got {}'.format(d))
	if d == 0:
		return np.zeros((2, 2))
	if segments is None:
		segments = min_segments(alpha, d)
	rule = QuadratureRule(0.0, float(d), segments)

	def f(t):
		u = d - t
		s = np.sin(alpha * u) / alpha
		c = np.cos(alpha * u)
		return sigma ** 2 * np.stack([s * s, s * c, c * c])

	scale = sigma ** 2 * max(1.0, d, 1.0 / alpha ** 2)
	v00, v01, v11 = richardson(rule, f, tol, scale)
	return np.array([[v00, v01], [v01, v11]])


def dense_condition(prior_precision, design, y, noise_sd):
	'''
	Posterior mean and covariance of w ~ N(0, inv(prior_precision)) given
	y = design w + e, e ~ N(0, noise_sd^2 I), with dense algebra.
	'''
	P = np.asarray(prior_precision, dtype=float)
	A = np.asarray(design, dtype=float)
	y = np.asarray(y, dtype=float).ravel()
	if A.shape[0] != y.size or A.shape[1] != P.shape[0]:
		raise DomainError('shape mismatch: design {}, prior {}, y {}'.format(A.shape, P.shape, y.shape))
	if not noise_sd > 0:
		raise DomainError('noise_sd must be > 0, got {}'.format(noise_sd))
	if math.isinf(noise_sd):
		post, b = P, np.zeros(P.shape[0])
	else:
		post = P + A.T @ A / noise_sd ** 2
		b = A.T @ y / noise_sd ** 2
	try:
		cov = np.linalg.inv(post)
	except np.linalg.LinAlgError:
		raise ConditioningError('dense posterior precision is singular')
	cov = (cov + cov.T) / 2
	return cov @ b, cov


def ode_propagate(alpha, z0, d, forcing=None):
	'''
	State (g, g') after time d of g'' + alpha^2 g = forcing(t), started at z0,
	by adaptive Runge-Kutta integration.
	'''
	def rhs(t, z):
		f = 0.0 if forcing is None else forcing(t)
		return [z[1], -alpha ** 2 * z[0] + f]

	if d == 0:
		return np.asarray(z0, dtype=float)
	sol = integrate.solve_ivp(rhs, (0.0, d), np.asarray(z0, dtype=float), method='DOP853',
		rtol=1e-12, atol=1e-14)
	if not sol.success:
		raise AccuracyError('ODE integration failed: {}'.format(sol.message))
	return sol.y[:, -1]


def inner_product(f, g, breakpoints, tol=1e-11):
	'''integral of f * g by adaptive quadrature on each interval of breakpoints'''
	total = 0.0
	for lo, hi in zip(breakpoints[:-1], breakpoints[1:]):
		val, err = integrate.quad(lambda t: f(t) * g(t), lo, hi, epsabs=tol, epsrel=tol, limit=200)
		total += val
	return total


def empirical_covariance(samples):
	'''
	Sample covariance of the columns of samples (zero-mean process) and the
	standard error of every entry.
	'''
	X = np.asarray(samples, dtype=float)
	n = X.shape[0]
	prod = X[:, :, None] * X[:, None, :]
	cov = prod.mean(axis=0)
	se = prod.std(axis=0, ddof=1) / math.sqrt(n)
	return cov, se
