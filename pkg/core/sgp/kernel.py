# -*- coding:utf-8 -*-
"""
Closed-form mathematics of the seasonal Gaussian process sGP(alpha, sigma):
the zero-mean process solving g'' + alpha^2 g = sigma * white noise with
g(0) = g'(0) = 0.
"""

import math
import logging
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

log = logging.getLogger(__name__)

MIN_ALPHA = 1e-8

# below this value of 2*alpha*h the series of t - sin(t) is used
_SERIES_CUTOFF = 1e-2


def _check_locations(x, name='x'):
	x = np.asarray(x, dtype=float)
	if not np.all(np.isfinite(x)):
		raise DomainError('{} must be finite'.format(name))
	if np.any(x < 0):
		raise DomainError('{} must be nonnegative, the process is defined on x >= 0'.format(name))
	return x


def half_sine_gap(alpha, h):
	'''
	h/2 - sin(2 alpha h) / (4 alpha), the variance factor shared by the
	predictive SD and the state-space noise. Evaluated through a series when
	2 alpha h is small to avoid cancellation.
	'''
	h = np.asarray(h, dtype=float)
	t = 2.0 * alpha * h
	direct = h / 2.0 - np.sin(t) / (4.0 * alpha)
	t2 = t * t
	series = t * t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0))) / (4.0 * alpha)
	out = np.where(np.abs(t) < _SERIES_CUTOFF, series, direct)
	if out.ndim == 0:
		return float(out)
	return out


@dataclass(frozen=True)
class SgpParams:
	'''
	alpha : frequency in radians per unit of x (period 2*pi/alpha)
	sigma : SD parameter, same units as L g
	'''
	alpha: float
	sigma: float = 1.0

	def __post_init__(self):
		if not (math.isfinite(self.alpha) and self.alpha >= MIN_ALPHA):
			raise DomainError('alpha must be finite and >= {}, got {}'.format(MIN_ALPHA, self.alpha))
		if not (math.isfinite(self.sigma) and self.sigma > 0):
			raise DomainError('sigma must be finite and > 0, got {}'.format(self.sigma))

	@classmethod
	def from_period(cls, period, sigma=1.0):
		if not (math.isfinite(period) and period > 0):
			raise DomainError('period must be finite and > 0, got {}'.format(period))
		return cls(2 * math.pi / period, sigma)

	@property
	def period(self):
		return 2 * math.pi / self.alpha

	@property
	def scale(self):
		'''(sigma / alpha)^2'''
		return (self.sigma / self.alpha) ** 2

	def with_sigma(self, sigma):
		return SgpParams(self.alpha, sigma)


class BoundaryBasis():
	'''
	The null space of L = d2/dx2 + alpha^2: span{cos(alpha x), sin(alpha x)}.
	Columns are always ordered (cos, sin).
	'''

	def __init__(self, alpha):
		if not (math.isfinite(alpha) and alpha >= MIN_ALPHA):
			raise DomainError('alpha must be finite and >= {}, got {}'.format(MIN_ALPHA, alpha))
		self.alpha = float(alpha)

	def __repr__(self):
		return 'BoundaryBasis(alpha={!r})'.format(self.alpha)

	@property
	def description(self):
		return '{{cos({a:g} x), sin({a:g} x)}}'.format(a=self.alpha)

	def evaluate(self, x):
		ax = self.alpha * np.asarray(x, dtype=float)
		return np.stack([np.cos(ax), np.sin(ax)], axis=-1)

	def derivative(self, x):
		a = self.alpha
		ax = a * np.asarray(x, dtype=float)
		return np.stack([-a * np.sin(ax), a * np.cos(ax)], axis=-1)

	def second_derivative(self, x):
		return -self.alpha ** 2 * self.evaluate(x)

	def apply_operator(self, x):
		'''L applied to both functions; identically zero'''
		return apply_operator(self.alpha, self.evaluate, self.second_derivative, x)


def apply_operator(alpha, value, second_derivative, x):
	'''
	L f = f'' + alpha^2 f at x, for f given by the callables value and
	second_derivative. Their outputs may carry trailing axes (several functions).
	'''
	if not (math.isfinite(alpha) and alpha >= MIN_ALPHA):
		raise DomainError('alpha must be finite and >= {}, got {}'.format(MIN_ALPHA, alpha))
	x = np.asarray(x, dtype=float)
	return np.asarray(second_derivative(x), dtype=float) + alpha ** 2 * np.asarray(value(x), dtype=float)


def _covariance(alpha, lo, hi):
	return lo / 2.0 * np.cos(alpha * (hi - lo)) - np.cos(alpha * hi) * np.sin(alpha * lo) / (2.0 * alpha)


def covariance(params, x1, x2):
	'''
	Cov[g(x1), g(x2)] for g ~ sGP(params). Arguments may come in any order and
	may be arrays (broadcast together).
	'''
	x1 = _check_locations(x1, 'x1')
	x2 = _check_locations(x2, 'x2')
	lo = np.minimum(x1, x2)
	hi = np.maximum(x1, x2)
	c = params.scale * _covariance(params.alpha, lo, hi)
	if np.ndim(c) == 0:
		return float(c)
	return c


def covariance_matrix(params, xs):
	'''Dense covariance matrix of g at the locations xs'''
	xs = _check_locations(np.atleast_1d(xs), 'xs')
	K = covariance(params, xs[:, None], xs[None, :])
	return np.asarray(K, dtype=float).reshape(len(xs), len(xs))


def correlation(params, x_ref, xs):
	'''Corr[g(x_ref), g(x)] for every x in xs'''
	xs = _check_locations(np.atleast_1d(xs), 'xs')
	if not x_ref > 0:
		raise DomainError('reference point must be > 0, the process is degenerate at 0')
	num = covariance(params, x_ref, xs)
	den = np.sqrt(covariance(params, x_ref, x_ref) * covariance(params, xs, xs))
	with np.errstate(divide='ignore', invalid='ignore'):
		rho = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
	return rho


def psd(params, h):
	'''
	Predictive standard deviation SD[g(x + h) | g(x), g'(x)]. Does not depend
	on x.
	'''
	h_arr = np.asarray(h, dtype=float)
	if not np.all(np.isfinite(h_arr)) or np.any(h_arr <= 0):
		raise DomainError('prediction unit h must be finite and > 0, got {}'.format(h))
	out = params.sigma / params.alpha * np.sqrt(half_sine_gap(params.alpha, h_arr))
	if np.ndim(out) == 0:
		return float(out)
	return out
