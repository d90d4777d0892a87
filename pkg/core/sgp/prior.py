# -*- coding:utf-8 -*-
"""
Interpretable priors for the sGP standard deviation.

An exponential prior is elicited through a threshold statement
P(theta > u) = p. For the sGP it is placed on the predictive SD sigma(h),
which is the linear map sigma(h) = sigma * sqrt(h/2 - sin(2 alpha h)/(4 alpha)) / alpha
of sigma and never refers to a location x. The prior on sigma follows by
rescaling the rate.
"""

import math
import logging
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from .kernel import MIN_ALPHA, half_sine_gap

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExponentialPrior:
	'''Exponential law with P(theta > u) = p'''
	u: float
	p: float

	def __post_init__(self):
		if not (math.isfinite(self.u) and self.u > 0):
			raise DomainError('threshold u must be finite and > 0, got {}'.format(self.u))
		if not 0 < self.p < 1:
			raise DomainError('probability p must lie in (0, 1), got {}'.format(self.p))

	@property
	def rate(self):
		return -math.log(self.p) / self.u

	def survival(self, t):
		return np.exp(-self.rate * np.asarray(t, dtype=float))

	def quantile(self, q):
		q = np.asarray(q, dtype=float)
		if np.any((q < 0) | (q >= 1)):
			raise DomainError('quantile level must lie in [0, 1)')
		return -np.log1p(-q) / self.rate

	def logpdf(self, t):
		t = np.asarray(t, dtype=float)
		return np.where(t >= 0, math.log(self.rate) - self.rate * t, -np.inf)

	def sample(self, rng, size=None):
		return rng.exponential(1.0 / self.rate, size=size)


@dataclass(frozen=True)
class PsdPrior(ExponentialPrior):
	'''Exponential prior on the h-unit predictive SD: P(sigma(h) > u) = p'''
	h: float = 1.0

	def __post_init__(self):
		super().__post_init__()
		if not (math.isfinite(self.h) and self.h > 0):
			raise DomainError('prediction unit h must be finite and > 0, got {}'.format(self.h))


def _psd_factor(alpha, h):
	'''sigma(h) / sigma'''
	gap = half_sine_gap(alpha, h)
	if not gap > 0:
		raise DomainError('h/2 - sin(2 alpha h)/(4 alpha) must be > 0 (alpha={}, h={})'.format(alpha, h))
	return math.sqrt(gap) / alpha


def sigma_to_psd(sigma, alpha, h):
	return np.asarray(sigma, dtype=float) * _psd_factor(alpha, h)


def psd_to_sigma(psd_value, alpha, h):
	return np.asarray(psd_value, dtype=float) / _psd_factor(alpha, h)


def to_sigma_rate(prior, alpha):
	'''Rate of the exponential prior on sigma induced by the prior on sigma(h)'''
	if not (math.isfinite(alpha) and alpha >= MIN_ALPHA):
		raise DomainError('alpha must be finite and >= {}, got {}'.format(MIN_ALPHA, alpha))
	return prior.rate * _psd_factor(alpha, prior.h)


def median_psd(prior):
	'''Median of the exponential prior on sigma(h)'''
	return math.log(2) / prior.rate


def quantile_grid(prior, n_nodes, bounds=(0.05, 0.95)):
	'''
	n_nodes prior quantiles equally spaced in probability between bounds. Each
	node stands for an equal share of prior mass. A single node sits at the
	median.
	'''
	n_nodes = int(n_nodes)
	if n_nodes < 1:
		raise DomainError('n_nodes must be >= 1')
	if n_nodes == 1:
		levels = np.array([0.5])
	else:
		levels = np.linspace(bounds[0], bounds[1], n_nodes)
	return prior.quantile(levels)
