# -*- coding:utf-8 -*-
"""
Model description for Gaussian-likelihood fits

	y_i = v_i^T beta + sum_l [ u_l1 cos(alpha_l x_i) + u_l2 sin(alpha_l x_i) + g_l(x_i) ] + e_i

with independent sGP components g_l, vague normal priors on the fixed effects
beta and on the boundary coefficients u, e_i ~ N(0, sigma_e^2), and discrete
grids over the hyperparameters (shared period, per-component predictive SD,
noise SD).
"""

import math
import itertools
import logging
from enum import Enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..errors import ConfigError, DomainError, ModelError
from ..fem.basis import Family
from ..settings import settings
from ..sgp.kernel import MIN_ALPHA
from ..sgp.prior import ExponentialPrior, PsdPrior, psd_to_sigma, quantile_grid

log = logging.getLogger(__name__)

MAX_TREND_DEGREE = 3

# fewer quantile nodes than this misplace the prior mass of a PSD or noise axis
MIN_PRIOR_NODES = 5


class Representation(Enum):
	STATE_SPACE = 'statespace'
	FEM = 'fem'

	@classmethod
	def parse(cls, value):
		if isinstance(value, cls):
			return value
		try:
			return cls(str(value).lower())
		except ValueError:
			raise ConfigError('unknown representation {!r}, expected one of {}'.format(
				value, [r.value for r in cls]))


@dataclass(frozen=True)
class ComponentSpec:
	'''
	One sGP component. Exactly one of period, alpha or period_scale is set;
	period_scale ties the component to the shared period axis (period = scale * c).
	'''
	name: str
	prior: PsdPrior
	period: Optional[float] = None
	alpha: Optional[float] = None
	period_scale: Optional[float] = None
	representation: Representation = Representation.STATE_SPACE
	family: Family = Family.SEASONAL
	r: int = 30
	domain: Optional[Tuple[float, float]] = None
	psd_levels: Optional[Tuple[float, ...]] = None
	boundary: bool = True

	def __post_init__(self):
		given = [v is not None for v in (self.period, self.alpha, self.period_scale)]
		if sum(given) != 1:
			raise ConfigError('component {!r}: give exactly one of period, alpha, period_scale'.format(self.name))
		if self.period is not None and not self.period > 0:
			raise ConfigError('component {!r}: period must be > 0'.format(self.name))
		if self.alpha is not None and not self.alpha >= MIN_ALPHA:
			raise ConfigError('component {!r}: alpha must be >= {}'.format(self.name, MIN_ALPHA))
		if self.period_scale is not None and not self.period_scale > 0:
			raise ConfigError('component {!r}: period_scale must be > 0'.format(self.name))
		object.__setattr__(self, 'representation', Representation.parse(self.representation))
		object.__setattr__(self, 'family', Family.parse(self.family))
		if self.psd_levels is not None:
			levels = tuple(float(v) for v in self.psd_levels)
			if not levels or min(levels) <= 0:
				raise ConfigError('component {!r}: psd_levels must be non-empty and > 0'.format(self.name))
			object.__setattr__(self, 'psd_levels', levels)

	@property
	def tied(self):
		return self.period_scale is not None

	def alpha_at(self, c=None):
		'''Frequency of the component for a shared period value c'''
		if self.alpha is not None:
			return float(self.alpha)
		if self.period is not None:
			return 2 * math.pi / self.period
		if c is None:
			raise ModelError('component {!r} is tied to the period grid but no period was given'.format(self.name))
		return 2 * math.pi / (self.period_scale * c)

	def sigma_at(self, psd_level, c=None):
		return float(psd_to_sigma(psd_level, self.alpha_at(c), self.prior.h))


@dataclass(frozen=True)
class GridAxis:
	'''Discrete hyperparameter values with prior weights (normalized on use)'''
	name: str
	values: Tuple[float, ...]
	weights: Optional[Tuple[float, ...]] = None

	def __post_init__(self):
		values = tuple(float(v) for v in self.values)
		if not values:
			raise ConfigError('grid axis {!r} is empty'.format(self.name))
		object.__setattr__(self, 'values', values)
		if self.weights is not None:
			weights = tuple(float(w) for w in self.weights)
			if len(weights) != len(values):
				raise ConfigError('grid axis {!r}: {} weights for {} values'.format(self.name, len(weights), len(values)))
			if min(weights) < 0 or sum(weights) <= 0:
				raise ConfigError('grid axis {!r}: weights must be >= 0 with a positive sum'.format(self.name))
			object.__setattr__(self, 'weights', weights)

	def __len__(self):
		return len(self.values)

	@property
	def log_weights(self):
		if self.weights is None:
			return np.full(len(self.values), -math.log(len(self.values)))
		w = np.asarray(self.weights)
		with np.errstate(divide='ignore'):
			return np.log(w / w.sum())

	@classmethod
	def from_prior(cls, name, prior, n_nodes=None, levels=None):
		'''
		Axis for a continuous exponential prior: equal-mass quantile nodes, or
		explicit levels weighted by the prior density.
		'''
		if levels is not None:
			values = tuple(float(v) for v in levels)
			logw = prior.logpdf(np.asarray(values))
			weights = np.exp(logw - np.max(logw))
			return cls(name, values, tuple(weights))
		if n_nodes is None:
			n_nodes = settings.psd_grid_nodes
		if n_nodes < MIN_PRIOR_NODES:
			log.warning('grid axis %s: %d quantile nodes leave most of the prior mass between nodes; '
				'use at least %d', name, n_nodes, MIN_PRIOR_NODES)
		values = quantile_grid(prior, n_nodes, settings.grid_quantiles)
		return cls(name, tuple(values))


@dataclass(frozen=True)
class GridNode:
	index: int
	period: Optional[float]
	psd_levels: Tuple[float, ...]
	sigmas: Tuple[float, ...]
	alphas: Tuple[float, ...]
	noise_sd: float
	log_prior: float


@dataclass
class ModelSpec:
	'''
	x, y : training data (x >= 0)
	components : sGP components
	intercept, trend_degree : polynomial fixed effects in x (trend up to cubic,
		standardized over the training range)
	covariates : extra fixed-effect columns, name -> values at x
	noise_prior : exponential prior on the noise SD, or noise_levels explicitly
	period_axis : shared period grid for tied components
	prediction_x / prediction_covariates : extra evaluation points reported by fit
	'''
	x: np.ndarray
	y: np.ndarray
	components: List[ComponentSpec]
	intercept: bool = True
	trend_degree: int = 0
	covariates: Dict[str, np.ndarray] = field(default_factory=dict)
	fixed_prior_var: float = field(default_factory=lambda: settings.prior_variance)
	boundary_prior_var: float = field(default_factory=lambda: settings.prior_variance)
	noise_prior: ExponentialPrior = field(default_factory=lambda: ExponentialPrior(1.0, 0.5))
	noise_levels: Optional[Tuple[float, ...]] = None
	period_axis: Optional[GridAxis] = None
	grid_nodes: int = field(default_factory=lambda: settings.psd_grid_nodes)
	prediction_x: np.ndarray = field(default_factory=lambda: np.zeros(0))
	prediction_covariates: Dict[str, np.ndarray] = field(default_factory=dict)
	seed: int = 0
	threads: int = field(default_factory=lambda: settings.threads)

	def __post_init__(self):
		self.x = np.asarray(self.x, dtype=float).ravel()
		self.y = np.asarray(self.y, dtype=float).ravel()
		self.prediction_x = np.asarray(self.prediction_x, dtype=float).ravel()
		if self.x.size != self.y.size:
			raise ModelError('x and y differ in length ({} vs {})'.format(self.x.size, self.y.size))
		if self.x.size == 0:
			raise ModelError('no training data')
		for name, arr in (('x', self.x), ('y', self.y), ('prediction_x', self.prediction_x)):
			if not np.all(np.isfinite(arr)):
				raise ModelError('{} contains non-finite values'.format(name))
		if np.any(self.x < 0) or np.any(self.prediction_x < 0):
			raise DomainError('locations must be nonnegative')
		if not self.components:
			raise ModelError('at least one sGP component is required')
		names = [c.name for c in self.components]
		if len(set(names)) != len(names):
			raise ModelError('component names must be unique: {}'.format(names))
		if not 0 <= int(self.trend_degree) <= MAX_TREND_DEGREE:
			raise ModelError('trend_degree must lie in 0..{}'.format(MAX_TREND_DEGREE))
		self.trend_degree = int(self.trend_degree)
		if not (self.fixed_prior_var > 0 and self.boundary_prior_var > 0):
			raise ModelError('prior variances must be > 0')
		if any(c.tied for c in self.components) and self.period_axis is None:
			raise ModelError('components tied to the period grid need a period axis')
		for name, values in self.covariates.items():
			values = np.asarray(values, dtype=float).ravel()
			if values.size != self.x.size or not np.all(np.isfinite(values)):
				raise ModelError('covariate {!r} must be finite with one value per observation'.format(name))
			self.covariates[name] = values
		if self.noise_levels is not None:
			self.noise_levels = tuple(float(v) for v in self.noise_levels)
			if not self.noise_levels or min(self.noise_levels) <= 0:
				raise ModelError('noise_levels must be non-empty and > 0')

	@property
	def n(self):
		return self.x.size

	@property
	def trend_center(self):
		return (self.x.min() + self.x.max()) / 2.0

	@property
	def trend_scale(self):
		half = (self.x.max() - self.x.min()) / 2.0
		return half if half > 0 else 1.0

	@property
	def fixed_names(self):
		names = []
		if self.intercept:
			names.append('intercept')
		names += ['trend{}'.format(p) for p in range(1, self.trend_degree + 1)]
		names += sorted(self.covariates)
		return names

	def fixed_design(self, x, covariates=None):
		'''Dense fixed-effect columns at x, in the order of fixed_names'''
		x = np.asarray(x, dtype=float).ravel()
		cols = []
		if self.intercept:
			cols.append(np.ones(x.size))
		u = (x - self.trend_center) / self.trend_scale
		for p in range(1, self.trend_degree + 1):
			cols.append(u ** p)
		if self.covariates:
			if covariates is None:
				raise DomainError('covariate values {} are required at these points'.format(sorted(self.covariates)))
			for name in sorted(self.covariates):
				if name not in covariates:
					raise DomainError('missing covariate {!r}'.format(name))
				values = np.asarray(covariates[name], dtype=float).ravel()
				if values.size != x.size:
					raise DomainError('covariate {!r} has {} values for {} points'.format(name, values.size, x.size))
				cols.append(values)
		if not cols:
			return np.zeros((x.size, 0))
		return np.column_stack(cols)

	def check_identifiable(self):
		F = self.fixed_design(self.x, self.covariates)
		if F.shape[1] and np.linalg.matrix_rank(F) < F.shape[1]:
			raise ModelError('fixed effects {} are collinear on the training data'.format(self.fixed_names))

	def axes(self):
		'''Grid axes in node order: period (if any), one PSD axis per component, noise'''
		out = []
		if any(c.tied for c in self.components):
			out.append(self.period_axis)
		for comp in self.components:
			out.append(GridAxis.from_prior('psd:' + comp.name, comp.prior, self.grid_nodes, comp.psd_levels))
		out.append(GridAxis.from_prior('noise', self.noise_prior, self.grid_nodes, self.noise_levels))
		return out

	def grid_nodes_list(self):
		'''Cartesian product of the axes as GridNode records'''
		axes = self.axes()
		has_period = any(c.tied for c in self.components)
		logw = [ax.log_weights for ax in axes]
		nodes = []
		for index, combo in enumerate(itertools.product(*[range(len(ax)) for ax in axes])):
			pos = 0
			period = None
			if has_period:
				period = axes[0].values[combo[0]]
				pos = 1
			levels = tuple(axes[pos + l].values[combo[pos + l]] for l in range(len(self.components)))
			alphas = tuple(c.alpha_at(period) for c in self.components)
			sigmas = tuple(c.sigma_at(lv, period) for c, lv in zip(self.components, levels))
			noise = axes[-1].values[combo[-1]]
			log_prior = float(sum(lw[i] for lw, i in zip(logw, combo)))
			nodes.append(GridNode(index, period, levels, sigmas, alphas, noise, log_prior))
		return nodes

	def deviations(self):
		notes = ['observation-level random effects are folded into the Gaussian noise variance']
		if self.trend_degree > 0:
			notes.append('trend modeled as a degree-{} polynomial fixed effect'.format(self.trend_degree))
		return notes
