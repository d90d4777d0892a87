# -*- coding:utf-8 -*-
import os
import json
import logging

from .errors import ConfigError

LOG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']


class Settings():
	'''
	Library-wide numerical defaults. Values are read once from settings.json and
	may be overridden at runtime through the validating setters.
	'''

	def __init__(self, **kwargs):
		self.quad_nodes = kwargs['quad_nodes']
		self.psd_grid_nodes = kwargs['psd_grid_nodes']
		self.grid_quantiles = kwargs['grid_quantiles']
		self.interval_draws = kwargs['interval_draws']
		self.merge_tol = kwargs['merge_tol']
		self.cond_limit = kwargs['cond_limit']
		self.prior_variance = kwargs['prior_variance']
		self.eval_points = kwargs['eval_points']
		self.threads = kwargs['threads']
		self.log_level = kwargs.get('log_level', 'INFO')

	@property
	def quad_nodes(self):
		return self._quad_nodes

	@quad_nodes.setter
	def quad_nodes(self, n):
		if int(n) < 2:
			raise ConfigError('quad_nodes must be >= 2, got {}'.format(n))
		self._quad_nodes = int(n)

	@property
	def psd_grid_nodes(self):
		return self._psd_grid_nodes

	@psd_grid_nodes.setter
	def psd_grid_nodes(self, n):
		if int(n) < 1:
			raise ConfigError('psd_grid_nodes must be >= 1, got {}'.format(n))
		self._psd_grid_nodes = int(n)

	@property
	def grid_quantiles(self):
		return self._grid_quantiles

	@grid_quantiles.setter
	def grid_quantiles(self, bounds):
		lo, hi = bounds
		if not 0 < lo <= hi < 1:
			raise ConfigError('grid_quantiles must satisfy 0 < lo <= hi < 1, got {}'.format(bounds))
		self._grid_quantiles = (float(lo), float(hi))

	@property
	def interval_draws(self):
		return self._interval_draws

	@interval_draws.setter
	def interval_draws(self, n):
		if int(n) < 100:
			raise ConfigError('interval_draws must be >= 100, got {}'.format(n))
		self._interval_draws = int(n)

	@property
	def merge_tol(self):
		return self._merge_tol

	@merge_tol.setter
	def merge_tol(self, tol):
		if not tol >= 0:
			raise ConfigError('merge_tol must be >= 0, got {}'.format(tol))
		self._merge_tol = float(tol)

	@property
	def cond_limit(self):
		return self._cond_limit

	@cond_limit.setter
	def cond_limit(self, limit):
		if not limit > 1:
			raise ConfigError('cond_limit must be > 1, got {}'.format(limit))
		self._cond_limit = float(limit)

	@property
	def prior_variance(self):
		return self._prior_variance

	@prior_variance.setter
	def prior_variance(self, var):
		if not var > 0:
			raise ConfigError('prior_variance must be > 0, got {}'.format(var))
		self._prior_variance = float(var)

	@property
	def eval_points(self):
		return self._eval_points

	@eval_points.setter
	def eval_points(self, n):
		if int(n) < 2:
			raise ConfigError('eval_points must be >= 2, got {}'.format(n))
		self._eval_points = int(n)

	@property
	def threads(self):
		return self._threads

	@threads.setter
	def threads(self, n):
		if int(n) < 1:
			raise ConfigError('threads must be >= 1, got {}'.format(n))
		self._threads = int(n)

	@property
	def log_level(self):
		return self._log_level

	@log_level.setter
	def log_level(self, level):
		if level not in LOG_LEVELS:
			raise ConfigError('log_level must be one of {}, got {}'.format(LOG_LEVELS, level))
		self._log_level = level

	def as_dict(self):
		return {
			'quad_nodes': self.quad_nodes,
			'psd_grid_nodes': self.psd_grid_nodes,
			'grid_quantiles': list(self.grid_quantiles),
			'interval_draws': self.interval_draws,
			'merge_tol': self.merge_tol,
			'cond_limit': self.cond_limit,
			'prior_variance': self.prior_variance,
			'eval_points': self.eval_points,
			'threads': self.threads,
			'log_level': self.log_level,
		}


cfgFile = os.path.join(os.path.dirname(__file__), "settings.json")

with open(cfgFile, 'r') as cfg:
	prefs = json.load(cfg)

settings = Settings(**prefs)
