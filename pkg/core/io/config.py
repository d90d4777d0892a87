# -*- coding:utf-8 -*-
"""
JSON model configuration, validated against model_config.schema.json before
anything is built from it.
"""

import os
import json
import logging
from dataclasses import dataclass, field
from typing import Optional

import jsonschema
import numpy as np

from ..errors import ConfigError, SgpError
from ..sgp.prior import ExponentialPrior, PsdPrior
from ..inference.model import ComponentSpec, GridAxis, ModelSpec

log = logging.getLogger(__name__)

SCHEMA_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'model_config.schema.json')

with open(SCHEMA_FILE, 'r') as f:
	SCHEMA = json.load(f)


def expand_values(spec):
	'''A list of numbers, or {start, stop, step} inclusive of stop'''
	if isinstance(spec, dict):
		start, stop, step = spec['start'], spec['stop'], spec['step']
		if stop < start:
			raise ConfigError('range stop {} is below start {}'.format(stop, start))
		n = int(round((stop - start) / step)) + 1
		return tuple(float(v) for v in np.round(start + step * np.arange(n), 12))
	return tuple(float(v) for v in spec)


@dataclass
class ModelConfig:
	raw: dict
	base_dir: str = '.'
	horizon: tuple = field(default_factory=tuple)

	@property
	def dataset_path(self):
		ds = self.raw.get('dataset')
		if ds is None:
			return None
		path = ds['path']
		return path if os.path.isabs(path) else os.path.join(self.base_dir, path)

	@property
	def dataset_options(self):
		ds = self.raw.get('dataset', {})
		return dict(x_col=ds.get('x', 'x'), y_col=ds.get('y', 'y'),
			holdout_col=ds.get('holdout'), covariate_cols=ds.get('covariates'))

	@property
	def output_dir(self) -> Optional[str]:
		out = self.raw.get('output', {}).get('dir')
		if out is None or os.path.isabs(out):
			return out
		return os.path.join(self.base_dir, out)

	@property
	def seed(self):
		return int(self.raw.get('seed', 0))


def validate_config(raw):
	'''Raise ConfigError naming the first schema violation'''
	validator = jsonschema.Draft7Validator(SCHEMA)
	errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
	if errors:
		err = errors[0]
		where = '/'.join(str(p) for p in err.absolute_path) or '<root>'
		raise ConfigError('invalid configuration at {}: {}'.format(where, err.message))


def parse_config(raw, base_dir='.'):
	validate_config(raw)
	horizon = ()
	if 'forecast' in raw:
		horizon = expand_values(raw['forecast']['horizon'])
	return ModelConfig(raw, base_dir, horizon)


def load_config(path):
	try:
		with open(path, 'r') as f:
			raw = json.load(f)
	except json.JSONDecodeError as e:
		raise ConfigError('{} is not valid JSON: {}'.format(path, e))
	except OSError as e:
		raise ConfigError('cannot read configuration {}: {}'.format(path, e))
	return parse_config(raw, os.path.dirname(os.path.abspath(path)))


def _component(raw):
	prior = raw['psd_prior']
	return ComponentSpec(
		name=raw['name'],
		prior=PsdPrior(u=prior['u'], p=prior['p'], h=prior.get('h', 1.0)),
		period=raw.get('period'),
		alpha=raw.get('alpha'),
		period_scale=raw.get('period_scale'),
		representation=raw.get('representation', 'statespace'),
		family=raw.get('family', 'sbspline'),
		r=raw.get('r', 30),
		domain=tuple(raw['domain']) if 'domain' in raw else None,
		psd_levels=tuple(raw['psd_levels']) if 'psd_levels' in raw else None,
		boundary=raw.get('boundary', True))


def build_spec(config, dataset, threads=None, seed=None):
	'''
	ModelSpec from a validated configuration and a loaded dataset. Prediction
	rows of the dataset and the forecast horizon become evaluation points.
	'''
	raw = config.raw
	fixed = raw.get('fixed_effects', {})
	grids = raw.get('grids', {})
	period_axis = None
	if 'period' in grids:
		values = expand_values(grids['period'])
		weights = grids.get('period_weights')
		period_axis = GridAxis('period', values, tuple(weights) if weights is not None else None)
	elif 'period_weights' in grids:
		raise ConfigError('period_weights given without a period grid')
	noise = raw.get('noise_prior', {'u': 1.0, 'p': 0.5})
	kwargs = {}
	if 'nodes' in grids:
		kwargs['grid_nodes'] = grids['nodes']
	if 'prior_variance' in fixed:
		kwargs['fixed_prior_var'] = fixed['prior_variance']
	if 'boundary_prior_variance' in raw:
		kwargs['boundary_prior_var'] = raw['boundary_prior_variance']
	threads = threads if threads is not None else raw.get('threads')
	if threads is not None:
		kwargs['threads'] = int(threads)

	pred_x = np.concatenate([dataset.pred_x, np.asarray(config.horizon, dtype=float)])
	pred_cov = {}
	if dataset.covariates:
		if config.horizon:
			raise ConfigError('a forecast horizon cannot be used with covariates; add prediction rows instead')
		pred_cov = dict(dataset.pred_covariates)
	try:
		return ModelSpec(
			x=dataset.x, y=dataset.y,
			components=[_component(c) for c in raw['components']],
			intercept=fixed.get('intercept', True),
			trend_degree=fixed.get('trend_degree', 0),
			covariates=dict(dataset.covariates),
			noise_prior=ExponentialPrior(noise['u'], noise['p']),
			noise_levels=tuple(raw['noise_levels']) if 'noise_levels' in raw else None,
			period_axis=period_axis,
			prediction_x=pred_x,
			prediction_covariates=pred_cov,
			seed=config.seed if seed is None else int(seed),
			**kwargs)
	except SgpError:
		raise
	except (TypeError, ValueError) as e:
		raise ConfigError('inconsistent configuration: {}'.format(e))
