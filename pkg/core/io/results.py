# -*- coding:utf-8 -*-
"""
Result files of a fit:

	fit.csv        evaluation points with posterior summaries of eta and of
	               every component
	hyper.csv      one row per grid node: hyperparameters, log prior, log
	               marginal likelihood, posterior weight
	marginals.csv  posterior mass on every value of every grid axis
	forecast.csv   forecast table, when one was computed
	summary.json   priors, documented deviations, seed and versions

Floats carry 17 significant digits. No timestamps are written, so identical
inputs give identical bytes.
"""

import os
import json
import logging
import platform

import numpy as np
import pandas as pd
import scipy

from .. import __version__ as VERSION
from ..errors import ResultsIOError

log = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


def fit_table(result):
	cols = {
		'x': result.x,
		'y': result.y,
		'observed': result.observed.astype(int),
		'fitted_mean': result.fitted_mean,
		'fitted_sd': result.fitted_sd,
		'lower': result.credible_lower,
		'upper': result.credible_upper,
	}
	for name in result.latent_mean:
		cols[name + '_mean'] = result.latent_mean[name]
		cols[name + '_sd'] = result.latent_sd[name]
	return pd.DataFrame(cols)


def hyper_table(result, spec):
	rows = {'node': [n.index for n in result.nodes]}
	if any(c.tied for c in spec.components):
		rows['period'] = [n.period for n in result.nodes]
	for l, comp in enumerate(spec.components):
		rows['psd_' + comp.name] = [n.psd_levels[l] for n in result.nodes]
		rows['sigma_' + comp.name] = [n.sigmas[l] for n in result.nodes]
	rows['noise_sd'] = [n.noise_sd for n in result.nodes]
	rows['log_prior'] = [n.log_prior for n in result.nodes]
	rows['log_ml'] = result.log_ml
	rows['weight'] = result.hyper_weights
	rows['excluded'] = result.failed.astype(int)
	return pd.DataFrame(rows)


def marginals_table(result):
	frames = []
	for name, (values, weights) in result.axis_marginals.items():
		frames.append(pd.DataFrame({'axis': name, 'value': values, 'weight': weights}))
	return pd.concat(frames, ignore_index=True)


def forecast_table(table):
	return pd.DataFrame({'x': table.x, 'mean': table.mean, 'sd': table.sd,
		'lower': table.lower, 'upper': table.upper})


def summary(result, spec):
	'''JSON-serializable run summary'''
	comps = []
	for comp in spec.components:
		comps.append({
			'name': comp.name,
			'period': comp.period,
			'alpha': comp.alpha,
			'period_scale': comp.period_scale,
			'representation': comp.representation.value,
			'family': comp.family.value if comp.representation.value == 'fem' else None,
			'r': comp.r if comp.representation.value == 'fem' else None,
			'psd_prior': {'h': comp.prior.h, 'u': comp.prior.u, 'p': comp.prior.p},
		})
	mode = result.mode
	return {
		'version': VERSION,
		'versions': {
			'python': platform.python_version(),
			'numpy': np.__version__,
			'scipy': scipy.__version__,
			'pandas': pd.__version__,
		},
		'seed': int(result.seed),
		'observations': int(spec.n),
		'components': comps,
		'fixed_effects': {
			'names': spec.fixed_names,
			'prior_variance': spec.fixed_prior_var,
			'mean': result.fixed_mean,
			'sd': result.fixed_sd,
		},
		'boundary_prior_variance': spec.boundary_prior_var,
		'noise_prior': {'u': spec.noise_prior.u, 'p': spec.noise_prior.p},
		'grid': {
			'nodes': len(result.nodes),
			'excluded': int(result.failed.sum()),
			'axes': {ax.name: list(ax.values) for ax in result.axes},
			'mode': {
				'period': mode.period,
				'sigmas': list(mode.sigmas),
				'noise_sd': mode.noise_sd,
			},
		},
		'deviations': list(result.deviations),
	}


def _write_csv(frame, path):
	try:
		frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep='')
	except OSError as e:
		raise ResultsIOError('cannot write results: {}'.format(e.strerror or e), path=path)


def write_results(result, spec, out_dir, forecast=None):
	'''Write the result files into out_dir; returns {name: path}'''
	try:
		os.makedirs(out_dir, exist_ok=True)
	except OSError as e:
		raise ResultsIOError('cannot create output directory: {}'.format(e.strerror or e), path=out_dir)
	paths = {
		'fit': os.path.join(out_dir, 'fit.csv'),
		'hyper': os.path.join(out_dir, 'hyper.csv'),
		'marginals': os.path.join(out_dir, 'marginals.csv'),
		'summary': os.path.join(out_dir, 'summary.json'),
	}
	_write_csv(fit_table(result), paths['fit'])
	_write_csv(hyper_table(result, spec), paths['hyper'])
	_write_csv(marginals_table(result), paths['marginals'])
	if forecast is not None:
		paths['forecast'] = os.path.join(out_dir, 'forecast.csv')
		_write_csv(forecast_table(forecast), paths['forecast'])
	try:
		with open(paths['summary'], 'w') as f:
			json.dump(summary(result, spec), f, indent=2, sort_keys=True)
			f.write('\n')
	except OSError as e:
		raise ResultsIOError('cannot write summary: {}'.format(e.strerror or e), path=paths['summary'])
	log.info('results written to %s', out_dir)
	return paths


def write_table(frame, path):
	'''Plain CSV output used by the table-producing commands'''
	d = os.path.dirname(os.path.abspath(path))
	try:
		os.makedirs(d, exist_ok=True)
	except OSError as e:
		raise ResultsIOError('cannot create output directory: {}'.format(e.strerror or e), path=d)
	_write_csv(frame, path)
	return path
