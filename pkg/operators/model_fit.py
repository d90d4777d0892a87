# -*- coding:utf-8 -*-
"""fit and forecast: configured model fits written as result files"""

import os
import logging

import numpy as np
import pandas as pd

from core.io import load_config, load_dataset, build_spec, write_results, write_table
from core.inference import fit, forecast, excess_summary
from core.errors import ConfigError, DomainError
from core.utils import perf_clock

from .utils import BaseCommand, nonneg_float, nonneg_int

log = logging.getLogger(__name__)

EXCESS_SAMPLES = 10000


class SGP_OT_fit(BaseCommand):
	"""Fit a configured model"""
	bl_idname = 'fit'
	bl_label = 'Fit a model over its hyperparameter grid'
	bl_description = ('Fit the model of a JSON configuration to a CSV dataset and write fit.csv, hyper.csv, '
		'marginals.csv and summary.json (plus excess.csv when the dataset has holdout rows). '
		'Periods and x share the dataset time unit; alpha = 2*pi/period.')

	@classmethod
	def add_arguments(cls, parser):
		parser.add_argument('--config', required=True, help='model configuration (JSON)')
		parser.add_argument('--data', default=None, help='dataset CSV, overrides the configured path')
		parser.add_argument('--out', default=None,
			help='output directory, default from the configuration, $SGP_OUTPUT_DIR or .')
		parser.add_argument('--threads', type=int, default=None, help='worker threads over grid nodes')
		parser.add_argument('--seed', type=nonneg_int, default=None, help='overrides the configured seed')

	def prepare(self, args):
		self.validate_file(args.config)
		config = load_config(args.config)
		path = args.data or config.dataset_path
		if path is None:
			raise ConfigError('no dataset: give --data or dataset.path in the configuration')
		self.validate_file(path)
		dataset = load_dataset(path, **config.dataset_options)
		if args.threads is not None and args.threads < 1:
			raise DomainError('--threads must be >= 1')
		spec = build_spec(config, dataset, threads=args.threads, seed=args.seed)
		out_dir = args.out or config.output_dir or self.output_dir()
		return config, dataset, spec, out_dir

	def write(self, result, spec, dataset, out_dir, table=None):
		paths = write_results(result, spec, out_dir, table)
		if dataset.holdout_x.size:
			samples = excess_summary(result, spec, dataset.holdout_x, dataset.holdout_y,
				n_samples=EXCESS_SAMPLES, covariates=dataset.holdout_covariates or None)
			paths['excess'] = write_table(pd.DataFrame({'excess': samples}), os.path.join(out_dir, 'excess.csv'))
		for name in sorted(paths):
			self.report_info(paths[name])

	def execute(self, args):
		t0 = perf_clock()
		config, dataset, spec, out_dir = self.prepare(args)
		result = fit(spec)
		self.write(result, spec, dataset, out_dir)
		log.info('fit command done in %.2fs', perf_clock() - t0)
		return 0


class SGP_OT_forecast(SGP_OT_fit):
	"""Fit a configured model and forecast"""
	bl_idname = 'forecast'
	bl_label = 'Fit and forecast at horizon points'
	bl_description = ('As fit, and also write forecast.csv (mean, sd, 95% interval of eta) at the '
		'--horizon points, or at the configured forecast horizon.')

	@classmethod
	def add_arguments(cls, parser):
		super().add_arguments(parser)
		parser.add_argument('--horizon', type=nonneg_float, nargs='+', default=None,
			help='horizon points in x-units')

	def execute(self, args):
		t0 = perf_clock()
		config, dataset, spec, out_dir = self.prepare(args)
		horizon = args.horizon if args.horizon is not None else config.horizon
		if not len(horizon):
			raise ConfigError('no horizon: give --horizon or forecast.horizon in the configuration')
		if dataset.covariates:
			raise ConfigError('forecasting needs covariate values; add prediction rows to the dataset instead')
		horizon = np.asarray(horizon, dtype=float)
		if args.horizon is not None:
			# FEM domains must cover the horizon
			spec.prediction_x = np.unique(np.concatenate([spec.prediction_x, horizon]))
		result = fit(spec)
		table = forecast(result, spec, horizon)
		self.write(result, spec, dataset, out_dir, table)
		log.info('forecast command done in %.2fs', perf_clock() - t0)
		return 0


def register(subparsers):
	SGP_OT_fit.register(subparsers)
	SGP_OT_forecast.register(subparsers)
