# -*- coding:utf-8 -*-
"""simulate: sample paths on a regular grid plus the covariance at a reference point"""

import os
import logging

import numpy as np
import pandas as pd

from core.io import write_table
from core.inference import simulate_dataset
from core.sgp import LocationGrid, SgpParams, StateSpaceChain, correlation, covariance, sample_paths
from core.errors import DomainError
from core.utils import perf_clock

from .utils import BaseCommand, add_frequency_arguments, frequency, positive_float, nonneg_float, nonneg_int

log = logging.getLogger(__name__)


def grid_paths(params, xs, n_samples, seed):
	'''(len(xs), n_samples) draws of g on xs; rows at x = 0 are zero'''
	grid, index = LocationGrid.from_locations(xs)
	out = np.zeros((xs.size, n_samples))
	if grid is not None and n_samples > 0:
		draws = sample_paths(StateSpaceChain.build(params, grid), n_samples, seed)
		hit = index >= 0
		out[hit] = draws[:, index[hit]].T
	return out


class SGP_OT_simulate(BaseCommand):
	"""Simulate sGP sample paths"""
	bl_idname = 'simulate'
	bl_label = 'Sample paths of an sGP on a grid'
	bl_description = ('Write paths.csv (x and one column per sample path) and covariance.csv '
		'(covariance and correlation with the reference point) into the output directory. '
		'x is in the user time unit, alpha in radians per x-unit.')

	@classmethod
	def add_arguments(cls, parser):
		add_frequency_arguments(parser)
		parser.add_argument('--sigma', type=positive_float, default=1.0, help='SD parameter sigma')
		parser.add_argument('--grid-start', type=nonneg_float, default=0.0, help='first grid point (x-units)')
		parser.add_argument('--grid-end', type=positive_float, required=True, help='last grid point (x-units)')
		parser.add_argument('--n', type=int, default=301, help='number of grid points')
		parser.add_argument('--samples', type=nonneg_int, default=5, help='number of sample paths, 0 for covariance only')
		parser.add_argument('--ref-point', type=nonneg_float, default=None,
			help='reference point of the covariance table, default mid-grid')
		parser.add_argument('--seed', type=nonneg_int, default=0)
		parser.add_argument('--out', default=None, help='output directory, default $SGP_OUTPUT_DIR or .')
		parser.add_argument('--dataset-out', default=None,
			help='also write a noisy dataset file (x, y) drawn from the same process')
		parser.add_argument('--noise-sd', type=nonneg_float, default=0.1, help='noise SD of --dataset-out')

	def execute(self, args):
		if args.grid_end <= args.grid_start:
			raise DomainError('--grid-end must exceed --grid-start')
		if args.n < 2:
			raise DomainError('--n must be >= 2')
		t0 = perf_clock()
		params = SgpParams(frequency(args), args.sigma)
		xs = np.linspace(args.grid_start, args.grid_end, args.n)
		ref = args.ref_point if args.ref_point is not None else (args.grid_start + args.grid_end) / 2
		if ref <= 0:
			raise DomainError('--ref-point must be > 0')
		out_dir = self.output_dir(args.out)

		cov = pd.DataFrame({
			'x': xs,
			'covariance': covariance(params, ref, xs),
			'correlation': correlation(params, ref, xs),
		})
		written = [write_table(cov, os.path.join(out_dir, 'covariance.csv'))]
		if args.samples > 0:
			paths = grid_paths(params, xs, args.samples, args.seed)
			cols = {'x': xs}
			for j in range(args.samples):
				cols['sample{}'.format(j + 1)] = paths[:, j]
			written.append(write_table(pd.DataFrame(cols), os.path.join(out_dir, 'paths.csv')))
		if args.dataset_out:
			data = simulate_dataset(xs, [params], args.noise_sd, seed=args.seed)
			written.append(write_table(pd.DataFrame({'x': data.x, 'y': data.y}), args.dataset_out))
		log.info('simulate done in %.2fs', perf_clock() - t0)
		for path in written:
			self.report_info(path)
		return 0


def register(subparsers):
	return SGP_OT_simulate.register(subparsers)
