# -*- coding:utf-8 -*-
"""approx-diag: correlation error of the finite element approximations"""

import logging

import pandas as pd

from core.io import write_table
from core.fem import correlation_error_curve
from core.errors import DomainError

from .utils import BaseCommand, add_frequency_arguments, frequency, nonneg_float, positive_float

log = logging.getLogger(__name__)

NUM = '{:.17g}'
DEFAULT_K = [12, 21, 30, 60, 90]


class SGP_OT_approx_diag(BaseCommand):
	"""Finite element approximation diagnostics"""
	bl_idname = 'approx-diag'
	bl_label = 'Maximum correlation error of the B-spline approximations'
	bl_description = ('Rows (family, k, max_corr_error): the largest |rho(x) - rho~(x)| over the evaluation '
		'range, rho the correlation with --ref-point, for basis sizes k (seasonal sizes are rounded to '
		'multiples of 3). Domain, reference point and range are in x-units; sigma = 1.')

	@classmethod
	def add_arguments(cls, parser):
		add_frequency_arguments(parser)
		parser.add_argument('--domain', type=nonneg_float, nargs=2, default=[0.0, 10.0], metavar=('A', 'B'))
		parser.add_argument('--family', choices=['bspline', 'sbspline', 'both'], default='both')
		parser.add_argument('--k-list', type=int, nargs='+', default=DEFAULT_K)
		parser.add_argument('--ref-point', type=positive_float, default=5.0)
		parser.add_argument('--eval-range', type=nonneg_float, nargs=2, default=None, metavar=('LO', 'HI'),
			help='default: the domain without 10%% at each end')
		parser.add_argument('--n-eval', type=int, default=None, help='evaluation points')
		parser.add_argument('--out', default=None, help='CSV file, default stdout')

	def execute(self, args):
		a, b = args.domain
		if not b > a:
			raise DomainError('--domain needs A < B')
		if min(args.k_list) < 4:
			raise DomainError('--k-list values must be >= 4')
		if args.eval_range is not None and not args.eval_range[0] < args.eval_range[1]:
			raise DomainError('--eval-range needs LO < HI')
		rows = correlation_error_curve(args.family, frequency(args), (a, b), args.k_list, args.ref_point,
			args.eval_range, args.n_eval)
		frame = pd.DataFrame(rows, columns=['family', 'k', 'max_corr_error'])
		if args.out:
			self.report_info(write_table(frame, args.out))
		else:
			self.report_info('family,k,max_corr_error')
			for fam, k, err in rows:
				self.report_info('{},{},{}'.format(fam, k, NUM.format(err)))
		return 0


def register(subparsers):
	return SGP_OT_approx_diag.register(subparsers)
