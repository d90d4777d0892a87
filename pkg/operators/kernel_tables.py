# -*- coding:utf-8 -*-
"""cov and psd: closed-form covariance tables and predictive-SD prior tools"""

import logging

import numpy as np
import pandas as pd

from core.io import write_table
from core.sgp import SgpParams, PsdPrior, covariance_matrix, psd, to_sigma_rate, median_psd, psd_to_sigma
from core.errors import DomainError

from .utils import BaseCommand, add_frequency_arguments, frequency, positive_float, nonneg_float

log = logging.getLogger(__name__)

NUM = '{:.17g}'


class SGP_OT_cov(BaseCommand):
	"""Covariance matrix of the sGP at given locations"""
	bl_idname = 'cov'
	bl_label = 'Covariance matrix at given locations'
	bl_description = ('Print (or write with --out) the covariance matrix C(x_i, x_j) of the sGP. '
		'Locations are nonnegative, in x-units; alpha in radians per x-unit.')

	@classmethod
	def add_arguments(cls, parser):
		add_frequency_arguments(parser)
		parser.add_argument('--sigma', type=positive_float, default=1.0)
		parser.add_argument('--x', type=nonneg_float, nargs='+', required=True, help='locations')
		parser.add_argument('--out', default=None, help='CSV file for the matrix, default stdout')

	def execute(self, args):
		params = SgpParams(frequency(args), args.sigma)
		xs = np.asarray(args.x, dtype=float)
		K = covariance_matrix(params, xs)
		frame = pd.DataFrame(K, columns=['c{}'.format(j + 1) for j in range(xs.size)])
		frame.insert(0, 'x', xs)
		if args.out:
			self.report_info(write_table(frame, args.out))
		else:
			for row in K:
				self.report_info(','.join(NUM.format(v) for v in row))
		return 0


class SGP_OT_psd(BaseCommand):
	"""Predictive standard deviation and its exponential prior"""
	bl_idname = 'psd'
	bl_label = 'Predictive SD sigma(h) and prior conversion'
	bl_description = ('With --sigma print sigma(h) = (sigma/alpha) sqrt(h/2 - sin(2 alpha h)/(4 alpha)). '
		'With --u and --p (prior P(sigma(h) > u) = p) print the rate of the induced exponential prior '
		'on sigma and the prior median of sigma(h). h is in x-units.')

	@classmethod
	def add_arguments(cls, parser):
		add_frequency_arguments(parser)
		parser.add_argument('--h', type=positive_float, default=1.0, help='prediction step h')
		parser.add_argument('--sigma', type=positive_float, default=None)
		parser.add_argument('--u', type=positive_float, default=None, help='prior threshold on sigma(h)')
		parser.add_argument('--p', type=positive_float, default=None, help='prior exceedance probability')

	def execute(self, args):
		alpha = frequency(args)
		if args.sigma is None and args.u is None and args.p is None:
			raise DomainError('give --sigma, or --u and --p')
		if (args.u is None) != (args.p is None):
			raise DomainError('--u and --p go together')
		if args.sigma is not None:
			self.report_info(NUM.format(psd(SgpParams(alpha, args.sigma), args.h)))
		if args.u is not None:
			prior = PsdPrior(args.u, args.p, args.h)
			median = median_psd(prior)
			self.report_info('sigma_rate={}'.format(NUM.format(to_sigma_rate(prior, alpha))))
			self.report_info('median_psd={}'.format(NUM.format(median)))
			self.report_info('median_sigma={}'.format(NUM.format(float(psd_to_sigma(median, alpha, args.h)))))
		return 0


def register(subparsers):
	SGP_OT_cov.register(subparsers)
	SGP_OT_psd.register(subparsers)
