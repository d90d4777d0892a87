# -*- coding:utf-8 -*-
"""
Command line entry point.

	sgp simulate | cov | psd | fit | forecast | approx-diag [flags]
	sgp --self-check

Exit codes: 0 success, 2 usage or invalid input, 3 numerical failure, 4 IO.
"""

import os
import sys
import logging
import argparse
from logging.handlers import RotatingFileHandler

from core import __version__
from core.settings import settings, LOG_LEVELS

#Modules
SIMULATE = True
KERNEL_TABLES = True
MODEL_FIT = True
APPROX_DIAG = True

from operators import self_check
if SIMULATE:
	from operators import sim_paths
if KERNEL_TABLES:
	from operators import kernel_tables
if MODEL_FIT:
	from operators import model_fit
if APPROX_DIAG:
	from operators import approx_diag

LOG_DIR_ENV = 'SGP_LOG_DIR'
logsFormat = '{levelname}:{name}:{lineno}:{message}'
logsFileName = 'sgp.log'

logger = logging.getLogger(__name__)


def setup_logging(level):
	'''Level for every logger; a rotating file log when SGP_LOG_DIR is set'''
	root = logging.getLogger()
	root.setLevel(logging.getLevelName(level))
	for handler in root.handlers:
		handler.setFormatter(logging.Formatter(logsFormat, style='{'))
	log_dir = os.environ.get(LOG_DIR_ENV)
	if log_dir:
		try:
			os.makedirs(log_dir, exist_ok=True)
			logHandler = RotatingFileHandler(os.path.join(log_dir, logsFileName), mode='a',
				maxBytes=512000, backupCount=1)
		except OSError as e:
			logger.warning('cannot open log file in %s: %s', log_dir, e)
		else:
			logHandler.setFormatter(logging.Formatter(logsFormat, style='{'))
			root.addHandler(logHandler)


def build_parser():
	parser = argparse.ArgumentParser(prog='sgp',
		description='Seasonal Gaussian processes: simulation, approximation diagnostics and model fits.')
	parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
	parser.add_argument('--log-level', choices=LOG_LEVELS, default=settings.log_level)
	parser.add_argument('--self-check', action='store_true', help=argparse.SUPPRESS)
	subparsers = parser.add_subparsers(dest='command', metavar='command')
	if SIMULATE:
		sim_paths.register(subparsers)
	if KERNEL_TABLES:
		kernel_tables.register(subparsers)
	if MODEL_FIT:
		model_fit.register(subparsers)
	if APPROX_DIAG:
		approx_diag.register(subparsers)
	return parser


def main(argv=None, out=None, err=None):
	parser = build_parser()
	args = parser.parse_args(argv)
	if args.self_check and args.command is not None:
		parser.error('--self-check takes no subcommand')
	if not args.self_check and args.command is None:
		parser.error('a subcommand is required')
	setup_logging(args.log_level)
	if args.self_check:
		return self_check.SGP_OT_self_check(out, err).run(args)
	return args.command_class(out, err).run(args)


if __name__ == '__main__':
	sys.exit(main())
