# -*- coding:utf-8 -*-
"""
BaseCommand: base class for command line subcommands.

Standardizes:
- argument registration on the shared subparser
- file and flag validation before any computation
- error reporting (log + stderr) and the exit code contract
- default output directory from SGP_OUTPUT_DIR
"""

import os
import sys
import math
import logging
import argparse

from core.errors import SgpError, DomainError, ResultsIOError

log = logging.getLogger(__name__)

OUTPUT_DIR_ENV = 'SGP_OUTPUT_DIR'

EXIT_OK = 0


def positive_float(text):
	try:
		v = float(text)
	except ValueError:
		raise argparse.ArgumentTypeError('{!r} is not a number'.format(text))
	if not (math.isfinite(v) and v > 0):
		raise argparse.ArgumentTypeError('{!r} must be a finite number > 0'.format(text))
	return v


def nonneg_float(text):
	try:
		v = float(text)
	except ValueError:
		raise argparse.ArgumentTypeError('{!r} is not a number'.format(text))
	if not (math.isfinite(v) and v >= 0):
		raise argparse.ArgumentTypeError('{!r} must be a finite number >= 0'.format(text))
	return v


def nonneg_int(text):
	try:
		v = int(text)
	except ValueError:
		raise argparse.ArgumentTypeError('{!r} is not an integer'.format(text))
	if v < 0:
		raise argparse.ArgumentTypeError('{!r} must be >= 0'.format(text))
	return v


def add_frequency_arguments(parser, required=True):
	'''--alpha or --period, mutually exclusive'''
	group = parser.add_mutually_exclusive_group(required=required)
	group.add_argument('--alpha', type=positive_float,
		help='frequency alpha in radians per x-unit')
	group.add_argument('--period', type=positive_float,
		help='period c in x-units, converted with alpha = 2*pi/c')


def frequency(args):
	if args.alpha is not None:
		return args.alpha
	if args.period is not None:
		return 2 * math.pi / args.period
	return None


class BaseCommand():
	"""Base class for subcommands with common functionality."""

	bl_idname = ''
	bl_label = ''
	bl_description = ''

	def __init__(self, out=None, err=None):
		self.out = out or sys.stdout
		self.err = err or sys.stderr

	@classmethod
	def add_arguments(cls, parser):
		"""Override this in subclasses to declare command flags."""
		pass

	@classmethod
	def register(cls, subparsers):
		parser = subparsers.add_parser(cls.bl_idname, help=cls.bl_label, description=cls.bl_description,
			formatter_class=argparse.ArgumentDefaultsHelpFormatter)
		cls.add_arguments(parser)
		parser.set_defaults(command_class=cls)
		return parser

	def execute(self, args):
		"""Run the command; returns an exit code"""
		raise NotImplementedError

	def run(self, args):
		'''execute() with library errors mapped to their exit codes'''
		try:
			return self.execute(args)
		except SgpError as e:
			self.report_error('{}: {}'.format(type(e).__name__, e))
			return e.exit_code

	def output_dir(self, path=None):
		"""Explicit path, else SGP_OUTPUT_DIR, else the working directory."""
		if path:
			return path
		return os.environ.get(OUTPUT_DIR_ENV) or '.'

	def validate_file(self, filepath):
		"""Validate that file exists and is readable."""
		if not filepath:
			raise DomainError('No file given')
		if not os.path.exists(filepath):
			raise ResultsIOError('File not found', path=filepath)
		if not os.path.isfile(filepath):
			raise ResultsIOError('Path is not a file', path=filepath)
		return True

	def report_error(self, message):
		"""Report error to user and log it."""
		log.error(message)
		print(message, file=self.err)

	def report_warning(self, message):
		log.warning(message)
		print('warning: ' + message, file=self.err)

	def report_info(self, message):
		"""Print a result line on stdout."""
		log.debug(message)
		print(message, file=self.out)
