# -*- coding:utf-8 -*-
"""
Exception hierarchy. Every class carries the process exit code the command line
uses when the error escapes a command.
"""


class SgpError(Exception):
	exit_code = 1

	def __init__(self, value=''):
		self.value = value

	def __str__(self):
		return str(self.value)


class DomainError(SgpError, ValueError):
	"""Input outside the mathematical domain of an operation"""
	exit_code = 2


class ConfigError(SgpError):
	exit_code = 2


class ConditioningError(SgpError):
	"""Singular or indefinite matrix. `index` locates the offending interval or pivot"""
	exit_code = 3

	def __init__(self, value, index=None):
		self.value = value
		self.index = index


class NumericError(SgpError):
	exit_code = 3


class AccuracyError(SgpError):
	exit_code = 3

	def __init__(self, value, estimate=None):
		self.value = value
		self.estimate = estimate


class ModelError(SgpError):
	exit_code = 3


class ParseError(SgpError):
	exit_code = 4

	def __init__(self, value, row=None, column=None):
		self.value = value
		self.row = row
		self.column = column

	def __str__(self):
		where = []
		if self.row is not None:
			where.append('row {}'.format(self.row))
		if self.column is not None:
			where.append('column {!r}'.format(self.column))
		if where:
			return '{} ({})'.format(self.value, ', '.join(where))
		return str(self.value)


class ResultsIOError(SgpError):
	exit_code = 4

	def __init__(self, value, path=None):
		self.value = value
		self.path = path

	def __str__(self):
		if self.path is not None:
			return '{}: {}'.format(self.path, self.value)
		return str(self.value)
