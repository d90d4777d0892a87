# -*- coding:utf-8 -*-
"""
Basis functions of the finite element approximation: cubic B-splines on an
open uniform knot vector, and seasonal B-splines (the same splines augmented
by their products with cos(alpha x) and sin(alpha x)).
"""

import math
import logging
from enum import Enum
from dataclasses import dataclass

import numpy as np
from scipy import linalg, sparse
from scipy.interpolate import BSpline

from ..errors import DomainError

log = logging.getLogger(__name__)

DEGREE = 3


class Family(Enum):
	CUBIC = 'bspline'
	SEASONAL = 'sbspline'

	@classmethod
	def parse(cls, value):
		if isinstance(value, cls):
			return value
		try:
			return cls(str(value).lower())
		except ValueError:
			raise DomainError('unknown basis family {!r}, expected one of {}'.format(
				value, [f.value for f in cls]))


@dataclass(frozen=True)
class KnotGrid:
	'''
	r cubic B-splines over [a, b]: open uniform knots, boundary knots repeated
	four times, r - 3 equal inter-knot intervals.
	'''
	a: float
	b: float
	r: int

	def __post_init__(self):
		if not (math.isfinite(self.a) and math.isfinite(self.b) and 0 <= self.a < self.b):
			raise DomainError('domain must satisfy 0 <= a < b, got [{}, {}]'.format(self.a, self.b))
		if int(self.r) != self.r or self.r < DEGREE + 1:
			raise DomainError('cubic splines need r >= 4 basis functions, got {}'.format(self.r))

	@property
	def breakpoints(self):
		return np.linspace(self.a, self.b, self.r - DEGREE + 1)

	@property
	def knots(self):
		bp = self.breakpoints
		return np.concatenate([np.full(DEGREE, self.a), bp, np.full(DEGREE, self.b)])

	@property
	def spacing(self):
		return (self.b - self.a) / (self.r - DEGREE)

	def contains(self, x, tol=1e-12):
		x = np.asarray(x, dtype=float)
		slack = tol * (self.b - self.a)
		return (x >= self.a - slack) & (x <= self.b + slack)


class BasisSet():
	'''
	family : Family.CUBIC (k = r functions) or Family.SEASONAL (k = 3r functions,
		ordered [b_i | b_i cos(alpha x) | b_i sin(alpha x)])
	grid : KnotGrid
	alpha : damping frequency, required for Family.SEASONAL
	'''

	def __init__(self, family, grid, alpha=None):
		self.family = Family.parse(family)
		self.grid = grid
		if self.family is Family.SEASONAL:
			if alpha is None or not (math.isfinite(alpha) and alpha > 0):
				raise DomainError('seasonal B-splines need alpha > 0, got {}'.format(alpha))
			alpha = float(alpha)
		self.alpha = alpha
		self._spline = BSpline(grid.knots, np.eye(grid.r), DEGREE, extrapolate=True)
		self._d1 = self._spline.derivative(1)
		self._d2 = self._spline.derivative(2)

	def __repr__(self):
		return 'BasisSet({}, [{}, {}], r={}, alpha={})'.format(
			self.family.value, self.grid.a, self.grid.b, self.grid.r, self.alpha)

	@property
	def r(self):
		return self.grid.r

	@property
	def size(self):
		if self.family is Family.SEASONAL:
			return 3 * self.grid.r
		return self.grid.r

	def _check(self, x):
		x = np.atleast_1d(np.asarray(x, dtype=float))
		if not np.all(np.isfinite(x)):
			raise DomainError('evaluation points must be finite')
		if not np.all(self.grid.contains(x)):
			raise DomainError('evaluation points outside the basis domain [{}, {}]'.format(
				self.grid.a, self.grid.b))
		return np.clip(x, self.grid.a, self.grid.b)

	def _splines(self, x):
		return self._spline(x), self._d1(x), self._d2(x)

	def evaluate(self, x):
		'''Dense (len(x), k) array of basis values'''
		x = self._check(x)
		b = self._spline(x)
		if self.family is Family.CUBIC:
			return b
		ax = self.alpha * x[:, None]
		return np.hstack([b, b * np.cos(ax), b * np.sin(ax)])

	def first_derivative(self, x):
		x = self._check(x)
		b, b1, _ = self._splines(x)
		if self.family is Family.CUBIC:
			return b1
		a = self.alpha
		c, s = np.cos(a * x[:, None]), np.sin(a * x[:, None])
		return np.hstack([b1, b1 * c - a * b * s, b1 * s + a * b * c])

	def second_derivative(self, x):
		x = self._check(x)
		b, b1, b2 = self._splines(x)
		if self.family is Family.CUBIC:
			return b2
		a = self.alpha
		c, s = np.cos(a * x[:, None]), np.sin(a * x[:, None])
		return np.hstack([
			b2,
			b2 * c - 2 * a * b1 * s - a * a * b * c,
			b2 * s + 2 * a * b1 * c - a * a * b * s,
		])

	def design_matrix(self, xs):
		'''Sparse (len(xs), k) matrix Phi_ij = phi_j(xs_i)'''
		Phi = sparse.csr_matrix(self.evaluate(xs))
		Phi.eliminate_zeros()
		return Phi

	def support(self, j):
		'''Closed interval outside of which basis function j vanishes'''
		i = j % self.grid.r
		t = self.grid.knots
		return float(t[i]), float(t[i + DEGREE + 1])

	@property
	def anchor(self):
		'''
		Point where value and derivative of the approximation are pinned to zero,
		or None. The origin is always pinned; a seasonal basis on [a, b] with
		a > 0 is pinned at a since it contains the null space of L.
		'''
		if self.grid.a == 0 or self.family is Family.SEASONAL:
			return self.grid.a
		return None


def build_basis(family, domain, r, alpha=None):
	a, b = domain
	return BasisSet(family, KnotGrid(float(a), float(b), int(r)), alpha)


def origin_reduction(basis, tol=1e-12):
	'''
	Sparse k x k' matrix N whose columns span the weights w with
	g(anchor) = g'(anchor) = 0 for g = sum_j w_j phi_j. Functions already
	vanishing to first order at the anchor keep their own column; the few that
	do not are replaced by combinations that do.
	'''
	k = basis.size
	if basis.anchor is None:
		return sparse.identity(k, format='csc')
	x0 = np.array([basis.anchor])
	K = np.vstack([basis.evaluate(x0), basis.first_derivative(x0)])
	scale = np.max(np.abs(K))
	active = np.flatnonzero(np.any(np.abs(K) > tol * scale, axis=0))
	free = np.setdiff1d(np.arange(k), active)
	Z = linalg.null_space(K[:, active])
	cols = Z.shape[1] + free.size
	rows = [active[:, None].repeat(Z.shape[1], axis=1).ravel(), free]
	colidx = [np.tile(np.arange(Z.shape[1]), active.size), Z.shape[1] + np.arange(free.size)]
	vals = [Z.ravel(), np.ones(free.size)]
	N = sparse.coo_matrix(
		(np.concatenate(vals), (np.concatenate(rows), np.concatenate(colidx))),
		shape=(k, cols)).tocsc()
	N.eliminate_zeros()
	log.debug('anchored %s at %g: %d constrained functions, reduced size %d',
		basis.family.value, basis.anchor, active.size, cols)
	return N
