# -*- coding:utf-8 -*-
"""
Exact finite-dimensional law of the sGP at sorted locations through the
augmented Markov state z(s) = [g(s), g'(s)].

Between consecutive locations z_i = R_i z_{i-1} + eps_i with eps_i ~ N(0, Sigma_i),
and z_0 = 0 at the origin (initial conditions g(0) = g'(0) = 0). The joint
precision of [z_1, ..., z_n] is block tridiagonal:

	diagonal block i      Q_i + A_{i+1}   (Q_n for the last block)
	off-diagonal (i, i+1) H_{i+1}

with Q_i = inv(Sigma_i), A_i = R_i^T Q_i R_i and H_i = -R_i^T Q_i. States are
interleaved as [g(s_1), g'(s_1), g(s_2), g'(s_2), ...] so the matrix has
bandwidth 3.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from ..errors import ConditioningError, DomainError
from ..maths.banded import BandedCholesky
from ..settings import settings
from .kernel import half_sine_gap

log = logging.getLogger(__name__)


def _check_spacing(d):
	d = np.asarray(d, dtype=float)
	if not np.all(np.isfinite(d)) or np.any(d <= 0):
		raise DomainError('spacing d must be finite and > 0')
	return d


def transition(params, d):
	'''2x2 transition matrix R over a spacing d (stacked along axis 0 for arrays)'''
	d_arr = _check_spacing(d)
	a = params.alpha
	c = np.cos(a * d_arr)
	s = np.sin(a * d_arr)
	R = np.stack([np.stack([c, s / a], axis=-1), np.stack([-a * s, c], axis=-1)], axis=-2)
	return R


def noise_covariance(params, d):
	'''2x2 covariance Sigma of the state innovation over a spacing d'''
	d_arr = _check_spacing(d)
	a = params.alpha
	s2 = params.sigma ** 2
	sad = np.sin(a * d_arr)
	gg = half_sine_gap(a, d_arr) / a ** 2
	gd = sad ** 2 / (2 * a ** 2)
	dd = d_arr / 2.0 + np.sin(2 * a * d_arr) / (4 * a)
	S = s2 * np.stack([np.stack([gg, gd], axis=-1), np.stack([gd, dd], axis=-1)], axis=-2)
	return S


def _inverse_2x2(S, cond_limit):
	'''Closed-form inverses of a stack of SPD 2x2 matrices with a conditioning guard'''
	a = S[:, 0, 0]
	b = S[:, 0, 1]
	c = S[:, 1, 1]
	det = a * c - b * b
	tr = a + c
	disc = np.sqrt(np.maximum((a - c) ** 2 / 4.0 + b * b, 0.0))
	lmax = tr / 2.0 + disc
	with np.errstate(divide='ignore', invalid='ignore'):
		lmin = det / lmax
		cond = np.where(lmin > 0, lmax / lmin, np.inf)
	bad = np.flatnonzero(~(cond <= cond_limit))
	if bad.size:
		i = int(bad[0])
		raise ConditioningError(
			'noise covariance of interval {} is numerically singular (condition number {:.3g})'.format(i + 1, cond[i]),
			index=i)
	Q = np.empty_like(S)
	Q[:, 0, 0] = c / det
	Q[:, 1, 1] = a / det
	Q[:, 0, 1] = -b / det
	Q[:, 1, 0] = -b / det
	return Q


@dataclass(frozen=True)
class LocationGrid:
	'''
	Strictly increasing positive locations s and spacings d (d_1 = s_1).
	'''
	s: np.ndarray

	def __post_init__(self):
		s = np.asarray(self.s, dtype=float).ravel()
		if s.size == 0:
			raise DomainError('location grid is empty')
		if not np.all(np.isfinite(s)) or s[0] <= 0:
			raise DomainError('locations must be finite and > 0')
		if np.any(np.diff(s) <= 0):
			raise DomainError('locations must be strictly increasing')
		object.__setattr__(self, 's', s)

	@property
	def d(self):
		return np.diff(self.s, prepend=0.0)

	@property
	def n(self):
		return self.s.size

	@classmethod
	def from_locations(cls, x, tol=None):
		'''
		Grid of the distinct positive values of x. Values closer than tol are
		merged into one node; values within tol of the origin map to the fixed
		state g(0) = 0.

		Returns (grid, index) with index[j] the grid node of x[j], or -1 for the
		origin. grid is None when every location sits at the origin.
		'''
		if tol is None:
			tol = settings.merge_tol
		x = np.asarray(x, dtype=float).ravel()
		if not np.all(np.isfinite(x)) or np.any(x < 0):
			raise DomainError('locations must be finite and nonnegative')
		order = np.argsort(x, kind='stable')
		xs = x[order]
		index = np.full(x.size, -1, dtype=np.intp)
		nodes = []
		last = None
		for j, v in zip(order, xs):
			if v <= tol:
				continue
			if last is None or v - last > tol:
				nodes.append(v)
				last = v
			index[j] = len(nodes) - 1
		merged = np.count_nonzero(index >= 0) - len(nodes)
		if merged:
			log.debug('merged %d duplicate locations', merged)
		if not nodes:
			return None, index
		return cls(np.array(nodes)), index


@dataclass(frozen=True)
class AugmentedPrecision:
	'''Block tridiagonal precision of the interleaved states, dimension 2n'''
	matrix: sparse.csc_matrix
	n: int

	@property
	def nnz(self):
		'''Stored nonzeros of the upper triangle, 3 per diagonal block and 4 per coupling: 7n - 4'''
		return sparse.triu(self.matrix).nnz

	@property
	def g_index(self):
		return np.arange(0, 2 * self.n, 2)

	def factor(self):
		return BandedCholesky(self.matrix, label='augmented precision')


@dataclass(frozen=True)
class StateSpaceChain:
	params: object
	grid: LocationGrid
	R: np.ndarray
	Sigma: np.ndarray

	@classmethod
	def build(cls, params, grid):
		d = grid.d
		return cls(params, grid, transition(params, d), noise_covariance(params, d))

	@property
	def n(self):
		return self.grid.n


def assemble_precision(chain, cond_limit=None):
	'''
	Sparse augmented precision of the chain. Raises ConditioningError naming the
	first interval whose noise covariance cannot be inverted reliably.
	'''
	if cond_limit is None:
		cond_limit = settings.cond_limit
	n = chain.n
	Q = _inverse_2x2(chain.Sigma, cond_limit)
	R = chain.R
	Rt = np.transpose(R, (0, 2, 1))
	A = Rt @ Q @ R
	H = -Rt @ Q

	diag = Q.copy()
	diag[:-1] += A[1:]

	rows = []
	cols = []
	vals = []
	ii, jj = np.meshgrid([0, 1], [0, 1], indexing='ij')
	for i in range(n):
		rows.append(2 * i + ii.ravel())
		cols.append(2 * i + jj.ravel())
		vals.append(diag[i].ravel())
	for i in range(n - 1):
		blk = H[i + 1]
		rows.append(2 * i + ii.ravel())
		cols.append(2 * (i + 1) + jj.ravel())
		vals.append(blk.ravel())
		rows.append(2 * (i + 1) + jj.ravel())
		cols.append(2 * i + ii.ravel())
		vals.append(blk.ravel())
	M = sparse.coo_matrix(
		(np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
		shape=(2 * n, 2 * n)).tocsc()
	return AugmentedPrecision(M, n)


def marginal_covariances(chain):
	'''
	2x2 covariances of z(s_i) by forward propagation
	Var_i = R_i Var_{i-1} R_i^T + Sigma_i, starting from Var_0 = 0.
	'''
	out = np.empty_like(chain.Sigma)
	V = np.zeros((2, 2))
	for i in range(chain.n):
		V = chain.R[i] @ V @ chain.R[i].T + chain.Sigma[i]
		out[i] = V
	return out


def sample_paths(chain, n_samples, seed):
	'''
	n_samples draws of [g(s_1), ..., g(s_n)] (rows) from N(0, inv(Q_aug)),
	using the banded Cholesky factor of Q_aug.
	'''
	if int(n_samples) < 1:
		raise DomainError('n_samples must be >= 1, got {}'.format(n_samples))
	prec = assemble_precision(chain)
	factor = prec.factor()
	rng = np.random.default_rng(seed)
	z = factor.sample(rng, int(n_samples))
	return z[prec.g_index].T


def condition_gaussian(chain, observed_indices, y, noise_sd):
	'''
	Exact posterior of the 2n states given y_j = g(s[observed_indices[j]]) + e_j,
	e_j ~ N(0, noise_sd^2). Returns (mean, sd) over the interleaved states.
	'''
	idx = np.asarray(observed_indices, dtype=np.intp).ravel()
	y = np.asarray(y, dtype=float).ravel()
	if idx.size != y.size:
		raise DomainError('observed_indices and y differ in length ({} vs {})'.format(idx.size, y.size))
	if idx.size and (idx.min() < 0 or idx.max() >= chain.n):
		raise DomainError('observed index outside 0..{}'.format(chain.n - 1))
	if not noise_sd > 0:
		raise DomainError('noise_sd must be > 0, got {}'.format(noise_sd))
	prec = assemble_precision(chain)
	tau = 1.0 / noise_sd ** 2
	w = np.zeros(2 * chain.n)
	np.add.at(w, 2 * idx, tau)
	b = np.zeros(2 * chain.n)
	np.add.at(b, 2 * idx, tau * y)
	post = prec.matrix + sparse.diags(w, format='csc')
	factor = BandedCholesky(post, label='posterior precision')
	mean = factor.solve(b)
	sd = np.sqrt(np.maximum(factor.diag_inverse(), 0.0))
	return mean, sd


def log_determinant(chain):
	'''log det Q_aug, computed from the innovations: -sum log det Sigma_i'''
	S = chain.Sigma
	det = S[:, 0, 0] * S[:, 1, 1] - S[:, 0, 1] ** 2
	return -float(np.sum(np.log(det)))
