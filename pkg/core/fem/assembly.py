# -*- coding:utf-8 -*-
"""
Least-squares finite element law of the basis weights.

With test functions L phi_i the weights w of g~ = sum w_j phi_j satisfy
w ~ N(0, sigma^2 inv(T)) where

	T = alpha^4 G + C + alpha^2 M
	G_ij = <phi_i, phi_j>, C_ij = <phi_i'', phi_j''>, M_ij = <phi_i, phi_j''> + <phi_i'', phi_j>

Inner products are integrated with Gauss-Legendre rules on each inter-knot
interval, split further so that no piece spans more than half a period of the
damping frequency.
"""

import math
import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from ..errors import ConditioningError, DomainError, NumericError
from ..maths.banded import BandedCholesky
from ..settings import settings
from .basis import Family, origin_reduction

log = logging.getLogger(__name__)


def quadrature_points(basis, n_nodes=None, alpha=None):
	'''Nodes and weights covering the basis domain'''
	if n_nodes is None:
		n_nodes = settings.quad_nodes
	freq = max(basis.alpha or 0.0, alpha or 0.0)
	bp = basis.grid.breakpoints
	pieces = max(1, int(math.ceil(basis.grid.spacing * freq / math.pi)))
	edges = np.linspace(bp[0], bp[-1], (len(bp) - 1) * pieces + 1)
	t, w = np.polynomial.legendre.leggauss(n_nodes)
	lo, hi = edges[:-1, None], edges[1:, None]
	xq = ((hi - lo) / 2 * t + (hi + lo) / 2).ravel()
	wq = ((hi - lo) / 2 * w).ravel()
	return xq, wq


def assemble_gcm(basis, n_nodes=None, alpha=None):
	'''Sparse symmetric (G, C, M)'''
	xq, wq = quadrature_points(basis, n_nodes, alpha)
	V = basis.evaluate(xq)
	D2 = basis.second_derivative(xq)
	if not (np.all(np.isfinite(V)) and np.all(np.isfinite(D2))):
		raise NumericError('non-finite basis values in quadrature for {!r}'.format(basis))
	V = sparse.csr_matrix(V)
	D2 = sparse.csr_matrix(D2)
	V.eliminate_zeros()
	D2.eliminate_zeros()
	W = sparse.diags(wq)
	G = (V.T @ W @ V).tocsc()
	C = (D2.T @ W @ D2).tocsc()
	half = (V.T @ W @ D2).tocsc()
	M = (half + half.T).tocsc()
	for name, mat in (('G', G), ('C', C), ('M', M)):
		if not np.all(np.isfinite(mat.data)):
			raise NumericError('non-finite entries in {} for {!r}'.format(name, basis))
	return G, C, M


@dataclass(frozen=True)
class WeightLaw:
	'''
	Precision T of the reduced weights u (w = N u) of the approximation, for
	sigma = 1, with its banded Cholesky factor.
	'''
	T: sparse.csc_matrix
	factor: BandedCholesky
	reduction: sparse.csc_matrix
	alpha: float

	@property
	def size(self):
		return self.T.shape[0]

	def logdet(self):
		return self.factor.logdet()


def assemble_T(basis, alpha=None, n_nodes=None):
	'''
	WeightLaw of the least-squares approximation. Raises ConditioningError with
	the failing pivot when T is not positive definite.
	'''
	if alpha is None:
		alpha = basis.alpha
	if alpha is None or not (math.isfinite(alpha) and alpha > 0):
		raise DomainError('alpha must be > 0, got {}'.format(alpha))
	G, C, M = assemble_gcm(basis, n_nodes, alpha)
	H = alpha ** 4 * G + C + alpha ** 2 * M
	N = origin_reduction(basis)
	T = (N.T @ H @ N).tocsc()
	T = ((T + T.T) / 2).tocsc()
	try:
		factor = BandedCholesky(T, perm='rcm', label='weight precision T')
	except ConditioningError as e:
		hint = ''
		if basis.family is Family.SEASONAL:
			hint = '; the knot spacing {:g} may be too coarse for period {:g}, try a larger r'.format(
				basis.grid.spacing, 2 * math.pi / alpha)
		raise ConditioningError(str(e) + hint, index=e.index)
	log.debug('assembled T for %r: size %d, nnz %d, bandwidth %d', basis, T.shape[0], T.nnz, factor.bw)
	return WeightLaw(T, factor, N, float(alpha))


def reduced_design(basis, law, xs):
	'''Design matrix of the reduced weights at xs (sparse)'''
	return (basis.design_matrix(xs) @ law.reduction).tocsr()


def approx_covariance(basis, law, sigma, xs):
	'''sigma^2 Phi inv(T) Phi^T at the locations xs'''
	Phi = reduced_design(basis, law, xs).toarray()
	X = law.factor.solve(Phi.T)
	K = sigma ** 2 * Phi @ X
	return (K + K.T) / 2


def approx_correlation(basis, law, x_ref, xs):
	'''Correlation of the approximation between x_ref and each of xs'''
	pts = np.concatenate([[x_ref], np.atleast_1d(np.asarray(xs, dtype=float))])
	Phi = reduced_design(basis, law, pts).toarray()
	X = law.factor.solve(Phi.T)
	var = np.einsum('ij,ji->i', Phi, X)
	cross = Phi[1:] @ X[:, 0]
	den = np.sqrt(var[0] * var[1:])
	with np.errstate(divide='ignore', invalid='ignore'):
		return np.where(den > 0, cross / np.where(den > 0, den, 1.0), 0.0)
