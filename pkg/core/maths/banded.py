# -*- coding:utf-8 -*-
"""
Banded symmetric positive definite linear algebra.

Sparse precision matrices of this package (augmented state-space precision,
finite element weight precision, joint posterior precision of the latent
fields) are banded once their rows are suitably ordered. BandedCholesky wraps
LAPACK's banded Cholesky (scipy.linalg.cholesky_banded) and adds the pieces
needed for Gaussian inference: log determinant, sampling, and the diagonal of
the inverse through the Takahashi recursion, which only touches entries inside
the band.
"""

import re
import logging

import numpy as np
from scipy import linalg, sparse
from scipy.sparse.csgraph import reverse_cuthill_mckee
from scipy.sparse.linalg import spsolve_triangular

from ..errors import ConditioningError

log = logging.getLogger(__name__)

_PIVOT = re.compile(r'(\d+)-th leading minor')


def bandwidth(A):
	'''Largest |i - j| over the stored nonzeros of sparse matrix A'''
	A = sparse.coo_matrix(A)
	if A.nnz == 0:
		return 0
	return int(np.max(np.abs(A.row - A.col)))


def bandwidth_ordering(A):
	'''
	Reverse Cuthill-McKee permutation of a structurally symmetric sparse matrix.
	Returns the identity when the natural order is already at least as narrow.
	'''
	A = sparse.csr_matrix(A)
	perm = np.asarray(reverse_cuthill_mckee(A, symmetric_mode=True), dtype=np.intp)
	if bandwidth(A[perm][:, perm]) < bandwidth(A):
		return perm
	return np.arange(A.shape[0], dtype=np.intp)


def to_lower_banded(A, bw=None):
	'''
	Lower banded storage of a symmetric sparse matrix, as expected by
	scipy.linalg.cholesky_banded(lower=True): ab[k, j] = A[j + k, j]
	'''
	A = sparse.coo_matrix(A)
	n = A.shape[0]
	if bw is None:
		bw = bandwidth(A)
	ab = np.zeros((bw + 1, n))
	keep = (A.row >= A.col) & (A.row - A.col <= bw)
	k = A.row[keep] - A.col[keep]
	np.add.at(ab, (k, A.col[keep]), A.data[keep])
	return ab


def selected_inverse(cb):
	'''
	Entries of inv(A) inside the band, from the lower banded Cholesky factor cb
	of A. Returns sig with sig[d, i] = inv(A)[i, i + d].
	'''
	bw = cb.shape[0] - 1
	n = cb.shape[1]
	sig = np.zeros_like(cb)
	for i in range(n - 1, -1, -1):
		lii = cb[0, i]
		kmax = min(bw, n - 1 - i)
		lcol = cb[1:kmax + 1, i]
		for d in range(kmax, -1, -1):
			j = i + d
			s = 0.0
			for k in range(1, kmax + 1):
				a = i + k
				s += lcol[k - 1] * sig[abs(a - j), min(a, j)]
			if d == 0:
				sig[0, i] = 1.0 / lii ** 2 - s / lii
			else:
				sig[d, i] = -s / lii
	return sig


class BandedCholesky():
	'''
	Cholesky factorization A[perm][:, perm] = L L^T of a sparse symmetric
	positive definite matrix held in banded form.

	A : scipy sparse matrix
	perm : optional row/column ordering; 'rcm' selects reverse Cuthill-McKee
	label : name used in error messages
	'''

	def __init__(self, A, perm=None, label='matrix'):
		A = sparse.csr_matrix(A)
		n = A.shape[0]
		if isinstance(perm, str) and perm == 'rcm':
			perm = bandwidth_ordering(A)
		if perm is None:
			perm = np.arange(n, dtype=np.intp)
			Ap = A
		else:
			perm = np.asarray(perm, dtype=np.intp)
			Ap = A[perm][:, perm]
		self.n = n
		self.perm = perm
		self.label = label
		self.bw = bandwidth(Ap)
		ab = to_lower_banded(Ap, self.bw)
		try:
			self.cb = linalg.cholesky_banded(ab, lower=True)
		except linalg.LinAlgError as e:
			m = _PIVOT.search(str(e))
			pivot = None
			if m is not None:
				pivot = int(perm[int(m.group(1)) - 1])
			raise ConditioningError(
				'Cholesky factorization of {} failed: not positive definite at pivot {}'.format(label, pivot),
				index=pivot)
		if not np.all(np.isfinite(self.cb)):
			raise ConditioningError('Cholesky factor of {} is not finite'.format(label))
		log.debug('%s factorized: n=%d, bandwidth=%d', label, n, self.bw)

	def solve(self, b):
		'''Solve A x = b for a vector or a matrix of right hand sides'''
		b = np.asarray(b, dtype=float)
		out = np.empty_like(b)
		out[self.perm] = linalg.cho_solve_banded((self.cb, True), b[self.perm])
		return out

	def logdet(self):
		return 2.0 * float(np.sum(np.log(self.cb[0])))

	def diag_inverse(self):
		'''Diagonal of inv(A) without forming the inverse'''
		sig = selected_inverse(self.cb)
		out = np.empty(self.n)
		out[self.perm] = sig[0]
		return out

	def lower_factor(self):
		'''L as a sparse lower triangular matrix, in permuted coordinates'''
		diags = [self.cb[k, :self.n - k] for k in range(self.bw + 1)]
		return sparse.diags(diags, [-k for k in range(self.bw + 1)], format='csr')

	def sample(self, rng, size=1):
		'''
		Draws from N(0, inv(A)) as an (n, size) array: x = L^-T eps, then
		un-permuted.
		'''
		eps = rng.standard_normal((self.n, size))
		upper = self.lower_factor().T.tocsr()
		z = spsolve_triangular(upper, eps, lower=False)
		out = np.empty_like(z)
		out[self.perm] = z
		return out
