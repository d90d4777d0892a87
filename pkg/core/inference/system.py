# -*- coding:utf-8 -*-
"""
Joint Gaussian system of one hyperparameter grid node.

The latent vector is [fixed effects | boundary coefficients | component
latents]. Component latents are either the interleaved states [g, g'] of the
exact chain on the merged evaluation locations, or the reduced finite element
weights. Their prior precision is block diagonal and banded after ordering;
fixed effects and boundary coefficients form a small dense block handled
through its Schur complement.
"""

import math
import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy import linalg, sparse

from ..errors import ConditioningError, DomainError
from ..fem.assembly import assemble_T, reduced_design
from ..fem.basis import build_basis
from ..maths.banded import BandedCholesky
from ..settings import settings
from ..sgp.kernel import BoundaryBasis, SgpParams
from ..sgp.statespace import LocationGrid, StateSpaceChain, assemble_precision, log_determinant
from .model import Representation

log = logging.getLogger(__name__)

LOG_2PI = math.log(2 * math.pi)


@dataclass(frozen=True)
class LatentBlock:
	'''
	Prior precision Q1 (sigma = 1) of one component's latents, its log
	determinant, and the design mapping every evaluation point to them.
	'''
	Q1: sparse.csc_matrix
	logdet1: float
	design: sparse.csr_matrix

	@property
	def size(self):
		return self.Q1.shape[0]


def statespace_block(alpha, points):
	'''Exact chain on the distinct positive points; x = 0 rows stay empty'''
	grid, index = LocationGrid.from_locations(points)
	if grid is None:
		return LatentBlock(sparse.csc_matrix((0, 0)), 0.0, sparse.csr_matrix((len(points), 0)))
	chain = StateSpaceChain.build(SgpParams(alpha, 1.0), grid)
	Q = assemble_precision(chain).matrix
	rows = np.flatnonzero(index >= 0)
	Z = sparse.coo_matrix(
		(np.ones(rows.size), (rows, 2 * index[rows])),
		shape=(len(points), 2 * grid.n)).tocsr()
	return LatentBlock(Q, log_determinant(chain), Z)


def fem_block(component, alpha, points, domain):
	'''Finite element weights of the component on its domain'''
	if domain is None:
		domain = (0.0, float(np.max(points)))
	a, b = domain
	pts = np.asarray(points, dtype=float)
	if pts.size and (pts.min() < a - 1e-12 or pts.max() > b + 1e-12):
		raise DomainError('component {!r}: points outside the basis domain [{:g}, {:g}]; extend the domain'.format(
			component.name, a, b))
	basis = build_basis(component.family, (a, b), component.r, alpha)
	law = assemble_T(basis, alpha)
	Z = reduced_design(basis, law, np.clip(pts, a, b))
	return LatentBlock(law.T, law.logdet(), Z)


def build_block(component, alpha, points, domain=None):
	if component.representation is Representation.FEM:
		return fem_block(component, alpha, points, domain or component.domain)
	return statespace_block(alpha, points)


@dataclass
class NodeSolution:
	'''
	Posterior of the latent vector at one grid node.

	mean : posterior mean of [fixed | boundary | components]
	log_ml : log marginal likelihood of the training data
	'''
	mean: np.ndarray
	log_ml: float
	n_fixed: int
	sizes: List[int]
	noise_sd: float
	_factor: BandedCholesky
	_schur: tuple
	_X: np.ndarray
	_Pzf: np.ndarray

	def solve(self, rhs):
		'''inv(P_post) rhs for an (m,) or (m, k) array'''
		rhs = np.asarray(rhs, dtype=float)
		q = self.n_fixed
		rf, rz = rhs[:q], rhs[q:]
		if q:
			uf = linalg.cho_solve(self._schur, rf - self._X.T @ rz)
			uz = self._factor.solve(rz - self._Pzf @ uf)
		else:
			uf = rf
			uz = self._factor.solve(rz)
		return np.concatenate([uf, uz], axis=0)

	def covariance(self, E):
		'''E inv(P_post) E^T for a dense (p, m) matrix E'''
		E = np.asarray(E, dtype=float)
		U = self.solve(E.T)
		C = E @ U
		return (C + C.T) / 2

	def variance(self, E):
		'''diag(E inv(P_post) E^T)'''
		E = np.asarray(E, dtype=float)
		U = self.solve(E.T)
		return np.maximum(np.einsum('ij,ji->i', E, U), 0.0)

	def latent_variance(self):
		'''Marginal posterior variances of the whole latent vector'''
		q = self.n_fixed
		vz = self._factor.diag_inverse()
		if not q:
			return np.maximum(vz, 0.0)
		Sinv = linalg.cho_solve(self._schur, np.eye(q))
		vf = np.diag(Sinv)
		vz = vz + np.einsum('ij,jk,ik->i', self._X, Sinv, self._X)
		return np.maximum(np.concatenate([vf, vz]), 0.0)


def solve_node(F, Z, y, prior_fixed, blocks_Q, blocks_logdet, sigmas, noise_sd):
	'''
	Factor the posterior precision and evaluate the log marginal likelihood.

	F : dense (n, q) fixed and boundary columns
	Z : sparse (n, m) component columns
	prior_fixed : (q,) prior precisions of the fixed columns
	blocks_Q, blocks_logdet : per component Q1 and log det Q1
	sigmas : per component scale sigma
	'''
	n, q = F.shape
	tau2 = noise_sd ** 2
	Qz = sparse.block_diag([Q / s ** 2 for Q, s in zip(blocks_Q, sigmas)], format='csc') \
		if blocks_Q else sparse.csc_matrix((0, 0))
	logdet_prior = float(np.sum(np.log(prior_fixed)))
	for Q, ld, s in zip(blocks_Q, blocks_logdet, sigmas):
		logdet_prior += ld - Q.shape[0] * math.log(s ** 2)

	Z = sparse.csr_matrix(Z)
	Pzz = (Qz + (Z.T @ Z) / tau2).tocsc()
	factor = BandedCholesky(Pzz, perm='rcm', label='posterior precision')
	Pzf = np.asarray((Z.T @ F) / tau2)
	bz = np.asarray(Z.T @ y).ravel() / tau2
	bf = F.T @ y / tau2
	logdet_post = factor.logdet()
	if q:
		X = factor.solve(Pzf)
		S = np.diag(prior_fixed) + F.T @ F / tau2 - Pzf.T @ X
		S = (S + S.T) / 2
		try:
			schur = linalg.cho_factor(S, lower=True)
		except linalg.LinAlgError:
			raise ConditioningError('posterior precision of the fixed effects is not positive definite')
		logdet_post += 2.0 * float(np.sum(np.log(np.diag(schur[0]))))
		theta_f = linalg.cho_solve(schur, bf - X.T @ bz)
		theta_z = factor.solve(bz - Pzf @ theta_f)
	else:
		X = np.zeros((Pzz.shape[0], 0))
		schur = None
		theta_f = np.zeros(0)
		theta_z = factor.solve(bz)
	theta = np.concatenate([theta_f, theta_z])
	b = np.concatenate([bf, bz])
	quad = float(y @ y) / tau2 - float(theta @ b)
	log_ml = -0.5 * n * LOG_2PI - 0.5 * n * math.log(tau2) + 0.5 * logdet_prior - 0.5 * logdet_post - 0.5 * quad
	if not math.isfinite(log_ml):
		raise ConditioningError('log marginal likelihood is not finite')
	sizes = [Q.shape[0] for Q in blocks_Q]
	return NodeSolution(theta, log_ml, q, sizes, noise_sd, factor, schur, X, Pzf)


class NodeSystem():
	'''
	Design of one node over training points followed by evaluation points.

	spec : ModelSpec
	blocks : per component LatentBlock, built on the same concatenated points
	eval_x, eval_covariates : evaluation points after the training ones
	'''

	def __init__(self, spec, node, blocks, eval_x, eval_covariates=None):
		self.spec = spec
		self.node = node
		n = spec.n
		x_all = np.concatenate([spec.x, eval_x])
		cov_all = None
		if spec.covariates:
			eval_cov = eval_covariates or {}
			if eval_x.size:
				for name in spec.covariates:
					if name not in eval_cov:
						raise DomainError('missing covariate {!r} at evaluation points'.format(name))
			cov_all = {name: np.concatenate([spec.covariates[name],
				np.asarray(eval_cov.get(name, np.zeros(0)), dtype=float).ravel()])
				for name in spec.covariates}
		fixed = spec.fixed_design(x_all, cov_all)
		bcols = []
		bprec = []
		self.boundary_slices = []
		start = fixed.shape[1]
		for comp, alpha in zip(spec.components, node.alphas):
			if comp.boundary:
				bcols.append(BoundaryBasis(alpha).evaluate(x_all))
				bprec += [1.0 / spec.boundary_prior_var] * 2
				self.boundary_slices.append(slice(start, start + 2))
				start += 2
			else:
				self.boundary_slices.append(slice(start, start))
		F_all = np.hstack([fixed] + bcols) if bcols else fixed
		self.prior_fixed = np.concatenate([np.full(fixed.shape[1], 1.0 / spec.fixed_prior_var), bprec])
		self.n_fixed_effects = fixed.shape[1]
		self.blocks = blocks
		Z_all = sparse.hstack([b.design for b in blocks], format='csr') if blocks else sparse.csr_matrix((x_all.size, 0))
		self.F_train, self.F_eval = F_all[:n], F_all[n:]
		self.Z_train, self.Z_eval = Z_all[:n], Z_all[n:]
		q = F_all.shape[1]
		self.latent_slices = []
		for b in blocks:
			self.latent_slices.append(slice(q, q + b.size))
			q += b.size

	@property
	def size(self):
		return self.F_train.shape[1] + self.Z_train.shape[1]

	def solve(self):
		return solve_node(self.F_train, self.Z_train, self.spec.y, self.prior_fixed,
			[b.Q1 for b in self.blocks], [b.logdet1 for b in self.blocks],
			self.node.sigmas, self.node.noise_sd)

	def eval_operator(self, rows=None):
		'''Dense map from the latent vector to eta at the evaluation points'''
		E = np.hstack([self.F_eval, self.Z_eval.toarray()])
		return E if rows is None else E[rows]

	def component_operator(self, l):
		'''Dense map to boundary part plus g_l at the evaluation points'''
		E = np.zeros((self.F_eval.shape[0], self.size))
		bs = self.boundary_slices[l]
		E[:, bs] = self.F_eval[:, bs]
		ls = self.latent_slices[l]
		E[:, ls] = self.blocks[l].design[self.spec.n:].toarray()
		return E


def fem_domains(spec, points):
	'''Basis domain of each component; None for state-space components'''
	out = []
	for comp in spec.components:
		if comp.representation is not Representation.FEM:
			out.append(None)
		elif comp.domain is not None:
			out.append(tuple(float(v) for v in comp.domain))
		else:
			out.append((0.0, float(np.max(points))))
	return out


def block_cache(spec, nodes, points, domains):
	'''
	Latent blocks for every distinct (component, alpha) among the grid nodes,
	keyed by (component index, alpha). Blocks that cannot be factored are
	stored as the raised ConditioningError.
	'''
	cache = {}
	for node in nodes:
		for l, (comp, alpha) in enumerate(zip(spec.components, node.alphas)):
			key = (l, alpha)
			if key not in cache:
				try:
					cache[key] = build_block(comp, alpha, points, domains[l])
				except ConditioningError as e:
					log.warning('component %r at alpha %g: %s', comp.name, alpha, e)
					cache[key] = e
	return cache
