# -*- coding:utf-8 -*-
"""Synthetic data of the fitted model shape, for simulation studies and tests."""

import logging
from dataclasses import dataclass
from typing import Dict, Sequence

import numpy as np

from ..errors import DomainError
from ..sgp.kernel import BoundaryBasis, SgpParams
from ..sgp.statespace import LocationGrid, StateSpaceChain, assemble_precision

log = logging.getLogger(__name__)


@dataclass
class SyntheticData:
	x: np.ndarray
	y: np.ndarray
	eta: np.ndarray
	parts: Dict[str, np.ndarray]


def simulate_dataset(x, components: Sequence[SgpParams], noise_sd, intercept=0.0, trend=(),
		boundary=None, seed=0):
	'''
	y = intercept + sum_p trend[p-1] x^p + sum_l (u_l1 cos + u_l2 sin)(alpha_l x) + g_l(x) + e

	components : SgpParams of the independent sGP components
	boundary : per component (u1, u2) coefficients, zeros when None
	'''
	x = np.asarray(x, dtype=float).ravel()
	if x.size == 0 or np.any(x < 0) or not np.all(np.isfinite(x)):
		raise DomainError('x must be a non-empty vector of finite nonnegative values')
	if not noise_sd >= 0:
		raise DomainError('noise_sd must be >= 0, got {}'.format(noise_sd))
	if boundary is not None and len(boundary) != len(components):
		raise DomainError('one boundary pair per component is required')
	streams = np.random.SeedSequence(int(seed)).spawn(len(components) + 1)
	grid, index = LocationGrid.from_locations(x)
	parts = {}
	eta = np.full(x.size, float(intercept))
	for p, coef in enumerate(trend, start=1):
		eta += coef * x ** p
	for l, params in enumerate(components):
		g = np.zeros(x.size)
		if grid is not None:
			factor = assemble_precision(StateSpaceChain.build(params, grid)).factor()
			states = factor.sample(np.random.default_rng(streams[l]), 1)[:, 0]
			hit = index >= 0
			g[hit] = states[2 * index[hit]]
		if boundary is not None:
			g += BoundaryBasis(params.alpha).evaluate(x) @ np.asarray(boundary[l], dtype=float)
		parts['sgp{}'.format(l + 1)] = g
		eta += g
	noise = np.random.default_rng(streams[-1]).standard_normal(x.size) * noise_sd
	log.debug('simulated %d points with %d components', x.size, len(components))
	return SyntheticData(x, eta + noise, eta, parts)
