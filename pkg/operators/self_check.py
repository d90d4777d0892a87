# -*- coding:utf-8 -*-
"""Hidden --self-check: closed forms against the brute-force references"""

import math
import logging

import numpy as np

from core import oracle
from core.errors import AccuracyError
from core.sgp import (SgpParams, LocationGrid, StateSpaceChain, covariance, covariance_matrix, psd,
	transition, noise_covariance, assemble_precision, condition_gaussian)

from .utils import BaseCommand

log = logging.getLogger(__name__)


def check_covariance():
	err = 0.0
	for alpha in (math.pi / 4, math.pi, 2 * math.pi):
		p = SgpParams(alpha, 1.0)
		for x1 in np.linspace(0, 10, 6):
			for x2 in np.linspace(0, 10, 6):
				lo, hi = min(x1, x2), max(x1, x2)
				ref = oracle.cov_by_quadrature(p, lo, hi)
				err = max(err, abs(covariance(p, x1, x2) - ref) / p.scale)
	return err, 1e-8


def check_noise_covariance():
	err = 0.0
	for alpha in (1.0, math.pi, 2 * math.pi):
		p = SgpParams(alpha, 1.0)
		for d in (0.1, 0.5, 2.3):
			err = max(err, np.max(np.abs(noise_covariance(p, d) - oracle.noise_cov_by_quadrature(p, d))))
	return err, 1e-10


def check_transition():
	err = 0.0
	p = SgpParams(2 * math.pi, 1.0)
	R = transition(p, 0.37)
	for z0 in ([1.0, 0.0], [0.0, 1.0]):
		err = max(err, np.max(np.abs(R @ np.array(z0) - oracle.ode_propagate(p.alpha, z0, 0.37))))
	return err, 1e-9


def check_psd():
	p = SgpParams(math.pi, 2.0)
	h = 0.5
	return abs(psd(p, h) - math.sqrt(noise_covariance(p, h)[0, 0])) / psd(p, h), 1e-12


def check_precision():
	p = SgpParams(2 * math.pi, 1.0)
	s = np.cumsum(np.random.default_rng(0).uniform(0.05, 0.4, 20))
	chain = StateSpaceChain.build(p, LocationGrid(s))
	Q = assemble_precision(chain).matrix.toarray()
	K = np.linalg.inv(Q)[::2, ::2]
	return float(np.max(np.abs(K - covariance_matrix(p, s)))), 1e-8


def check_conditioning():
	p = SgpParams(math.pi, 1.0)
	rng = np.random.default_rng(1)
	s = np.cumsum(rng.uniform(0.1, 0.5, 12))
	chain = StateSpaceChain.build(p, LocationGrid(s))
	idx = np.arange(0, 12, 2)
	y = rng.standard_normal(idx.size)
	mean, sd = condition_gaussian(chain, idx, y, 0.3)
	Q = assemble_precision(chain).matrix.toarray()
	A = np.zeros((idx.size, Q.shape[0]))
	A[np.arange(idx.size), 2 * idx] = 1.0
	m_ref, C_ref = oracle.dense_condition(Q, A, y, 0.3)
	err = max(np.max(np.abs(mean - m_ref)), np.max(np.abs(sd - np.sqrt(np.diag(C_ref)))))
	return float(err), 1e-9


CHECKS = [
	('covariance vs quadrature', check_covariance),
	('noise covariance vs quadrature', check_noise_covariance),
	('transition vs ODE', check_transition),
	('psd vs noise covariance', check_psd),
	('precision inverse vs covariance', check_precision),
	('sparse vs dense conditioning', check_conditioning),
]


class SGP_OT_self_check(BaseCommand):
	bl_idname = 'self-check'
	bl_label = 'Run the oracle agreement checks'

	def execute(self, args=None):
		failed = []
		for name, fn in CHECKS:
			err, tol = fn()
			ok = err < tol
			self.report_info('{:<34} max error {:.3e} (tol {:.0e}) {}'.format(name, err, tol, 'ok' if ok else 'FAILED'))
			if not ok:
				failed.append(name)
		if failed:
			raise AccuracyError('self-check failed: {}'.format(', '.join(failed)))
		return 0
