# -*- coding:utf-8 -*-
"""
Accuracy of the finite element approximation against the exact sGP: maximum
correlation error |rho_ref(x) - rho~_ref(x)| over an evaluation interval.
"""

import logging

import numpy as np

from ..errors import DomainError
from ..settings import settings
from ..sgp.kernel import SgpParams, correlation
from .assembly import approx_correlation, assemble_T
from .basis import Family, build_basis

log = logging.getLogger(__name__)


def basis_count(family, k):
	'''Number of cubic splines r giving (about) k basis functions'''
	family = Family.parse(family)
	if family is Family.SEASONAL:
		return max(4, int(round(k / 3.0)))
	return max(4, int(k))


def default_eval_range(domain):
	a, b = domain
	pad = (b - a) / 10.0
	return a + pad, b - pad


def max_correlation_error(family, alpha, domain, r, reference_point, eval_range=None, n_eval=None):
	'''Max over the evaluation grid of the correlation error for one basis size'''
	if eval_range is None:
		eval_range = default_eval_range(domain)
	if n_eval is None:
		n_eval = settings.eval_points
	xs = np.linspace(eval_range[0], eval_range[1], int(n_eval))
	basis = build_basis(family, domain, r, alpha)
	law = assemble_T(basis, alpha)
	exact = correlation(SgpParams(alpha), reference_point, xs)
	approx = approx_correlation(basis, law, reference_point, xs)
	return basis.size, float(np.max(np.abs(exact - approx)))


def correlation_error_curve(family, alpha, domain, k_values, reference_point, eval_range=None, n_eval=None):
	'''
	Rows (family, k, max_error) for every requested k, and for both families
	when family is 'both'. k is the actual basis size (3r for seasonal splines).
	'''
	a, b = domain
	if not a < reference_point < b:
		raise DomainError('reference point {} must be interior to [{}, {}]'.format(reference_point, a, b))
	if family == 'both':
		families = [Family.CUBIC, Family.SEASONAL]
	else:
		families = [Family.parse(family)]
	rows = []
	for fam in families:
		for k in k_values:
			r = basis_count(fam, k)
			size, err = max_correlation_error(fam, alpha, domain, r, reference_point, eval_range, n_eval)
			log.info('%s k=%d: max correlation error %.4g', fam.value, size, err)
			rows.append((fam.value, size, err))
	return rows
