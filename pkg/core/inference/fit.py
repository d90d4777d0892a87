# -*- coding:utf-8 -*-
"""
Grid-marginalized conjugate fits, forecasts and posterior sampling.

Every grid node is an exact Gaussian problem (see system.py). Node weights are
prior times marginal likelihood, normalized over the nodes that could be
factored; summaries are mixtures over nodes. Credible intervals are empirical
2.5 / 97.5 percentiles of draws that first pick a node by weight, then sample
its Gaussian marginal.
"""

import math
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..errors import ConditioningError, DomainError, ModelError, NumericError
from ..settings import settings
from ..utils import map_ordered, perf_clock
from .model import GridAxis, GridNode
from .system import NodeSystem, block_cache, fem_domains

log = logging.getLogger(__name__)

# independent random streams derived from the user seed
STREAM_INTERVALS = 1
STREAM_FORECAST = 2
STREAM_EXCESS = 3
STREAM_ETA = 4

NODE_FAILURES = (ConditioningError, NumericError)


def derived_rng(seed, stream):
	return np.random.default_rng(np.random.SeedSequence([int(seed), int(stream)]))


@dataclass
class NodeOutput:
	'''Per-node posterior summaries at the evaluation points'''
	log_ml: float
	eta_mean: np.ndarray
	eta_var: np.ndarray
	comp_mean: List[np.ndarray]
	comp_var: List[np.ndarray]
	fixed_mean: np.ndarray
	fixed_var: np.ndarray


@dataclass
class ForecastTable:
	x: np.ndarray
	mean: np.ndarray
	sd: np.ndarray
	lower: np.ndarray
	upper: np.ndarray


@dataclass
class PosteriorResult:
	'''
	Mixture posterior over the hyperparameter grid.

	x, y, observed : evaluation points (training points first, then the
		prediction points of the spec) with y NaN where unobserved
	fitted_* : summaries of eta
	latent_mean / latent_sd : per component, boundary terms plus sGP
	nodes, log_ml, hyper_weights : one entry per grid node, failed nodes carry
		log_ml NaN and weight 0
	'''
	x: np.ndarray
	y: np.ndarray
	observed: np.ndarray
	fitted_mean: np.ndarray
	fitted_sd: np.ndarray
	credible_lower: np.ndarray
	credible_upper: np.ndarray
	latent_mean: Dict[str, np.ndarray]
	latent_sd: Dict[str, np.ndarray]
	fixed_mean: Dict[str, float]
	fixed_sd: Dict[str, float]
	nodes: List[GridNode]
	log_ml: np.ndarray
	hyper_weights: np.ndarray
	axes: List[GridAxis]
	axis_marginals: Dict[str, tuple]
	domains: list
	seed: int
	deviations: List[str] = field(default_factory=list)
	forecasts: Optional[ForecastTable] = None

	@property
	def failed(self):
		return np.isnan(self.log_ml)

	@property
	def mode(self):
		'''Grid node of highest posterior weight'''
		return self.nodes[int(np.argmax(self.hyper_weights))]


def normalize_weights(log_prior, log_ml):
	'''Posterior node weights; NaN log_ml marks an excluded node'''
	log_prior = np.asarray(log_prior, dtype=float)
	log_ml = np.asarray(log_ml, dtype=float)
	ok = np.isfinite(log_ml) & np.isfinite(log_prior)
	if not np.any(ok):
		raise ModelError('every grid node failed; no posterior weights')
	lw = np.full(log_ml.shape, -np.inf)
	lw[ok] = log_prior[ok] + log_ml[ok]
	w = np.zeros(log_ml.shape)
	w[ok] = np.exp(lw[ok] - np.max(lw[ok]))
	return w / w.sum()


def axis_marginals(axes, weights):
	'''Posterior mass on each value of each grid axis'''
	shape = [len(ax) for ax in axes]
	W = np.asarray(weights).reshape(shape)
	out = {}
	for k, ax in enumerate(axes):
		other = tuple(i for i in range(len(axes)) if i != k)
		out[ax.name] = (np.asarray(ax.values), W.sum(axis=other) if other else W)
	return out


def mixture_moments(weights, means, variances):
	'''Mean and SD of a finite Gaussian mixture, pointwise'''
	w = np.asarray(weights)[:, None]
	mean = np.sum(w * means, axis=0)
	second = np.sum(w * (variances + means ** 2), axis=0)
	return mean, np.sqrt(np.maximum(second - mean ** 2, 0.0))


def mixture_interval(weights, means, variances, rng, draws=None, level=0.95):
	'''Empirical central interval of draws from the mixture'''
	if draws is None:
		draws = settings.interval_draws
	K, p = means.shape
	if p == 0:
		return np.zeros(0), np.zeros(0)
	ids = rng.choice(K, size=draws, p=weights)
	z = rng.standard_normal((draws, p))
	samples = means[ids] + np.sqrt(variances[ids]) * z
	tail = 100 * (1 - level) / 2
	lower, upper = np.percentile(samples, [tail, 100 - tail], axis=0)
	return lower, upper


def _contain_mean(mean, lower, upper, label):
	widened = (lower > mean) | (upper < mean)
	if np.any(widened):
		log.warning('%s: %d intervals widened to contain the mixture mean', label, int(widened.sum()))
	return np.minimum(lower, mean), np.maximum(upper, mean)


class GridEvaluator():
	'''
	Evaluates every grid node on training points plus eval_x. Latent blocks are
	built once per distinct (component, alpha) before nodes are dispatched.
	'''

	def __init__(self, spec, nodes, eval_x, eval_covariates=None, domains=None):
		self.spec = spec
		self.nodes = nodes
		self.eval_x = np.asarray(eval_x, dtype=float).ravel()
		if np.any(self.eval_x < 0) or not np.all(np.isfinite(self.eval_x)):
			raise DomainError('evaluation points must be finite and nonnegative')
		self.eval_covariates = eval_covariates
		points = np.concatenate([spec.x, self.eval_x])
		self.domains = domains if domains is not None else fem_domains(spec, points)
		self.cache = block_cache(spec, nodes, points, self.domains)

	def system(self, node):
		blocks = []
		for l, alpha in enumerate(node.alphas):
			block = self.cache[(l, alpha)]
			if isinstance(block, Exception):
				raise block
			blocks.append(block)
		return NodeSystem(self.spec, node, blocks, self.eval_x, self.eval_covariates)

	def evaluate(self, node):
		system = self.system(node)
		sol = system.solve()
		E = system.eval_operator()
		eta_mean = E @ sol.mean
		eta_var = sol.variance(E)
		comp_mean, comp_var = [], []
		for l in range(len(self.spec.components)):
			C = system.component_operator(l)
			comp_mean.append(C @ sol.mean)
			comp_var.append(sol.variance(C))
		q = system.n_fixed_effects
		fixed_var = sol.latent_variance()[:q] if q else np.zeros(0)
		log.debug('node %d: log ML %.6g', node.index, sol.log_ml)
		return NodeOutput(sol.log_ml, eta_mean, eta_var, comp_mean, comp_var, sol.mean[:q], fixed_var)

	def run(self, threads=1):
		'''NodeOutput or None per node, with failed nodes logged'''
		outputs, errors = map_ordered(self.evaluate, self.nodes, threads)
		for node, err in zip(self.nodes, errors):
			if err is None:
				continue
			if not isinstance(err, NODE_FAILURES):
				raise err
			log.warning('grid node %d excluded: %s', node.index, err)
		return outputs


def fit(spec):
	'''
	Posterior of the model over the hyperparameter grid. Evaluation points are
	the training locations followed by spec.prediction_x.
	'''
	t0 = perf_clock()
	spec.check_identifiable()
	axes = spec.axes()
	nodes = spec.grid_nodes_list()
	log.info('fitting %d observations, %d components, %d grid nodes',
		spec.n, len(spec.components), len(nodes))
	eval_x = np.concatenate([spec.x, spec.prediction_x])
	eval_cov = None
	if spec.covariates:
		eval_cov = {}
		for name in spec.covariates:
			pred = spec.prediction_covariates.get(name)
			if pred is None:
				if spec.prediction_x.size:
					raise DomainError('missing covariate {!r} at prediction points'.format(name))
				pred = np.zeros(0)
			eval_cov[name] = np.concatenate([spec.covariates[name], np.asarray(pred, dtype=float).ravel()])
	evaluator = GridEvaluator(spec, nodes, eval_x, eval_cov)
	outputs = evaluator.run(spec.threads)

	log_ml = np.array([o.log_ml if o is not None else np.nan for o in outputs])
	log_prior = np.array([n.log_prior for n in nodes])
	weights = normalize_weights(log_prior, log_ml)
	n_failed = int(np.isnan(log_ml).sum())
	if n_failed:
		log.warning('%d of %d grid nodes excluded, weights renormalized', n_failed, len(nodes))

	keep = [k for k, o in enumerate(outputs) if o is not None]
	w = weights[keep]
	means = np.array([outputs[k].eta_mean for k in keep])
	variances = np.array([outputs[k].eta_var for k in keep])
	fitted_mean, fitted_sd = mixture_moments(w, means, variances)
	lower, upper = mixture_interval(w, means, variances, derived_rng(spec.seed, STREAM_INTERVALS))
	lower, upper = _contain_mean(fitted_mean, lower, upper, 'fit')

	latent_mean, latent_sd = {}, {}
	for l, comp in enumerate(spec.components):
		m, s = mixture_moments(w, np.array([outputs[k].comp_mean[l] for k in keep]),
			np.array([outputs[k].comp_var[l] for k in keep]))
		latent_mean[comp.name] = m
		latent_sd[comp.name] = s
	fixed_mean, fixed_sd = {}, {}
	if spec.fixed_names:
		fm, fs = mixture_moments(w, np.array([outputs[k].fixed_mean for k in keep]),
			np.array([outputs[k].fixed_var for k in keep]))
		fixed_mean = dict(zip(spec.fixed_names, fm.tolist()))
		fixed_sd = dict(zip(spec.fixed_names, fs.tolist()))

	y = np.concatenate([spec.y, np.full(spec.prediction_x.size, np.nan)])
	observed = np.concatenate([np.ones(spec.n, bool), np.zeros(spec.prediction_x.size, bool)])
	result = PosteriorResult(
		x=eval_x, y=y, observed=observed,
		fitted_mean=fitted_mean, fitted_sd=fitted_sd, credible_lower=lower, credible_upper=upper,
		latent_mean=latent_mean, latent_sd=latent_sd, fixed_mean=fixed_mean, fixed_sd=fixed_sd,
		nodes=nodes, log_ml=log_ml, hyper_weights=weights, axes=axes,
		axis_marginals=axis_marginals(axes, weights), domains=evaluator.domains,
		seed=spec.seed, deviations=spec.deviations())
	log.info('fit done in %.2fs', perf_clock() - t0)
	return result


def _active(result):
	'''Nodes carrying posterior weight, with their weights renormalized'''
	idx = [k for k, w in enumerate(result.hyper_weights) if w > 0 and not math.isnan(result.log_ml[k])]
	w = result.hyper_weights[idx]
	return [result.nodes[k] for k in idx], w / w.sum()


def _node_moments(result, spec, points, covariates=None):
	'''Per active node: posterior mean and latent solution at the points'''
	nodes, w = _active(result)
	evaluator = GridEvaluator(spec, nodes, points, covariates, result.domains)
	systems = []
	for node in nodes:
		system = evaluator.system(node)
		systems.append((system, system.solve()))
	return w, systems


def forecast(result, spec, horizon_points, covariates=None, seed=None):
	'''
	Predictive mean and 95% interval of eta at horizon_points, marginalized
	over the grid with the weights of result.
	'''
	points = np.asarray(horizon_points, dtype=float).ravel()
	if points.size == 0:
		raise DomainError('forecast needs at least one horizon point')
	seed = result.seed if seed is None else seed
	nodes, w = _active(result)
	evaluator = GridEvaluator(spec, nodes, points, covariates, result.domains)
	outputs, errors = map_ordered(lambda n: _eta_moments(evaluator, n), nodes, spec.threads)
	for err in errors:
		if err is not None:
			raise err
	means = np.array([o[0] for o in outputs])
	variances = np.array([o[1] for o in outputs])
	mean, sd = mixture_moments(w, means, variances)
	lower, upper = mixture_interval(w, means, variances, derived_rng(seed, STREAM_FORECAST))
	lower, upper = _contain_mean(mean, lower, upper, 'forecast')
	return ForecastTable(points, mean, sd, lower, upper)


def _eta_moments(evaluator, node):
	system = evaluator.system(node)
	sol = system.solve()
	E = system.eval_operator()
	return E @ sol.mean, sol.variance(E)


def excess_summary(result, spec, holdout_x, holdout_y, n_samples=10000, seed=None,
		include_noise=False, covariates=None):
	'''
	Posterior samples of sum_i (prediction_i - holdout_y_i). Predictions are
	of eta, or of new observations when include_noise.
	'''
	hx = np.asarray(holdout_x, dtype=float).ravel()
	hy = np.asarray(holdout_y, dtype=float).ravel()
	if hx.size != hy.size or hx.size == 0:
		raise DomainError('holdout x and y must be non-empty and of equal length')
	if not np.all(np.isfinite(hy)):
		raise DomainError('holdout y must be finite')
	seed = result.seed if seed is None else seed
	w, systems = _node_moments(result, spec, hx, covariates)
	means = np.empty(len(systems))
	sds = np.empty(len(systems))
	for k, (system, sol) in enumerate(systems):
		s = system.eval_operator().sum(axis=0)
		means[k] = s @ sol.mean - hy.sum()
		var = float(sol.variance(s[None, :])[0])
		if include_noise:
			var += hx.size * system.node.noise_sd ** 2
		sds[k] = math.sqrt(var)
	rng = derived_rng(seed, STREAM_EXCESS)
	ids = rng.choice(len(systems), size=int(n_samples), p=w)
	return means[ids] + sds[ids] * rng.standard_normal(int(n_samples))


def sample_eta(result, spec, xs, n_samples=1000, seed=None, scale='linear', covariates=None):
	'''
	Joint posterior draws of eta at xs as an (n_samples, len(xs)) array, or
	of exp(eta) with scale='exp'. Draws are allocated to grid nodes by
	weight, then shuffled.
	'''
	if scale not in ('linear', 'exp'):
		raise DomainError("scale must be 'linear' or 'exp', got {!r}".format(scale))
	xs = np.asarray(xs, dtype=float).ravel()
	seed = result.seed if seed is None else seed
	w, systems = _node_moments(result, spec, xs, covariates)
	rng = derived_rng(seed, STREAM_ETA)
	counts = rng.multinomial(int(n_samples), w)
	draws = []
	for count, (system, sol) in zip(counts, systems):
		if count == 0:
			continue
		E = system.eval_operator()
		draws.append(rng.multivariate_normal(E @ sol.mean, sol.covariance(E), size=count, method='eigh'))
	out = np.vstack(draws)[rng.permutation(int(n_samples))]
	return np.exp(out) if scale == 'exp' else out
