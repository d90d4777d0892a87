# -*- coding:utf-8 -*-
import io
import os
import json
import math

import numpy as np
import pandas as pd
import pytest

from cli import main
from core.fem import correlation_error_curve
from core.sgp import SgpParams, covariance_matrix, psd

TWO_PI = '6.283185307179586'


def run(argv):
	out, err = io.StringIO(), io.StringIO()
	code = main(argv, out=out, err=err)
	return code, out.getvalue(), err.getvalue()


def read_bytes(path):
	with open(path, 'rb') as f:
		return f.read()


@pytest.fixture
def model_files(tmp_path):
	x = np.arange(1, 25) / 2.0
	y = np.cos(2 * np.pi * x / 3.0) + 0.2 * np.sin(1.7 * x)
	frame = pd.DataFrame({'x': x, 'y': y, 'test': [0] * 21 + [1] * 3})
	frame.to_csv(tmp_path / 'data.csv', index=False, float_format='%.17g')
	config = {
		'dataset': {'path': 'data.csv', 'holdout': 'test'},
		'components': [{'name': 'season', 'period': 3.0, 'psd_prior': {'u': 0.5, 'p': 0.5}}],
		'grids': {'nodes': 2},
		'seed': 1,
	}
	path = tmp_path / 'model.json'
	path.write_text(json.dumps(config))
	return str(path), str(tmp_path / 'data.csv')


class TestKernelCommands:

	def test_psd_print(self):
		code, out, _ = run(['psd', '--alpha', '6.2831853', '--sigma', '1', '--h', '1'])
		assert code == 0
		assert float(out.strip()) == psd(SgpParams(6.2831853, 1.0), 1.0)

	def test_psd_prior(self):
		code, out, _ = run(['psd', '--period', '1', '--u', '0.01', '--p', '0.5'])
		assert code == 0
		lines = dict(line.split('=') for line in out.split())
		assert float(lines['median_psd']) == pytest.approx(0.01, rel=1e-12)

	def test_psd_needs_u_with_p(self):
		code, _, err = run(['psd', '--alpha', '1', '--u', '0.5'])
		assert code == 2
		assert '--u and --p' in err

	def test_cov(self):
		code, out, _ = run(['cov', '--alpha', '1.5', '--x', '0.5', '1.0', '2.0'])
		assert code == 0
		K = np.array([[float(v) for v in line.split(',')] for line in out.split()])
		np.testing.assert_array_equal(K, covariance_matrix(SgpParams(1.5), [0.5, 1.0, 2.0]))


class TestSimulate:

	def test_paths(self, tmp_path):
		argv = ['simulate', '--alpha', str(math.pi), '--grid-start', '0', '--grid-end', '3',
			'--n', '31', '--samples', '5', '--seed', '4', '--out', str(tmp_path)]
		code, out, _ = run(argv)
		assert code == 0
		paths = pd.read_csv(tmp_path / 'paths.csv')
		assert list(paths.columns) == ['x'] + ['sample{}'.format(j) for j in range(1, 6)]
		assert len(paths) == 31
		assert np.all(paths.iloc[0, 1:] == 0.0)
		cov = pd.read_csv(tmp_path / 'covariance.csv')
		assert list(cov.columns) == ['x', 'covariance', 'correlation']
		assert cov['correlation'].iloc[15] == pytest.approx(1.0)

	def test_covariance_only(self, tmp_path):
		code, _, _ = run(['simulate', '--period', '2', '--grid-end', '3', '--samples', '0', '--out', str(tmp_path)])
		assert code == 0
		assert os.path.exists(tmp_path / 'covariance.csv')
		assert not os.path.exists(tmp_path / 'paths.csv')

	def test_reproducible(self, tmp_path):
		for name in ('a', 'b'):
			run(['simulate', '--alpha', '2', '--grid-end', '5', '--seed', '9', '--out', str(tmp_path / name),
				'--dataset-out', str(tmp_path / name / 'data.csv')])
		for name in ('paths.csv', 'covariance.csv', 'data.csv'):
			assert read_bytes(tmp_path / 'a' / name) == read_bytes(tmp_path / 'b' / name)

	def test_output_dir_from_environment(self, tmp_path, monkeypatch):
		monkeypatch.setenv('SGP_OUTPUT_DIR', str(tmp_path))
		code, _, _ = run(['simulate', '--alpha', '1', '--grid-end', '2', '--samples', '1'])
		assert code == 0
		assert os.path.exists(tmp_path / 'paths.csv')

	def test_flag_validation(self, tmp_path):
		with pytest.raises(SystemExit) as info:
			run(['simulate', '--alpha', '1', '--period', '2', '--grid-end', '3'])
		assert info.value.code == 2
		with pytest.raises(SystemExit) as info:
			run(['simulate', '--alpha', '-1', '--grid-end', '3'])
		assert info.value.code == 2
		code, _, err = run(['simulate', '--alpha', '1', '--grid-start', '4', '--grid-end', '3', '--out', str(tmp_path)])
		assert code == 2
		assert 'DomainError' in err


class TestApproxDiag:

	def test_single_row(self):
		code, out, _ = run(['approx-diag', '--alpha', TWO_PI, '--family', 'sbspline', '--k-list', '21'])
		assert code == 0
		lines = out.split()
		assert lines[0] == 'family,k,max_corr_error'
		fam, k, err = lines[1].split(',')
		assert (fam, k) == ('sbspline', '21')
		direct = correlation_error_curve('sbspline', float(TWO_PI), (0.0, 10.0), [21], 5.0)
		assert float(err) == direct[0][2]
		assert float(err) < 0.2

	def test_bad_reference_point(self):
		code, _, _ = run(['approx-diag', '--alpha', '1', '--ref-point', '12'])
		assert code == 2


class TestModelCommands:

	def test_fit(self, model_files, tmp_path):
		config, _ = model_files
		out_dir = tmp_path / 'out'
		code, out, _ = run(['fit', '--config', config, '--out', str(out_dir)])
		assert code == 0
		for name in ('fit.csv', 'hyper.csv', 'marginals.csv', 'summary.json', 'excess.csv'):
			assert os.path.exists(out_dir / name)
		assert len(pd.read_csv(out_dir / 'fit.csv')) == 21
		assert len(pd.read_csv(out_dir / 'excess.csv')) == 10000

	def test_forecast_inside_training_range(self, model_files, tmp_path):
		config, _ = model_files
		out_dir = tmp_path / 'out'
		code, _, _ = run(['forecast', '--config', config, '--out', str(out_dir), '--horizon', '2.0', '3.5'])
		assert code == 0
		fc = pd.read_csv(out_dir / 'forecast.csv', float_precision='round_trip')
		fitted = pd.read_csv(out_dir / 'fit.csv', float_precision='round_trip')
		train = fitted[fitted['observed'] == 1].set_index('x')
		for x, mean in zip(fc['x'], fc['mean']):
			assert mean == pytest.approx(train.loc[x, 'fitted_mean'], rel=1e-8)

	def test_same_seed_same_bytes(self, model_files, tmp_path):
		config, _ = model_files
		for name in ('a', 'b'):
			run(['fit', '--config', config, '--out', str(tmp_path / name), '--seed', '3'])
		for name in ('fit.csv', 'hyper.csv', 'summary.json', 'excess.csv'):
			assert read_bytes(tmp_path / 'a' / name) == read_bytes(tmp_path / 'b' / name)

	def test_missing_config(self, tmp_path):
		code, _, err = run(['fit', '--config', str(tmp_path / 'absent.json')])
		assert code == 4
		assert 'ResultsIOError' in err

	def test_bad_dataset(self, model_files, tmp_path):
		config, _ = model_files
		bad = tmp_path / 'bad.csv'
		bad.write_text('x,y,test\n1,abc,0\n')
		code, _, err = run(['fit', '--config', config, '--data', str(bad), '--out', str(tmp_path)])
		assert code == 4
		assert 'row 2' in err

	def test_invalid_config(self, tmp_path):
		path = tmp_path / 'model.json'
		path.write_text(json.dumps({'components': [], 'colour': 1}))
		code, _, err = run(['fit', '--config', str(path), '--data', str(path)])
		assert code == 2
		assert 'ConfigError' in err

	def test_collinear_model(self, tmp_path):
		data = tmp_path / 'data.csv'
		data.write_text('x,y,const\n1,0.1,1\n2,0.3,1\n3,-0.2,1\n')
		path = tmp_path / 'model.json'
		path.write_text(json.dumps({'components': [{'name': 'c', 'period': 2.0, 'psd_prior': {'u': 1, 'p': 0.5}}]}))
		code, _, err = run(['fit', '--config', str(path), '--data', str(data), '--out', str(tmp_path / 'out')])
		assert code == 3
		assert 'ModelError' in err

	@pytest.mark.slow
	def test_bundled_configuration(self, tmp_path):
		"""Bundled dataset and configuration: cycle at period 10.1 with its half-period harmonic."""
		config = os.path.join(os.path.dirname(__file__), '..', 'data', 'lynx_synthetic.json')
		code, _, err = run(['forecast', '--config', config, '--out', str(tmp_path)])
		assert code == 0, err
		for name in ('forecast.csv', 'excess.csv', 'hyper.csv'):
			assert (tmp_path / name).exists()
		hyper = pd.read_csv(tmp_path / 'hyper.csv')
		marg = hyper.groupby('period')['weight'].sum()
		assert abs(marg.idxmax() - 10.1) <= 0.5
		assert len(pd.read_csv(tmp_path / 'forecast.csv')) == 10


def test_self_check():
	code, out, _ = run(['--self-check'])
	assert code == 0
	assert 'FAILED' not in out
	assert len(out.splitlines()) == 6


def test_subcommand_required():
	with pytest.raises(SystemExit) as info:
		run([])
	assert info.value.code == 2
