# -*- coding:utf-8 -*-
"""
Dataset files: CSV with a header, numeric columns x and y, optional covariate
columns and an optional holdout flag column. Rows with an empty y are
prediction points; flagged rows are held out of the fit.
"""

import re
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from ..errors import ParseError

log = logging.getLogger(__name__)

MISSING = {'', 'na', 'nan', 'null'}
TRUE_FLAGS = {'1', 'true', 'yes', 'y', 't'}
FALSE_FLAGS = {'0', 'false', 'no', 'n', 'f', ''}

_LINE = re.compile(r'line (\d+)')


@dataclass
class Dataset:
	x: np.ndarray
	y: np.ndarray
	covariates: Dict[str, np.ndarray] = field(default_factory=dict)
	pred_x: np.ndarray = field(default_factory=lambda: np.zeros(0))
	pred_covariates: Dict[str, np.ndarray] = field(default_factory=dict)
	holdout_x: np.ndarray = field(default_factory=lambda: np.zeros(0))
	holdout_y: np.ndarray = field(default_factory=lambda: np.zeros(0))
	holdout_covariates: Dict[str, np.ndarray] = field(default_factory=dict)
	path: Optional[str] = None

	def __len__(self):
		return self.x.size

	@property
	def covariate_names(self) -> List[str]:
		return sorted(self.covariates)


def _numeric(frame, column, allow_missing):
	'''Column as floats; row numbers in errors are file lines (header = 1)'''
	raw = frame[column]
	missing = raw.str.strip().str.lower().isin(MISSING)
	values = pd.to_numeric(raw.where(~missing), errors='coerce')
	bad = values.isna() & ~missing
	if bad.any():
		i = int(np.flatnonzero(bad.to_numpy())[0])
		raise ParseError('non-numeric value {!r}'.format(raw.iloc[i]), row=i + 2, column=column)
	if not allow_missing and missing.any():
		i = int(np.flatnonzero(missing.to_numpy())[0])
		raise ParseError('missing value', row=i + 2, column=column)
	out = values.to_numpy(dtype=float)
	inf = ~np.isfinite(out) & ~missing.to_numpy()
	if inf.any():
		i = int(np.flatnonzero(inf)[0])
		raise ParseError('non-finite value', row=i + 2, column=column)
	return out


def _flags(frame, column):
	raw = frame[column].str.strip().str.lower()
	out = np.zeros(len(raw), dtype=bool)
	for i, v in enumerate(raw):
		if v in TRUE_FLAGS:
			out[i] = True
		elif v not in FALSE_FLAGS:
			raise ParseError('holdout flag {!r} is not boolean'.format(frame[column].iloc[i]), row=i + 2, column=column)
	return out


def load_dataset(path, x_col='x', y_col='y', holdout_col=None, covariate_cols=None):
	'''
	Parse a dataset file, sorted by x (stable, so rows with equal x keep their
	order). Duplicate x values are kept; the model merges them.

	covariate_cols : columns used as covariates; every column other than
		x, y and the holdout flag when None
	'''
	try:
		frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
	except FileNotFoundError as e:
		raise ParseError('cannot read dataset: {}'.format(e))
	except pd.errors.EmptyDataError:
		raise ParseError('dataset file {} is empty'.format(path))
	except pd.errors.ParserError as e:
		m = _LINE.search(str(e))
		raise ParseError('malformed CSV: {}'.format(str(e).strip()), row=int(m.group(1)) if m else None)
	except (OSError, UnicodeDecodeError) as e:
		raise ParseError('cannot read dataset {}: {}'.format(path, e))
	frame.columns = [str(c).strip() for c in frame.columns]
	if len(frame) == 0:
		raise ParseError('dataset file {} has no data rows'.format(path))
	for col in (x_col, y_col) + ((holdout_col,) if holdout_col else ()):
		if col not in frame.columns:
			raise ParseError('required column is absent', row=1, column=col)
	if covariate_cols is None:
		covariate_cols = [c for c in frame.columns if c not in (x_col, y_col, holdout_col)]
	for col in covariate_cols:
		if col not in frame.columns:
			raise ParseError('covariate column is absent', row=1, column=col)

	x = _numeric(frame, x_col, allow_missing=False)
	y = _numeric(frame, y_col, allow_missing=True)
	cov = {c: _numeric(frame, c, allow_missing=False) for c in covariate_cols}
	held = _flags(frame, holdout_col) if holdout_col else np.zeros(x.size, dtype=bool)
	if np.any(held & np.isnan(y)):
		i = int(np.flatnonzero(held & np.isnan(y))[0])
		raise ParseError('holdout row without a y value', row=i + 2, column=y_col)

	order = np.argsort(x, kind='stable')
	x, y, held = x[order], y[order], held[order]
	cov = {c: v[order] for c, v in cov.items()}
	pred = np.isnan(y)
	train = ~pred & ~held
	if not np.any(train):
		raise ParseError('dataset {} has no training rows'.format(path))
	ds = Dataset(
		x=x[train], y=y[train], covariates={c: v[train] for c, v in cov.items()},
		pred_x=x[pred], pred_covariates={c: v[pred] for c, v in cov.items()},
		holdout_x=x[held], holdout_y=y[held], holdout_covariates={c: v[held] for c, v in cov.items()},
		path=str(path))
	log.info('loaded %s: %d training rows, %d prediction rows, %d holdout rows',
		path, train.sum(), pred.sum(), held.sum())
	return ds
