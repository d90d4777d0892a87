# -*- coding:utf-8 -*-
import time

import pytest

from core.errors import ConditioningError
from core.utils.threading_utils import OrderedThreadPool, map_ordered
from core.utils import perf_clock


class TestOrderedThreadPool:
	"""Test OrderedThreadPool ordering and error capture."""

	def test_results_in_submission_order(self):
		"""Results come back in submission order whatever the completion order."""
		def task(i):
			time.sleep(0.01 * (5 - i))
			return i * i

		pool = OrderedThreadPool(max_workers=4)
		for i in range(5):
			pool.submit_task(task, i)
		results, errors = pool.wait_completion()
		assert results == [0, 1, 4, 9, 16]
		assert errors == [None] * 5

	def test_errors_are_positional(self):
		"""A failing task leaves None in results and its exception in errors."""
		def task(i):
			if i == 2:
				raise ConditioningError('bad node', index=i)
			return i

		pool = OrderedThreadPool(max_workers=2)
		for i in range(4):
			pool.submit_task(task, i)
		results, errors = pool.wait_completion()
		assert results == [0, 1, None, 3]
		assert isinstance(errors[2], ConditioningError)
		assert sum(e is not None for e in errors) == 1

	def test_invalid_worker_count(self):
		with pytest.raises(ValueError):
			OrderedThreadPool(max_workers=0)


@pytest.mark.parametrize('workers', [1, 3])
def test_map_ordered_matches_serial(workers):
	results, errors = map_ordered(lambda v: 2 * v, range(7), max_workers=workers)
	assert results == [0, 2, 4, 6, 8, 10, 12]
	assert all(e is None for e in errors)


@pytest.mark.parametrize('workers', [1, 2])
def test_map_ordered_captures_errors(workers):
	def fn(v):
		if v == 1:
			raise ValueError('boom')
		return v

	results, errors = map_ordered(fn, [0, 1, 2], max_workers=workers)
	assert results == [0, None, 2]
	assert isinstance(errors[1], ValueError)


def test_perf_clock_is_monotonic():
	t0 = perf_clock()
	t1 = perf_clock()
	assert t1 >= t0
