# -*- coding:utf-8 -*-
"""
Thread pool for independent hyperparameter grid nodes.
Results come back in submission order so that fits do not depend on the
number of workers.
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, List, Tuple

log = logging.getLogger(__name__)


class OrderedThreadPool:
	"""
	Thread pool collecting per-task outcomes.

	Each task either returns a value or raises; wait_completion() reports both
	positionally, so results[i] and errors[i] belong to the i-th submitted task.
	"""

	def __init__(self, max_workers: int = 1):
		if max_workers < 1:
			raise ValueError('max_workers must be >= 1, got {}'.format(max_workers))
		self.max_workers = max_workers
		self.executor = ThreadPoolExecutor(max_workers=max_workers)
		self.futures = []

	def submit_task(self, fn: Callable, *args, **kwargs) -> None:
		self.futures.append(self.executor.submit(fn, *args, **kwargs))

	def wait_completion(self) -> Tuple[List, List]:
		"""
		Wait for all tasks to complete.

		Returns:
			(results, errors), both in submission order. A failed task has
			result None and its exception in errors; a successful one has
			error None.
		"""
		total = len(self.futures)
		position = {id(f): i for i, f in enumerate(self.futures)}
		results = [None] * total
		errors = [None] * total
		try:
			for future in as_completed(self.futures):
				i = position[id(future)]
				exc = future.exception()
				if exc is None:
					results[i] = future.result()
				else:
					log.debug('Task %d failed: %s', i, exc)
					errors[i] = exc
		finally:
			self.shutdown()
		return results, errors

	def shutdown(self) -> None:
		self.executor.shutdown(wait=True)
		log.debug('Thread pool shutdown complete')


def map_ordered(fn: Callable, items, max_workers: int = 1):
	'''
	Apply fn to every item, serially when max_workers == 1.
	Returns (results, errors) in item order, as OrderedThreadPool does.
	'''
	items = list(items)
	if max_workers <= 1 or len(items) <= 1:
		results, errors = [], []
		for k, item in enumerate(items):
			try:
				results.append(fn(item))
				errors.append(None)
			except Exception as e:
				log.debug('Task %d failed: %s', k, e)
				results.append(None)
				errors.append(e)
		return results, errors
	pool = OrderedThreadPool(max_workers=min(max_workers, len(items)))
	for item in items:
		pool.submit_task(fn, item)
	return pool.wait_completion()
