import time


def perf_clock():
	return time.perf_counter()
