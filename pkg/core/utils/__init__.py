from .timing import perf_clock
from .threading_utils import OrderedThreadPool, map_ordered
