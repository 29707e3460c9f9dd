# src/utils/performance.py

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from functools import wraps
from typing import Callable, Iterable, List, Optional, TypeVar

import psutil

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def resolve_workers(threads: Optional[int] = None) -> int:
    """Worker count: an explicit positive value, otherwise the available parallelism."""
    if threads and threads > 0:
        return threads
    return psutil.cpu_count(logical=True) or 1


def parallel_map(func: Callable[[T], R], items: Iterable[T],
                 workers: Optional[int] = None) -> List[R]:
    """Map func over items on a thread pool; results keep the input order."""
    items = list(items)
    workers = min(resolve_workers(workers), max(len(items), 1))
    if workers == 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


class PerformanceUtils:
    """Timing helpers for the enumeration and search kernels."""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.timings = {}

    @staticmethod
    def timeit(func):
        """Decorator to log function execution time."""
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            result = func(*args, **kwargs)
            execution_time = time.perf_counter() - start_time
            logger.debug(f"{func.__name__} took {execution_time:.4f} seconds")
            return result
        return wrapper

    @contextmanager
    def measure_time(self, name: str = "Operation"):
        """Context manager for measuring execution time."""
        start_time = time.perf_counter()
        try:
            yield
        finally:
            execution_time = time.perf_counter() - start_time
            self.timings[name] = execution_time
            self.logger.debug(f"{name} took {execution_time:.4f} seconds")

    def get_memory_usage(self) -> float:
        """Resident set size of this process in MB."""
        return psutil.Process().memory_info().rss / 1024 / 1024
