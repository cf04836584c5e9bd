"""
Shared process pool for block-parallel computations.
Import map_ordered() instead of creating executors in the engines.

The GF(2) eliminations are pure Python and hold the GIL, so threads would
not overlap them; workers are processes. fn and the items must pickle: pass
a module-level function and plain data (matrices), never a complex or a
lambda.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

from app.config import settings

log = logging.getLogger("khtorus.workers")

T = TypeVar("T")
R = TypeVar("R")

_pool: ProcessPoolExecutor | None = None


def _get_pool() -> ProcessPoolExecutor:
    global _pool
    if _pool is None:
        _pool = ProcessPoolExecutor(max_workers=settings.KH_WORKERS)
        log.info(f"Worker pool initialised (processes={settings.KH_WORKERS})")
    return _pool


def map_ordered(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Apply fn to every item; results come back in input order."""
    items = list(items)
    if settings.KH_WORKERS <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    chunk = max(1, len(items) // (4 * settings.KH_WORKERS))
    return list(_get_pool().map(fn, items, chunksize=chunk))


def shutdown():
    """Release the pool (used by the CLI before exit)."""
    global _pool
    if _pool is not None:
        _pool.shutdown(wait=True)
        _pool = None
