"""Deterministic parallel map for independent numerical jobs (orbits, radii, sweeps)."""

import logging
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, TypeVar

from core.config import get_settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def worker_count(threads: Optional[int] = None) -> int:
    """Threads to use: explicit value, else PMC_THREADS."""
    n = threads if threads is not None else get_settings().threads
    return max(1, int(n))


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> list[R]:
    """Apply ``fn`` to every item; results come back in input order.

    Each job is independent and deterministic, so the output does not depend
    on the number of workers. Exceptions propagate from the first failing item.
    """
    jobs = list(items)
    n = min(worker_count(threads), len(jobs)) if jobs else 1
    if n <= 1:
        return [fn(job) for job in jobs]
    logger.debug("running %d jobs on %d threads", len(jobs), n)
    with ThreadPoolExecutor(max_workers=n, thread_name_prefix="pmc") as pool:
        return list(pool.map(fn, jobs))
