"""Process-level fan-out for independent computations.

The worker count comes from ``GREENLIM_THREADS`` (default 1, meaning
everything runs in-process).  Results always come back in input order.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

from .errors import ConfigError

ENV_VAR = "GREENLIM_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    raw = os.environ.get(ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError("%s must be a positive integer, got %r" % (ENV_VAR, raw)) from None
    if n < 1:
        raise ConfigError("%s must be a positive integer, got %r" % (ENV_VAR, raw))
    return n


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    items = list(items)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
