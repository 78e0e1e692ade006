"""Deterministic thread-parallel map.

Worker count comes from the RSTN_THREADS environment variable (default
1).  Work items are evaluated independently and results are returned
in input order, so downstream pairwise-tree reductions give bit-equal
results for any thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def thread_count() -> int:
    raw = os.environ.get("RSTN_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"RSTN_THREADS={raw!r} is not an integer")
    if n < 1:
        raise ValueError(f"RSTN_THREADS must be >= 1, got {n}")
    return n


def det_map(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """Map fn over items, preserving order; threads from RSTN_THREADS."""
    n = thread_count()
    if n == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
