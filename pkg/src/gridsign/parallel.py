"""Optional thread pool controlled by ``GRIDSIGN_THREADS``.

Results always come back in input order, so the thread count never changes
output.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

from .errors import MalformedInput

T = TypeVar("T")
R = TypeVar("R")

ENV_VAR = "GRIDSIGN_THREADS"


def thread_count() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw == "":
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise MalformedInput(f"{ENV_VAR} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise MalformedInput(f"{ENV_VAR} must be a positive integer, got {raw!r}")
    return value


def pmap(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    items = list(items)
    workers = thread_count()
    if workers == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
