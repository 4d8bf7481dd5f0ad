"""Deterministic parallel-map helper.

Column construction in the graded solvers is embarrassingly parallel; the
results are always collected in input order, so any thread count produces
identical output.  The bound is process-wide and set from the CLI.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_max_threads = 1


def set_max_threads(count: int) -> None:
    global _max_threads
    if count < 1:
        raise ValueError("thread count must be >= 1")
    _max_threads = count


def get_max_threads() -> int:
    return _max_threads


def pmap(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    seq: Sequence[T] = list(items)
    if _max_threads == 1 or len(seq) < 2:
        return [fn(x) for x in seq]
    with ThreadPoolExecutor(max_workers=_max_threads) as pool:
        return list(pool.map(fn, seq))
