"""Integer partitions: counting, enumeration and uniform sampling by rank."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

from .errors import InvalidParameter
from .linalg import RngStream


@lru_cache(maxsize=None)
def _count_bounded(n: int, k: int) -> int:
    """Partitions of ``n`` with all parts ``<= k``."""
    if n == 0:
        return 1
    if k == 0:
        return 0
    if k > n:
        return _count_bounded(n, n)
    return _count_bounded(n, k - 1) + _count_bounded(n - k, k)


def partition_count(n: int) -> int:
    if n < 0:
        raise InvalidParameter(f"cannot partition {n}")
    return _count_bounded(n, n)


def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``n`` as non-increasing tuples, largest first part first.

    >>> list(partitions(4))
    [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    """
    largest = n if largest is None else min(largest, n)
    if n == 0:
        yield ()
        return
    for first in range(largest, 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def unrank_partition(n: int, index: int) -> tuple[int, ...]:
    """The ``index``-th partition of ``n`` in the order of :func:`partitions`."""
    total = partition_count(n)
    if not 0 <= index < total:
        raise InvalidParameter(f"rank {index} outside [0, {total})")
    parts = []
    largest = n
    while n > 0:
        for first in range(min(largest, n), 0, -1):
            block = _count_bounded(n - first, first)
            if index < block:
                parts.append(first)
                n -= first
                largest = first
                break
            index -= block
    return tuple(parts)


def random_partition(n: int, rng: RngStream) -> tuple[int, ...]:
    """Partition of ``n`` drawn uniformly from all ``p(n)`` partitions."""
    return unrank_partition(n, rng.integers(partition_count(n)))
