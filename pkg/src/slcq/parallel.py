"""Worker-count control for the sample-parallel stages.

The environment variable ``SLCQ_THREADS`` caps how many worker threads the
batched engines may use; 0 or unset means one worker per available CPU.
Heavy numpy kernels release the GIL, so threads give real concurrency here.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

__all__ = ["ENV_VAR", "worker_count", "chunk_ranges", "run_chunked"]

ENV_VAR = "SLCQ_THREADS"


def worker_count() -> int:
    """Worker cap from the environment; 0 or unset selects the CPU count."""
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        n = 0
    else:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be a non-negative integer, got {raw!r}") from None
        if n < 0:
            raise ValueError(f"{ENV_VAR} must be a non-negative integer, got {raw!r}")
    return n if n > 0 else (os.cpu_count() or 1)


def chunk_ranges(n_items: int, n_chunks: int) -> list[tuple[int, int]]:
    """Split ``range(n_items)`` into at most ``n_chunks`` contiguous pieces.

    Pieces differ in size by at most one and cover the range in order.
    """
    if n_items < 0:
        raise ValueError(f"n_items must be non-negative, got {n_items}")
    if n_items == 0:
        return []
    n_chunks = max(1, min(n_chunks, n_items))
    base, extra = divmod(n_items, n_chunks)
    ranges = []
    start = 0
    for i in range(n_chunks):
        size = base + (1 if i < extra else 0)
        ranges.append((start, start + size))
        start += size
    return ranges


def run_chunked(work: Callable[[int, int], None], n_items: int) -> None:
    """Run ``work(start, stop)`` over chunks of an index range.

    Chunks go to a thread pool when more than one worker is allowed,
    otherwise they run inline. ``work`` must write results into disjoint,
    preallocated output slices so the overall result does not depend on
    scheduling order.
    """
    if n_items == 0:
        return
    ranges = chunk_ranges(n_items, worker_count())
    if len(ranges) == 1:
        work(*ranges[0])
        return
    with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
        futures = [pool.submit(work, a, b) for a, b in ranges]
        for future in futures:
            future.result()
