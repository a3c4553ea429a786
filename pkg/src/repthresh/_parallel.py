"""Prefix-sharded process parallelism with deterministic merges.

threads <= 1 short-circuits to a plain map so the serial path never touches
multiprocessing.  Results are always consumed in submission order, so reports
are identical whatever the worker count.
"""

from __future__ import annotations

import os


def thread_count(explicit: int | None = None) -> int:
    """Resolve worker count: explicit flag wins over REPTHRESH_THREADS, else 1."""
    if explicit is not None and explicit > 0:
        return explicit
    env = os.environ.get("REPTHRESH_THREADS")
    if env:
        try:
            n = int(env)
            if n > 0:
                return n
        except ValueError:
            pass
    return 1


def parallel_map(fn, items, threads: int):
    """Order-preserving map over items, fanned out to worker processes."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        for it in items:
            yield fn(it)
        return
    import multiprocessing

    ctx = multiprocessing.get_context("fork")
    chunk = max(1, len(items) // (threads * 4))
    with ctx.Pool(processes=threads) as pool:
        yield from pool.imap(fn, items, chunksize=chunk)
