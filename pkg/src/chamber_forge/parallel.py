"""Optional process parallelism with deterministic output order."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

ENV_VAR = "CHAMBER_FORGE_THREADS"


def worker_count() -> int:
    """Workers allowed by ``CHAMBER_FORGE_THREADS`` (default 1: sequential)."""
    raw = os.environ.get(ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, min(n, os.cpu_count() or 1))


def ordered_map(fn, items, workers: int | None = None, chunksize: int = 256) -> list:
    """``[fn(x) for x in items]``, spread over processes when allowed."""
    items = list(items)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) < 2 * chunksize:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))
