"""Order-preserving parallel map, capped by the WALKLAB_THREADS environment variable."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_cap() -> int:
    raw = os.environ.get("WALKLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"WALKLAB_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def map_ordered(fn, items) -> list:
    """``[fn(x) for x in items]``, possibly threaded; results always come back in input order."""
    items = list(items)
    workers = min(thread_cap(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
