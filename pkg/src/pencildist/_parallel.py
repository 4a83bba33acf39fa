import os
from concurrent.futures import ThreadPoolExecutor


def max_workers():
    """Worker cap from ``PENCILDIST_THREADS`` (default 1, i.e. sequential)."""
    try:
        return max(1, int(os.environ.get("PENCILDIST_THREADS", "1")))
    except ValueError:
        return 1


def map_ordered(func, items):
    """``list(map(func, items))``, threaded when more than one worker is allowed.

    Results keep the input order so callers can merge deterministically.
    """
    items = list(items)
    workers = min(max_workers(), len(items))
    if workers <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
