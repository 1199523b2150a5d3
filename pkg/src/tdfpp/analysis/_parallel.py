import os
from concurrent.futures import ProcessPoolExecutor


def default_workers():
    return os.cpu_count() or 1


def map_ordered(fn, items, workers=None):
    """``list(map(fn, items))``, optionally across processes; order preserved."""
    items = list(items)
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    chunksize = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=chunksize))


def chunks(n, size):
    return [(lo, min(n, lo + size)) for lo in range(0, n, size)]
