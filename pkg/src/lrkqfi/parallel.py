from concurrent.futures import ProcessPoolExecutor

from .cache import configure_default, default_cache


def ordered_map(fn, items, workers=1):
    """map() that may fan out to processes; results always come back in input order.

    Worker processes inherit the parent's pairing-cache settings.
    """
    items = list(items)
    if workers is None or workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items)),
                             initializer=configure_default,
                             initargs=(default_cache.directory, default_cache.enabled)) as pool:
        return list(pool.map(fn, items))
