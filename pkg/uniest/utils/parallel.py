"""
Fan-out of independent Monte Carlo trials over worker processes.

Every trial draws from its own generator, ``rng.trial(index)``, so the values
returned by :func:`run_trials` do not depend on the number of workers.
"""
import logging
from concurrent.futures import ProcessPoolExecutor

import numpy as np

Logger = logging.getLogger('uniest.parallel')


def _run_chunk(trial, rng, start, stop):
    return np.array([trial(rng.trial(index)) for index in range(start, stop)])


def chunk_bounds(n, workers):
    """Contiguous [start, stop) ranges covering range(n), at most ``workers`` of them."""
    workers = max(1, min(int(workers), n))
    edges = np.linspace(0, n, workers + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def run_trials(trial, n, rng, workers=1):
    """
    Evaluate ``trial(generator)`` for n trials and return the values in trial order.

    ``trial`` must be picklable when ``workers`` > 1.
    """
    bounds = chunk_bounds(n, workers)
    if len(bounds) == 1:
        return _run_chunk(trial, rng, 0, n)
    Logger.debug('Running %d trials over %d workers', n, len(bounds))
    with ProcessPoolExecutor(max_workers=len(bounds)) as pool:
        futures = [pool.submit(_run_chunk, trial, rng, start, stop) for start, stop in bounds]
        try:
            return np.concatenate([future.result() for future in futures])
        except Exception:
            Logger.error('A worker failed while running %d trials', n, exc_info=True)
            raise
