"""Small shared helpers: worker capping and chunked grid sweeps."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

ENV_THREADS = "LIGHTCONE_THREADS"


def worker_count():
    """Worker cap from the environment; defaults to serial execution."""
    raw = os.environ.get(ENV_THREADS, "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def chunked_map(fn, n_items, chunk=2048, workers=None):
    """Apply ``fn(start, stop)`` over chunks of ``range(n_items)``.

    ``fn`` must return a dict of equal-length arrays; chunks are
    concatenated in order, so results are identical for any worker count.
    """
    if workers is None:
        workers = worker_count()
    bounds = [(s, min(s + chunk, n_items)) for s in range(0, n_items, chunk)]
    if workers <= 1 or len(bounds) == 1:
        parts = [fn(s, e) for s, e in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda se: fn(*se), bounds))
    out = {}
    for key in parts[0]:
        out[key] = np.concatenate([p[key] for p in parts], axis=0)
    return out
