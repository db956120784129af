"""Deterministic seeding and optional worker pools.

Randomness everywhere in the package flows through PCG64 generators built by
``rng_from``; ``split_rng(seed, k)`` derives independent streams for worker
``k`` so parallel runs reproduce serial ones.  Worker count is capped by the
``CURVLAB_THREADS`` environment variable (default 1 = serial).
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def rng_from(seed, *key):
    """PCG64 generator for ``seed``, optionally keyed by a derivation path."""
    seq = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(seq))


def split_rng(seed, worker):
    """Independent stream for worker ``worker`` derived from ``seed``."""
    return rng_from(seed, worker)


def worker_count():
    raw = os.environ.get("CURVLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Map ``fn`` over ``items`` preserving order; threads if configured."""
    items = list(items)
    workers = worker_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
