"""Chunked, seed-deterministic Monte Carlo driver shared by the simulators.

Trials are cut into fixed-size chunks; chunk k draws from
``SeedSequence(seed, spawn_key=(k,))``. Chunk results are integer counts, so
the total is the same whatever the number of worker threads.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math
import os

import numpy as np

CHUNK = 20_000
# expected random points materialized at once inside a chunk
POINTS_PER_BLOCK = 2_000_000


@dataclass(frozen=True)
class EstimateWithCI:
    value: float
    stderr: float
    trials: int
    rejected_trials: int = 0

    @classmethod
    def from_counts(cls, hits, trials, rejected=0):
        v = hits / trials
        return cls(v, math.sqrt(v * (1.0 - v) / trials), int(trials), int(rejected))

    def interval(self, k=3.0):
        return self.value - k * self.stderr, self.value + k * self.stderr


def worker_count(threads=None):
    if threads is None:
        env = os.environ.get("JAMNET_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def chunk_rng(seed, k):
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(k,)))


def run_chunks(fn, trials, seed, threads=None):
    """Call fn(rng, n) on every chunk; fn returns (hits, rejected).

    Returns the summed (hits, rejected).
    """
    trials = int(trials)
    sizes = [CHUNK] * (trials // CHUNK)
    if trials % CHUNK:
        sizes.append(trials % CHUNK)

    def job(k):
        return fn(chunk_rng(seed, k), sizes[k])

    n_workers = min(worker_count(threads), len(sizes)) or 1
    if n_workers == 1:
        results = [job(k) for k in range(len(sizes))]
    else:
        with ThreadPoolExecutor(n_workers) as pool:
            results = list(pool.map(job, range(len(sizes))))
    hits = sum(int(h) for h, _ in results)
    rejected = sum(int(r) for _, r in results)
    return hits, rejected


def blocked(run_block, points_per_trial):
    """Wrap run_block(rng, n) so a chunk is processed in memory-bounded blocks.

    The block size depends only on the model, so the random stream is
    consumed identically on every run.
    """
    block = max(1, min(CHUNK, int(POINTS_PER_BLOCK / max(points_per_trial, 1.0))))

    def run(rng, n):
        hits = rejected = done = 0
        while done < n:
            m = min(block, n - done)
            h, r = run_block(rng, m)
            hits += h
            rejected += r
            done += m
        return hits, rejected

    return run
