"""Tuple-level random sampling baseline with forced edge values."""

from dataclasses import dataclass

import numpy as np

from ._validation import check_count, check_values
from .exceptions import DomainError
from .histogram import Histogram, build_exact


@dataclass(frozen=True)
class SampleSpec:
    """How many tuples to draw per partition, and the RNG seed."""

    sample_size: int
    rng_seed: int = 0

    def __post_init__(self):
        check_count(self.sample_size, "sample_size", minimum=2)
        check_count(self.rng_seed, "rng_seed", minimum=0)


def sample_partition(values, spec):
    """Draw a uniform sample without replacement that keeps both edge values.

    One occurrence of the minimum and one of the maximum are always kept;
    the remaining ``sample_size - 2`` tuples are drawn uniformly from the
    rest. The sample preserves the input order and is a deterministic
    function of ``spec.rng_seed``.
    """
    arr = check_values(values, min_length=2)
    n = arr.size
    k = min(spec.sample_size, n)
    if k == n:
        return arr.copy()

    lo = int(np.argmin(arr))
    hi = int(np.argmax(arr))
    if lo == hi:
        # constant data: any second index is an extreme too
        hi = 1 if lo == 0 else 0
    rest = np.ones(n, dtype=bool)
    rest[[lo, hi]] = False
    pool = np.flatnonzero(rest)

    rng = np.random.default_rng(spec.rng_seed)
    picked = rng.choice(pool.size, size=k - 2, replace=False, shuffle=False)
    idx = np.sort(np.concatenate((pool[picked], [lo, hi])))
    return arr[idx]


def sample_partitions(partitions, spec):
    """Sample each partition independently with seed ``rng_seed ^ index``."""
    return [
        sample_partition(p, SampleSpec(spec.sample_size, spec.rng_seed ^ i))
        for i, p in enumerate(partitions)
    ]


def _largest_remainder(weights, total):
    """Integer apportionment of ``total`` proportional to ``weights``."""
    weights = np.asarray(weights, dtype=np.int64)
    denom = int(weights.sum())
    scaled = [int(w) * total for w in weights]
    floors = np.array([s // denom for s in scaled], dtype=np.int64)
    remainders = np.array([s % denom for s in scaled], dtype=np.int64)
    short = total - int(floors.sum())
    if short:
        # stable sort keeps ties in bucket order
        order = np.argsort(-remainders, kind="stable")
        floors[order[:short]] += 1
    return floors


def build_sampled_histogram(samples, beta, total_n):
    """Build a ``beta``-bucket histogram from pooled samples.

    The pooled sample is summarized exactly, then bucket sizes are rescaled
    to sum to ``total_n`` with largest-remainder rounding.

    Parameters
    ----------
    samples : sequence of array-like
        Per-partition samples (pooled before building).
    beta : int
    total_n : int
        Population size the sizes are rescaled to.
    """
    beta = check_count(beta, "beta")
    total_n = check_count(total_n, "total_n", minimum=0)
    parts = [check_values(s, name="sample", min_length=0) for s in samples]
    if not parts:
        raise DomainError("no samples given")
    pooled = np.concatenate(parts)
    if pooled.size < beta:
        raise DomainError(f"pooled sample of {pooled.size} is smaller than beta={beta}")
    h = build_exact(pooled, beta)
    if total_n == h.total:
        return h
    sizes = np.append(_largest_remainder(h.sizes[:-1], total_n), 0)
    return Histogram(h.boundaries, sizes)
