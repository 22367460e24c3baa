"""Exact-union oracle and the boundary/size error metrics."""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._validation import check_count, check_partitions
from .exceptions import DomainError
from .histogram import build_exact
from .merge import ErrorBound, theoretical_bound


@dataclass(frozen=True)
class ErrorReport:
    """Accuracy of an approximate histogram against the exact one.

    ``per_bucket_size_dev[i]`` is ``a_i - N/B`` as an exact Fraction.
    """

    mu_b: float
    mu_s: float
    per_bucket_size_dev: tuple
    bound: ErrorBound
    bound_satisfied: bool

    @property
    def max_size_dev(self):
        return max(abs(d) for d in self.per_bucket_size_dev)

    def to_text(self):
        """Flat ``key=value`` lines."""
        lines = [
            f"mu_b={self.mu_b!r}",
            f"mu_s={self.mu_s!r}",
            f"max_size_dev={float(self.max_size_dev)!r}",
            f"epsilon_max={float(self.bound.epsilon_max)!r}",
            f"bound_satisfied={str(self.bound_satisfied).lower()}",
        ]
        return "\n".join(lines) + "\n"


def exact_union_histogram(partitions, beta):
    """Exact ``beta``-bucket histogram of the union of all partitions."""
    parts = check_partitions(partitions)
    return build_exact(np.concatenate(parts), beta)


def boundary_error(approx, exact):
    """Normalized RMS deviation of boundaries, ``mu_b``.

    The RMS over all ``B + 1`` boundary differences is scaled by
    ``B / (v_max - v_min)``, where the value range comes from the exact
    histogram's end boundaries.
    """
    if approx.n_buckets != exact.n_buckets:
        raise DomainError(
            f"bucket counts differ: {approx.n_buckets} vs {exact.n_buckets}"
        )
    width = int(exact.boundaries[-1]) - int(exact.boundaries[0])
    if width <= 0:
        raise DomainError("exact histogram spans a zero-width value range")
    diff = approx.boundaries.astype(np.float64) - exact.boundaries.astype(np.float64)
    b = exact.n_buckets
    return b / width * math.sqrt(float(np.mean(diff * diff)))


def size_error(approx, exact_total):
    """Normalized RMS deviation of bucket sizes from ``N/B``, ``mu_s``."""
    n = check_count(exact_total, "exact_total")
    b = approx.n_buckets
    # sum((a - N/B)^2) / B == sum((B*a - N)^2) / B^3, kept in integers
    sq = sum((b * int(a) - n) ** 2 for a in approx.sizes[:-1])
    return b / n * math.sqrt(sq / b**3)


def size_deviations(approx, n):
    """Exact per-bucket deviations ``a_i - n/B``."""
    b = approx.n_buckets
    ideal = Fraction(n, b)
    return tuple(int(a) - ideal for a in approx.sizes[:-1])


def evaluate(approx, partitions, t):
    """Compare ``approx`` with the exact histogram of the union of ``partitions``.

    Parameters
    ----------
    approx : Histogram
        Approximate histogram with B buckets.
    partitions : sequence of array-like
        Raw partitions it summarizes.
    t : int
        Per-partition summary size (or sample size) the bound is stated for.
    """
    t = check_count(t, "t")
    b = approx.n_buckets
    if b > t:
        raise DomainError(f"approximate histogram has {b} buckets, more than t={t}")
    exact = exact_union_histogram(partitions, b)
    n = exact.total
    bound = theoretical_bound(n, t, beta=b)
    devs = size_deviations(approx, n)
    return ErrorReport(
        mu_b=boundary_error(approx, exact),
        mu_s=size_error(approx, n),
        per_bucket_size_dev=devs,
        bound=bound,
        bound_satisfied=max(abs(d) for d in devs) < bound.epsilon_max,
    )
