"""Merging per-partition equi-depth histograms into one approximate histogram.

The k input histograms (each with T buckets) are first assembled into a
pre-histogram over the sorted union of all their boundaries. Its approximate
cumulative sizes assume every value of a source bucket sits at that bucket's
start boundary. Consecutive pre-histogram buckets are then grouped so that the
cumulative size at each group end is the largest one not exceeding the ideal
cumulative size ``i * N / beta``.

Every merged bucket size, and every sum over a run of ``m`` merged buckets,
stays within ``2N/T`` of ``N/beta`` (resp. ``m * N/beta``).
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from ._validation import check_count
from .exceptions import DomainError
from .histogram import Histogram

# int64 products A * beta and i * N must stay below this
_SAFE_PRODUCT = 2**62


@dataclass(frozen=True, eq=False)
class PreHistogram:
    """Assembled pre-histogram of k source histograms.

    Attributes
    ----------
    boundaries : ndarray of int64, shape (k * (T + 1),)
        Sorted union (as a multiset) of every source boundary.
    approx_cumulative : ndarray of int64, shape (k * (T + 1) - 1,)
        Approximate cumulative size through each pre-histogram bucket.
    total : int
        Sum of the source totals.
    source_buckets : int
        Bucket count T shared by the sources.
    n_sources : int
        Number of source histograms k.
    """

    boundaries: np.ndarray
    approx_cumulative: np.ndarray
    total: int
    source_buckets: int
    n_sources: int

    @property
    def n_buckets(self):
        return self.approx_cumulative.size

    @property
    def approx_sizes(self):
        """Per-bucket approximate sizes (differences of the cumulative sizes)."""
        return np.diff(self.approx_cumulative, prepend=0)

    def to_histogram(self):
        sizes = np.append(self.approx_sizes, 0)
        return Histogram(self.boundaries, sizes)


@dataclass(frozen=True)
class MergePlan:
    """Which pre-histogram buckets each output bucket absorbed.

    ``spans[g]`` is the inclusive 1-based ``(first, last)`` range of
    pre-histogram buckets merged into output bucket ``g + 1``. An empty group
    has ``last == first - 1``; it becomes a zero-size bucket whose start
    boundary repeats the next one.
    """

    spans: tuple

    @property
    def empty_groups(self):
        """0-based indices of output buckets that absorbed nothing."""
        return tuple(g for g, (a, b) in enumerate(self.spans) if b < a)

    def __len__(self):
        return len(self.spans)


@dataclass(frozen=True)
class ErrorBound:
    """Guaranteed maximum deviation ``2N/T`` of merged bucket and range sizes."""

    n: int
    t: int
    beta: Optional[int] = None

    @property
    def epsilon_max(self):
        return Fraction(2 * self.n, self.t)

    @property
    def as_fraction_of_ideal(self):
        """``epsilon_max`` relative to the ideal bucket size, i.e. ``2 beta / T``."""
        if self.beta is None:
            return None
        return Fraction(2 * self.beta, self.t)

    def __float__(self):
        return float(self.epsilon_max)


class MergeResult(NamedTuple):
    histogram: Histogram
    bound: ErrorBound


def _as_histogram(obj):
    if isinstance(obj, Histogram):
        return obj
    hist = getattr(obj, "histogram", None)
    if isinstance(hist, Histogram):
        return hist
    raise DomainError(f"expected a Histogram or summary, got {type(obj).__name__}")


def assemble_pre_histogram(summaries):
    """Assemble the pre-histogram of a collection of source histograms.

    Boundaries are ordered by ``(value, source index, bucket index)`` so that
    ties between sources resolve deterministically. Walking that order, the
    cumulative size grows by the size of the source bucket starting at each
    boundary; closing boundaries contribute nothing.

    Parameters
    ----------
    summaries : sequence of Histogram
        Source histograms. Objects exposing a ``histogram`` attribute are
        accepted too.

    Returns
    -------
    PreHistogram
    """
    hists = [_as_histogram(s) for s in summaries]
    if not hists:
        raise DomainError("need at least one histogram to assemble")
    t = hists[0].n_buckets
    if any(h.n_buckets != t for h in hists):
        counts = sorted({h.n_buckets for h in hists})
        raise DomainError(f"all histograms must share one bucket count, got {counts}")

    values = np.concatenate([h.boundaries for h in hists])
    contrib = np.concatenate([h.sizes for h in hists])
    source = np.repeat(np.arange(len(hists)), t + 1)
    bucket = np.tile(np.arange(t + 1), len(hists))
    order = np.lexsort((bucket, source, values))

    acc = np.cumsum(contrib[order])
    total = int(sum(h.total for h in hists))
    approx = acc[:-1].copy()
    boundaries = values[order]
    approx.setflags(write=False)
    boundaries.setflags(write=False)
    return PreHistogram(
        boundaries=boundaries,
        approx_cumulative=approx,
        total=total,
        source_buckets=t,
        n_sources=len(hists),
    )


def merge_to_beta(pre, beta):
    """Reduce a pre-histogram to ``beta`` buckets.

    Output bucket ``i`` ends after the last pre-histogram bucket whose
    approximate cumulative size ``A`` satisfies ``A * beta <= i * N``; the
    last output bucket absorbs whatever remains. Comparisons are exact
    integer arithmetic.

    Returns
    -------
    histogram : Histogram
        The ``beta``-bucket result. Its boundaries are a subset of
        ``pre.boundaries`` and start and end at the pre-histogram extremes.
    plan : MergePlan
    """
    beta = check_count(beta, "beta")
    m = pre.n_buckets
    if beta > pre.source_buckets:
        raise DomainError(f"beta={beta} exceeds the source bucket count T={pre.source_buckets}")
    if beta > m:
        raise DomainError(f"beta={beta} exceeds the {m} available pre-histogram buckets")

    n = pre.total
    acc = pre.approx_cumulative
    if n * beta < _SAFE_PRODUCT:
        scaled = acc * beta
        targets = np.arange(1, beta, dtype=np.int64) * n
    else:
        scaled = np.array([int(a) * beta for a in acc], dtype=object)
        targets = np.array([i * n for i in range(1, beta)], dtype=object)
    cuts = np.searchsorted(scaled, targets, side="right").astype(np.int64)
    ends = np.concatenate(([0], cuts, [m]))

    acc_full = np.concatenate(([0], acc))
    sizes = np.append(np.diff(acc_full[ends]), 0)
    boundaries = np.append(pre.boundaries[ends[:-1]], pre.boundaries[m])
    spans = tuple((int(a) + 1, int(b)) for a, b in zip(ends[:-1], ends[1:]))
    return Histogram(boundaries, sizes), MergePlan(spans)


def merge_summaries(summaries, beta):
    """Merge T-bucket histograms into one approximate ``beta``-bucket histogram.

    Parameters
    ----------
    summaries : sequence of Histogram
        Source histograms, all with the same bucket count T.
    beta : int
        Requested bucket count, ``1 <= beta <= T``.

    Returns
    -------
    MergeResult
        ``(histogram, bound)`` where ``bound.epsilon_max == 2N/T``.
    """
    pre = assemble_pre_histogram(summaries)
    hist, _ = merge_to_beta(pre, beta)
    return MergeResult(hist, theoretical_bound(pre.total, pre.source_buckets, beta=beta))


def theoretical_bound(n, t, beta=None):
    """Maximum merged bucket-size deviation ``2n/t`` for ``n`` values and T=``t``."""
    n = check_count(n, "n", minimum=0)
    t = check_count(t, "t")
    if beta is not None:
        beta = check_count(beta, "beta")
    return ErrorBound(n=n, t=t, beta=beta)


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        # repr round-trips, so 0.05 becomes exactly 1/20
        return Fraction(repr(x))
    try:
        return Fraction(x)
    except (TypeError, ValueError):
        raise DomainError(f"not a number: {x!r}") from None


def min_t_for_error(beta, max_fraction):
    """Smallest T with ``2 * beta / T <= max_fraction``.

    ``min_t_for_error(beta, 0.05) == 40 * beta``.
    """
    beta = check_count(beta, "beta")
    f = _as_fraction(max_fraction)
    if not 0 < f <= 1:
        raise DomainError(f"max_fraction must be in (0, 1], got {max_fraction}")
    return math.ceil(Fraction(2 * beta) / f)
