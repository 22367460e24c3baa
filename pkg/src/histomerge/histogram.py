"""Equi-depth histogram value type, exact construction, and size queries.

A histogram with ``m`` buckets stores ``m + 1`` ascending boundaries and
``m + 1`` sizes whose last entry is always zero. Bucket ``i`` (1-based)
covers ``[boundaries[i-1], boundaries[i])``; the last bucket also includes
its end boundary.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_count, check_values
from .exceptions import DomainError


def _frozen(arr):
    arr = np.array(arr, dtype=np.int64)
    arr.setflags(write=False)
    return arr


class Histogram:
    """Immutable equi-depth (or approximately equi-depth) histogram.

    Parameters
    ----------
    boundaries : array-like of int, shape (m + 1,)
        Non-decreasing bucket boundaries.
    sizes : array-like of int, shape (m + 1,)
        Non-negative bucket sizes; the last entry must be 0.
    """

    __slots__ = ("_boundaries", "_sizes", "_total")

    def __init__(self, boundaries, sizes):
        b = check_values(boundaries, name="boundaries", min_length=2)
        s = check_values(sizes, name="sizes", min_length=2)
        if b.shape != s.shape:
            raise DomainError(
                f"boundaries and sizes must have equal length, got {b.size} and {s.size}"
            )
        if np.any(b[1:] < b[:-1]):
            raise DomainError("boundaries must be non-decreasing")
        if np.any(s < 0):
            raise DomainError("sizes must be non-negative")
        if s[-1] != 0:
            raise DomainError(f"last size must be 0, got {s[-1]}")
        self._boundaries = _frozen(b)
        self._sizes = _frozen(s)
        self._total = int(s.sum())

    @property
    def boundaries(self):
        return self._boundaries

    @property
    def sizes(self):
        return self._sizes

    @property
    def total(self):
        return self._total

    @property
    def n_buckets(self):
        return self._sizes.size - 1

    def pairs(self):
        """Return the ``(boundary, size)`` pairs as plain ints."""
        return [(int(b), int(s)) for b, s in zip(self._boundaries, self._sizes)]

    def cumulative_sizes(self):
        """Prefix sums of the bucket sizes, length ``n_buckets + 1`` starting at 0."""
        return np.concatenate(([0], np.cumsum(self._sizes[:-1])))

    def __eq__(self, other):
        if not isinstance(other, Histogram):
            return NotImplemented
        return np.array_equal(self._boundaries, other._boundaries) and np.array_equal(
            self._sizes, other._sizes
        )

    def __hash__(self):
        return hash((self._boundaries.tobytes(), self._sizes.tobytes()))

    def __repr__(self):
        if self.n_buckets <= 8:
            body = ", ".join(f"({b}, {s})" for b, s in self.pairs())
        else:
            head = ", ".join(f"({b}, {s})" for b, s in self.pairs()[:3])
            body = f"{head}, ... <{self.n_buckets} buckets>"
        return f"Histogram([{body}])"

    def __reduce__(self):
        return (Histogram, (self._boundaries, self._sizes))


@dataclass(frozen=True)
class BucketRange:
    """Inclusive 1-based span of buckets ``i..j``."""

    i: int
    j: int

    @property
    def length(self):
        return self.j - self.i + 1


def build_exact(values, t):
    """Build the exact ``t``-bucket equi-depth histogram of ``values``.

    After sorting, boundary ``i`` (1-based, ``i <= t``) is the value at rank
    ``floor((i - 1) * N / t)`` and the closing boundary is the maximum.
    Bucket ``i`` holds ``floor(i * N / t) - floor((i - 1) * N / t)`` values,
    so sizes differ by at most one when ``t`` does not divide ``N``.

    Parameters
    ----------
    values : array-like of int
        The partition. Order does not matter.
    t : int
        Number of buckets, ``1 <= t <= len(values)``.

    Returns
    -------
    Histogram
    """
    arr = check_values(values)
    t = check_count(t, "t")
    n = arr.size
    if t > n:
        raise DomainError(f"cannot build {t} buckets from {n} values")
    ordered = np.sort(arr, kind="stable")
    ranks = (np.arange(t + 1, dtype=np.int64) * n) // t
    boundaries = np.empty(t + 1, dtype=np.int64)
    boundaries[:t] = ordered[ranks[:t]]
    boundaries[t] = ordered[-1]
    sizes = np.zeros(t + 1, dtype=np.int64)
    sizes[:t] = np.diff(ranks)
    return Histogram(boundaries, sizes)


def _check_index(h, i):
    if not isinstance(i, (int, np.integer)) or isinstance(i, bool):
        raise DomainError(f"bucket index must be an integer, got {i!r}")
    if not 1 <= i <= h.n_buckets:
        raise DomainError(f"bucket index {i} outside 1..{h.n_buckets}")
    return int(i)


def size(h, i):
    """Size of bucket ``i`` (1-based)."""
    i = _check_index(h, i)
    return int(h.sizes[i - 1])


def cumulative(h, i):
    """Total size of buckets ``1..i``; ``cumulative(h, 0)`` is 0."""
    if i == 0:
        return 0
    i = _check_index(h, i)
    return int(h.sizes[:i].sum())


def range_size(h, r):
    """Total size of the buckets in the inclusive range ``r``.

    ``r`` may be a :class:`BucketRange` or an ``(i, j)`` pair.
    """
    if not isinstance(r, BucketRange):
        try:
            r = BucketRange(*r)
        except TypeError:
            raise DomainError(f"invalid bucket range {r!r}") from None
    if r.j < r.i:
        raise DomainError(f"invalid bucket range {r.i}..{r.j}")
    _check_index(h, r.i)
    _check_index(h, r.j)
    return cumulative(h, r.j) - cumulative(h, r.i - 1)


def bucket_index(h, values):
    """Map each value to the 0-based index of the bucket containing it.

    Values outside ``[min, max]`` are clipped to the first or last bucket.
    """
    arr = check_values(values, min_length=0)
    idx = np.searchsorted(h.boundaries[:-1], arr, side="right") - 1
    return np.clip(idx, 0, h.n_buckets - 1)


def recount(h, values):
    """Count how many of ``values`` actually fall in each bucket of ``h``.

    Uses the half-open bucket convention with the last bucket closed, and
    ignores values outside ``[min, max]``. The returned array has the same
    ``m + 1`` layout as ``h.sizes``.
    """
    arr = np.sort(check_values(values, min_length=0))
    b = h.boundaries
    edges = np.searchsorted(arr, b, side="left")
    edges[-1] = np.searchsorted(arr, b[-1], side="right")
    counts = np.zeros(b.size, dtype=np.int64)
    counts[:-1] = np.diff(edges)
    return counts
