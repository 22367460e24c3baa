"""scikit-learn style wrappers around the histogram builders.

All three estimators expose ``fit`` / ``transform`` / ``get_params`` and
store the fitted :class:`~histomerge.histogram.Histogram` as ``histogram_``.
``transform`` maps values to 0-based bucket indices, which lets a fitted
histogram act as a quantile discretizer inside a pipeline.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_count, check_partitions, check_values
from .histogram import bucket_index, build_exact
from .merge import assemble_pre_histogram, merge_to_beta, theoretical_bound
from .metrics import evaluate
from .sampling import SampleSpec, build_sampled_histogram, sample_partitions


class _HistogramTransformMixin(TransformerMixin):
    def transform(self, X):
        """Return the 0-based bucket index of each value, shape (n, 1)."""
        check_is_fitted(self, "histogram_")
        values = check_values(X, name="X", min_length=0)
        return bucket_index(self.histogram_, values).reshape(-1, 1)

    @property
    def boundaries_(self):
        check_is_fitted(self, "histogram_")
        return self.histogram_.boundaries

    @property
    def sizes_(self):
        check_is_fitted(self, "histogram_")
        return self.histogram_.sizes


class EquiDepthHistogram(_HistogramTransformMixin, BaseEstimator):
    """Exact equi-depth histogram of a single partition.

    Parameters
    ----------
    n_buckets : int, default=254
        Number of buckets T.

    Attributes
    ----------
    histogram_ : Histogram
    n_samples_seen_ : int
    """

    def __init__(self, n_buckets=254):
        self.n_buckets = n_buckets

    def fit(self, X, y=None):
        values = check_values(X, name="X")
        self.histogram_ = build_exact(values, check_count(self.n_buckets, "n_buckets"))
        self.n_samples_seen_ = int(values.size)
        return self


class HistogramMerger(_HistogramTransformMixin, BaseEstimator):
    """Merge T-bucket partition histograms into one ``n_buckets`` histogram.

    ``fit`` takes a sequence of :class:`Histogram` (or summaries exposing a
    ``histogram`` attribute), all with the same bucket count.

    Parameters
    ----------
    n_buckets : int, default=254
        Output bucket count beta; must not exceed the source bucket count.

    Attributes
    ----------
    histogram_ : Histogram
        The merged histogram.
    pre_histogram_ : PreHistogram
    plan_ : MergePlan
    bound_ : ErrorBound
        Guaranteed maximum bucket-size deviation ``2N/T``.
    """

    def __init__(self, n_buckets=254):
        self.n_buckets = n_buckets

    def fit(self, X, y=None):
        beta = check_count(self.n_buckets, "n_buckets")
        self.pre_histogram_ = assemble_pre_histogram(X)
        self.histogram_, self.plan_ = merge_to_beta(self.pre_histogram_, beta)
        self.bound_ = theoretical_bound(
            self.pre_histogram_.total, self.pre_histogram_.source_buckets, beta=beta
        )
        return self

    def report(self, partitions):
        """Error report of the merged histogram against the raw partitions."""
        check_is_fitted(self, "histogram_")
        return evaluate(self.histogram_, partitions, self.pre_histogram_.source_buckets)


class TupleSamplingHistogram(_HistogramTransformMixin, BaseEstimator):
    """Histogram built from an edge-preserving random sample of each partition.

    Parameters
    ----------
    n_buckets : int, default=254
    sample_size : int, default=10160
        Tuples drawn per partition (both extremes always included).
    random_state : int, default=0
        Base seed; partition ``i`` is sampled with ``random_state ^ i``.
    """

    def __init__(self, n_buckets=254, sample_size=10160, random_state=0):
        self.n_buckets = n_buckets
        self.sample_size = sample_size
        self.random_state = random_state

    def fit(self, X, y=None):
        parts = check_partitions(X)
        spec = SampleSpec(self.sample_size, self.random_state)
        self.samples_ = sample_partitions(parts, spec)
        self.n_samples_seen_ = int(sum(p.size for p in parts))
        self.histogram_ = build_sampled_histogram(
            self.samples_, check_count(self.n_buckets, "n_buckets"), self.n_samples_seen_
        )
        return self

    def report(self, partitions):
        check_is_fitted(self, "histogram_")
        return evaluate(self.histogram_, partitions, self.sample_size)
