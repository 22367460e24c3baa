"""Mergeable equi-depth histograms with guaranteed bucket-size error."""

__version__ = "0.1.0"

from .exceptions import (
    DomainError,
    SummaryError,
    SummaryExistsError,
    SummaryInvariantError,
    SummaryParseError,
    UnsupportedVersionError,
)
from .histogram import BucketRange, Histogram, build_exact, cumulative, range_size, size
from .merge import (
    ErrorBound,
    MergePlan,
    PreHistogram,
    assemble_pre_histogram,
    merge_summaries,
    merge_to_beta,
    min_t_for_error,
    theoretical_bound,
)
from .sampling import SampleSpec, build_sampled_histogram, sample_partition
from .metrics import ErrorReport, boundary_error, evaluate, exact_union_histogram, size_error
from .datagen import GumbelSpec, generate_gumbel, ingest_tsv
from .store import Catalog, PartitionSummary, read_summary, select_interval, write_summary
from .estimators import EquiDepthHistogram, HistogramMerger, TupleSamplingHistogram

__all__ = [
    "BucketRange",
    "Catalog",
    "DomainError",
    "EquiDepthHistogram",
    "ErrorBound",
    "ErrorReport",
    "GumbelSpec",
    "Histogram",
    "HistogramMerger",
    "MergePlan",
    "PartitionSummary",
    "PreHistogram",
    "SampleSpec",
    "SummaryError",
    "SummaryExistsError",
    "SummaryInvariantError",
    "SummaryParseError",
    "TupleSamplingHistogram",
    "UnsupportedVersionError",
    "assemble_pre_histogram",
    "boundary_error",
    "build_exact",
    "build_sampled_histogram",
    "cumulative",
    "evaluate",
    "exact_union_histogram",
    "generate_gumbel",
    "ingest_tsv",
    "merge_summaries",
    "merge_to_beta",
    "min_t_for_error",
    "range_size",
    "read_summary",
    "sample_partition",
    "select_interval",
    "size",
    "size_error",
    "theoretical_bound",
    "write_summary",
]
