"""On-disk partition summaries and label-range selection over a directory.

Each summary is a UTF-8 JSON object stored as ``<label>__<partition_id>.edh.json``::

    {"format_version": 1, "partition_id": "...", "label": "2015-01-01",
     "n": 27, "t": 3, "boundaries": [...], "sizes": [..., 0]}
"""

import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .exceptions import (
    DomainError,
    SummaryExistsError,
    SummaryInvariantError,
    SummaryParseError,
    UnsupportedVersionError,
)
from .histogram import Histogram

FORMAT_VERSION = 1
SUFFIX = ".edh.json"
_KEYS = ("format_version", "partition_id", "label", "n", "t", "boundaries", "sizes")


def _check_name(value, field):
    if not isinstance(value, str) or not value:
        raise DomainError(f"{field} must be a non-empty string")
    if any(c in value for c in "/\\\0") or value in (".", ".."):
        raise DomainError(f"{field} {value!r} is not usable in a file name")
    return value


@dataclass(frozen=True)
class PartitionSummary:
    """Exact T-bucket histogram of one labeled partition."""

    partition_id: str
    label: str
    n: int
    t: int
    histogram: Histogram
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        _check_name(self.partition_id, "partition_id")
        _check_name(self.label, "label")
        if self.n != self.histogram.total:
            raise DomainError(f"n={self.n} but histogram sizes sum to {self.histogram.total}")
        if self.t != self.histogram.n_buckets:
            raise DomainError(f"t={self.t} but histogram has {self.histogram.n_buckets} buckets")

    @classmethod
    def from_histogram(cls, histogram, label, partition_id):
        return cls(
            partition_id=partition_id,
            label=label,
            n=histogram.total,
            t=histogram.n_buckets,
            histogram=histogram,
        )

    @property
    def filename(self):
        return f"{self.label}__{self.partition_id}{SUFFIX}"

    def to_json(self):
        """Canonical serialization; equal summaries give identical text."""
        doc = {
            "format_version": self.format_version,
            "partition_id": self.partition_id,
            "label": self.label,
            "n": self.n,
            "t": self.t,
            "boundaries": self.histogram.boundaries.tolist(),
            "sizes": self.histogram.sizes.tolist(),
        }
        return json.dumps(doc, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SummaryParseError(f"invalid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise SummaryParseError("summary must be a JSON object")
        missing = [k for k in _KEYS if k not in doc]
        if missing:
            raise SummaryParseError(f"missing keys: {', '.join(missing)}")

        version = doc["format_version"]
        if not _is_int(version):
            raise SummaryParseError("format_version must be an integer")
        if version != FORMAT_VERSION:
            raise UnsupportedVersionError(
                f"format_version {version} is not supported (expected {FORMAT_VERSION})"
            )
        for key in ("n", "t"):
            if not _is_int(doc[key]):
                raise SummaryParseError(f"{key} must be an integer")
        for key in ("boundaries", "sizes"):
            seq = doc[key]
            if not isinstance(seq, list) or not all(_is_int(v) for v in seq):
                raise SummaryParseError(f"{key} must be an array of integers")
        for key in ("partition_id", "label"):
            if not isinstance(doc[key], str):
                raise SummaryParseError(f"{key} must be a string")

        try:
            hist = Histogram(doc["boundaries"], doc["sizes"])
            return cls(
                partition_id=doc["partition_id"],
                label=doc["label"],
                n=doc["n"],
                t=doc["t"],
                histogram=hist,
                format_version=version,
            )
        except DomainError as exc:
            raise SummaryInvariantError(str(exc)) from None


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def write_summary(summary, directory, overwrite=False):
    """Atomically write ``summary`` into ``directory`` and return its path.

    Raises :class:`SummaryExistsError` if a file for the same label and
    partition id exists and ``overwrite`` is false.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / summary.filename
    if path.exists() and not overwrite:
        raise SummaryExistsError(f"{path} already exists")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=SUFFIX)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(summary.to_json())
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path


def read_summary(path):
    """Load and fully validate a summary file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise SummaryParseError(f"{path}: not UTF-8: {exc}") from None
    try:
        return PartitionSummary.from_json(text)
    except (SummaryParseError, SummaryInvariantError, UnsupportedVersionError) as exc:
        raise type(exc)(f"{path}: {exc}") from None


class Catalog:
    """Summaries found in one directory, ordered by label.

    Parameters
    ----------
    directory : path-like
        Directory scanned for ``*.edh.json`` files. Hidden temp files are
        ignored.
    """

    def __init__(self, directory):
        self.directory = Path(directory)
        if not self.directory.is_dir():
            raise FileNotFoundError(f"catalog directory {self.directory} does not exist")
        summaries = {}
        paths = {}
        for path in sorted(self.directory.glob(f"*{SUFFIX}")):
            if path.name.startswith("."):
                continue
            s = read_summary(path)
            if s.label in summaries:
                raise DomainError(
                    f"duplicate label {s.label!r} in {paths[s.label].name} and {path.name}"
                )
            summaries[s.label] = s
            paths[s.label] = path
        self._labels = sorted(summaries)
        self._summaries = summaries
        self._paths = paths

    @property
    def labels(self):
        return list(self._labels)

    def path_of(self, label):
        return self._paths[label]

    def __getitem__(self, label):
        return self._summaries[label]

    def __len__(self):
        return len(self._labels)

    def __iter__(self):
        return (self._summaries[lb] for lb in self._labels)

    def __repr__(self):
        return f"Catalog({str(self.directory)!r}, {len(self)} summaries)"


def select_interval(catalog, from_label, to_label):
    """Summaries with ``from_label <= label <= to_label``, in label order."""
    if from_label > to_label:
        raise DomainError(f"empty interval: {from_label!r} > {to_label!r}")
    chosen = [s for s in catalog if from_label <= s.label <= to_label]
    if not chosen:
        raise DomainError(f"no summaries with labels in [{from_label}, {to_label}]")
    return chosen
