"""Skewed synthetic data and ingestion of whitespace-separated log records."""

import logging
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from ._validation import check_count, check_values
from .exceptions import DomainError

logger = logging.getLogger(__name__)

_FIELD_SEP = re.compile(r"[ \t]+")
_INT64_MIN, _INT64_MAX = -(2**63), 2**63 - 1


@dataclass(frozen=True)
class GumbelSpec:
    """Parameters for :func:`generate_gumbel`.

    Real draws are multiplied by ``quantize`` and rounded to the nearest
    integer, so the default keeps three decimal digits.
    """

    count: int
    loc: float = 0.0
    scale: float = 1.0
    seed: int = 0
    quantize: float = 1000.0

    def __post_init__(self):
        check_count(self.count, "count")
        check_count(self.seed, "seed", minimum=0)
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise DomainError(f"scale must be positive, got {self.scale}")
        if not math.isfinite(self.loc):
            raise DomainError(f"loc must be finite, got {self.loc}")
        if not (math.isfinite(self.quantize) and self.quantize > 0):
            raise DomainError(f"quantize must be positive, got {self.quantize}")


def gumbel_inverse_cdf(u, loc=0.0, scale=1.0):
    """Gumbel quantile function ``loc - scale * ln(-ln(u))`` for u in (0, 1)."""
    u = np.asarray(u, dtype=np.float64)
    if np.any((u <= 0) | (u >= 1)):
        raise DomainError("u must lie strictly between 0 and 1")
    return loc - scale * np.log(-np.log(u))


def gumbel_draws(spec):
    """Real-valued Gumbel draws by inverse transform sampling."""
    rng = np.random.default_rng(spec.seed)
    u = rng.uniform(np.finfo(np.float64).tiny, 1.0, spec.count)
    return gumbel_inverse_cdf(u, spec.loc, spec.scale)


def generate_gumbel(spec):
    """Quantized Gumbel draws as int64 values, deterministic per seed."""
    x = np.rint(gumbel_draws(spec) * spec.quantize)
    return check_values(x, name="quantized draws")


def day_seed(seed, day):
    """Independent per-partition seed derived from a base seed."""
    return int(np.random.SeedSequence([seed, day]).generate_state(1, np.uint64)[0] >> 1)


def write_tsv(path, values):
    """Write values as 4-column log lines with the value in column 4."""
    arr = check_values(values, min_length=0)
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for i, v in enumerate(arr.tolist()):
            fh.write(f"syn\tpage_{i}\t1\t{v}\n")
    return path


class IngestResult(NamedTuple):
    values: np.ndarray
    skipped: int


def ingest_tsv(path, value_column=4):
    """Read integer values from one column of a whitespace-separated file.

    Fields are split on runs of spaces and tabs; ``value_column`` is 1-based.
    Lines that are too short or whose field is not an integer are skipped and
    counted. Blank lines are ignored.

    Returns
    -------
    IngestResult
        ``(values, skipped)``.
    """
    col = check_count(value_column, "value_column") - 1
    values = []
    skipped = 0
    with open(path, encoding="utf-8", errors="replace") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            fields = _FIELD_SEP.split(line)
            try:
                v = int(fields[col])
            except (IndexError, ValueError):
                skipped += 1
                continue
            if not _INT64_MIN <= v <= _INT64_MAX:
                skipped += 1
                continue
            values.append(v)
    if not values:
        raise DomainError(f"{path}: no parsable values in column {value_column}")
    if skipped:
        logger.warning("%s: skipped %d malformed line(s)", path, skipped)
    return IngestResult(check_values(values), skipped)
