"""Input validation helpers shared by the functional API and the estimators."""

import numbers

import numpy as np

from .exceptions import DomainError

_INT64 = np.iinfo(np.int64)


def check_values(values, *, name="values", min_length=1):
    """Coerce ``values`` to a 1-D int64 array.

    Integer-valued floats are accepted; anything with a fractional part,
    NaN, or outside the int64 range is rejected.
    """
    arr = np.asarray(values)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_length:
        raise DomainError(f"{name} must hold at least {min_length} value(s), got {arr.size}")
    if arr.dtype.kind in "iu":
        if arr.dtype.kind == "u" and arr.size and arr.max() > _INT64.max:
            raise DomainError(f"{name} exceed the int64 range")
        return arr.astype(np.int64, copy=False)
    if arr.dtype.kind == "b":
        return arr.astype(np.int64)
    if arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)):
            raise DomainError(f"{name} must be finite")
        if np.any(arr != np.round(arr)):
            raise DomainError(f"{name} must be integers")
        if arr.size and (arr.min() < _INT64.min or arr.max() > _INT64.max):
            raise DomainError(f"{name} exceed the int64 range")
        return arr.astype(np.int64)
    if arr.dtype == object:
        try:
            return np.array([int(v) for v in arr], dtype=np.int64)
        except (TypeError, ValueError, OverflowError) as exc:
            raise DomainError(f"{name} must be integers: {exc}") from None
    raise DomainError(f"{name} must be integers, got dtype {arr.dtype}")


def check_count(value, name, *, minimum=1):
    """Validate a positive integer parameter such as a bucket count."""
    if isinstance(value, (bool, np.bool_)) or not isinstance(value, numbers.Integral):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_partitions(partitions, *, name="partitions"):
    """Validate a non-empty sequence of value sequences."""
    if isinstance(partitions, np.ndarray) and partitions.ndim == 1 and partitions.dtype != object:
        raise DomainError(f"{name} must be a sequence of value sequences")
    parts = [check_values(p, name=f"{name}[{i}]") for i, p in enumerate(partitions)]
    if not parts:
        raise DomainError(f"{name} must not be empty")
    return parts
