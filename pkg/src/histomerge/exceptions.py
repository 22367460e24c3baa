"""Exception types raised by histomerge."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class SummaryError(Exception):
    """Base class for problems with a stored partition summary."""


class SummaryParseError(SummaryError):
    """The summary file is not valid JSON or lacks required fields."""


class SummaryInvariantError(SummaryError):
    """The summary parsed but describes an ill-formed histogram."""


class UnsupportedVersionError(SummaryError):
    """The summary was written with a format version this library cannot read."""


class SummaryExistsError(SummaryError, FileExistsError):
    """A summary with the same label and partition id is already stored."""
