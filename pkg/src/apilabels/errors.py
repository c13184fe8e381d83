"""Exception taxonomy, mapped onto CLI exit codes.

UserError -> 1, DataError -> 2, RemoteError -> 3. Anything else is a bug.
"""

from __future__ import annotations


class ApiLabelsError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class UserError(ApiLabelsError):
    """Bad configuration, arguments, or incompatible requests."""

    exit_code = 1


class SchemaError(UserError):
    """CSV import schema is missing or names a nonexistent column."""


class ConfigError(UserError):
    """Experiment configuration is invalid."""


class CompatibilityError(UserError):
    """Model and request disagree on corpus configuration."""


class DataError(ApiLabelsError):
    """Loaded or derived data violates a contract."""

    exit_code = 2


class DecodeError(DataError):
    """Input file could not be decoded; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class IntegrityError(DataError):
    """Duplicate composed row IDs or dangling references."""


class EmptyLabelsError(DataError):
    """Label filtering removed every label column."""


class DatasetTooSmallError(DataError):
    """Too few linked rows to honor the requested split."""


class DivergenceError(DataError):
    """Gradient descent produced a non-finite loss."""


class StoreCorruptionError(DataError):
    """Word-vector store has inconsistent dimensions."""


class RemoteError(ApiLabelsError):
    """Tracker API failures."""

    exit_code = 3


class CredentialError(RemoteError):
    """Token missing, invalid, or lacking the required scope."""


class RateLimitError(RemoteError):
    """Rate limit still exceeded after the configured retries."""


class TransientError(RemoteError):
    """Network failure; carries a resume cursor when known."""

    def __init__(self, message: str, resume_page: int | None = None):
        super().__init__(message)
        self.resume_page = resume_page


class PermissionDeniedError(RemoteError):
    """Write access denied by the tracker."""
