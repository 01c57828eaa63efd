"""Exception types shared across the package.

Everything derived from :class:`WordshipError` is an input problem (bad file,
bad record, bad lexicon) and maps to exit code 1 on the command line.
:class:`InvariantError` signals a bug in the computation and maps to exit 2.
"""

from __future__ import annotations


class WordshipError(Exception):
    """Base class for user-facing input errors."""


class CorpusError(WordshipError):
    pass


class CorpusFormatError(CorpusError):
    """A corpus or persisted-state file could not be parsed."""

    def __init__(self, message: str, offset: int | None = None) -> None:
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class SchemaVersionError(CorpusError):
    def __init__(self, expected: int, found: object) -> None:
        super().__init__(f"schema version mismatch: expected schema_version {expected}, found {found!r}")
        self.expected = expected
        self.found = found


class TokenizeError(WordshipError):
    pass


class LexiconError(WordshipError):
    pass


class ClassificationError(WordshipError):
    pass


class ConfigError(WordshipError):
    pass


class ProviderError(WordshipError):
    """A context provider failed to answer a lookup."""

    def __init__(self, provider: str, message: str, retryable: bool = True) -> None:
        super().__init__(f"{provider}: {message}")
        self.provider = provider
        self.retryable = retryable


class RateLimitError(ProviderError):
    def __init__(self, provider: str, retry_after: float | None = None) -> None:
        super().__init__(provider, "rate limit exceeded", retryable=True)
        self.retry_after = retry_after


class MissingContextError(ProviderError):
    """No cached lookup exists for a word; retrying cannot help."""

    def __init__(self, provider: str, word: str) -> None:
        super().__init__(provider, f"no cached entry for {word!r}", retryable=False)
        self.word = word


class CacheError(WordshipError):
    """The context cache file is unreadable or malformed."""


class ReportError(WordshipError):
    pass


class InvariantError(RuntimeError):
    """An internal consistency check failed."""
