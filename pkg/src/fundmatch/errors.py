"""Exception hierarchy shared across the engine."""


class FundmatchError(Exception):
    """Base class for all engine errors."""


class ValidationError(FundmatchError):
    """Input or configuration violates a documented contract (CLI exit code 1)."""


class IdentityConflictError(ValidationError):
    """The same verified source id is claimed by two master records."""

    def __init__(self, source_id: str, key_a: str, key_b: str):
        self.source_id = source_id
        self.keys = tuple(sorted((key_a, key_b)))
        super().__init__(
            f"source id {source_id!r} claimed by two master records: "
            f"{self.keys[0]!r} and {self.keys[1]!r}"
        )


class ProviderError(FundmatchError):
    """An embedding provider failed; carries the offending doc_id when known."""

    def __init__(self, message: str, doc_id: str | None = None):
        self.doc_id = doc_id
        super().__init__(message if doc_id is None else f"{message} (doc_id={doc_id!r})")
