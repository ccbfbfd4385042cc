"""Error hierarchy shared by every module.

Each error carries a stable machine-readable ``code`` and the HTTP status
the gateway maps it to. Modules raise these directly; the gateway and the
CLI only ever translate, never invent codes.
"""


class QAError(Exception):
    """Base class for all platform errors."""

    code = "internal"
    http_status = 500

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ValidationFailed(QAError):
    """Request or entity failed validation (HTTP 400)."""

    code = "validation_failed"
    http_status = 400


class InvalidName(ValidationFailed):
    code = "invalid_name"


class DuplicateName(ValidationFailed):
    code = "duplicate_name"


class EmptyText(ValidationFailed):
    code = "empty_text"

    def __init__(self, doc_id: str):
        super().__init__(f"document {doc_id!r} has empty text")
        self.doc_id = doc_id


class EmptyDatastore(ValidationFailed):
    code = "empty_datastore"


class IndexNotBuilt(ValidationFailed):
    code = "index_not_built"


class NlistTooLarge(ValidationFailed):
    code = "nlist_too_large"


class DimensionMismatch(ValidationFailed):
    code = "dimension_mismatch"


class NprobeOutOfRange(ValidationFailed):
    code = "nprobe_out_of_range"


class UnknownEmbedder(ValidationFailed):
    code = "unknown_embedder"


class EmbedderUnavailable(ValidationFailed):
    code = "embedder_unavailable"


class MissingEndpoint(ValidationFailed):
    code = "missing_endpoint"


class PayloadMismatch(ValidationFailed):
    code = "payload_mismatch"


class TooFewOptions(ValidationFailed):
    code = "too_few_options"


class NoEligibleWord(ValidationFailed):
    code = "no_eligible_word"


class DuplicateSkillIds(ValidationFailed):
    code = "duplicate_skill_ids"


class ContextRequired(ValidationFailed):
    code = "context_required"


class ParseError(ValidationFailed):
    code = "parse_error"

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SchemaError(ValidationFailed):
    code = "schema_error"

    def __init__(self, message: str, test: int | None = None, case: int | None = None):
        where = []
        if test is not None:
            where.append(f"test {test}")
        if case is not None:
            where.append(f"case {case}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)
        self.test = test
        self.case = case


class NotFound(QAError):
    """Addressed resource does not exist, or the caller may not know it does (HTTP 404)."""

    code = "not_found"
    http_status = 404


class UnknownDatastore(NotFound):
    code = "unknown_datastore"


class UnknownWorker(NotFound):
    code = "unknown_worker"


class SkillNotFound(NotFound):
    code = "skill_not_found"


class UnknownSuite(NotFound):
    code = "unknown_suite"


class NotOwner(NotFound):
    # reported with 404 so non-owners cannot probe for existence
    code = "not_owner"


class InvalidToken(QAError):
    code = "invalid_token"
    http_status = 401


class RemoteError(QAError):
    """A remote worker or skill endpoint failed (HTTP 502)."""

    code = "remote_error"
    http_status = 502


class RemoteUnreachable(RemoteError):
    code = "remote_unreachable"


class RemoteSkillError(RemoteError):
    code = "remote_skill_error"
