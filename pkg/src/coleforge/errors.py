"""Shared exception types."""


class ColeforgeError(Exception):
    """Base class for all package errors."""


class UnknownFieldPath(ColeforgeError):
    """A masked-field path does not exist in the plan schema."""


class MissingSlot(ColeforgeError):
    """A sentinel slot was left unfilled during decoding."""


class TypeCoercionFailure(ColeforgeError):
    """A slot fill could not be coerced to the field's type."""


class PlanValidationError(ColeforgeError):
    """A decoded or submitted plan violates schema invariants."""

    def __init__(self, findings):
        self.findings = list(findings)
        super().__init__("; ".join(f"{f.field}: {f.message}" for f in self.findings))


class OutOfRange(ColeforgeError):
    """Value outside a bin spec's range with clamping disabled."""


class IndexOutOfRange(ColeforgeError):
    """Bin index outside [0, n_bins)."""


class DimensionMismatch(ColeforgeError):
    """Raster dimensions or channel counts disagree."""


class InvalidStack(ColeforgeError):
    """A layer stack violates its invariants."""


class RasterizerUnavailable(ColeforgeError):
    """No rasterizer backend can render the requested document."""


class LengthMismatch(ColeforgeError):
    """Prediction and ground-truth box lists differ in length."""


class MalformedJudgeResponse(ColeforgeError):
    """Judge output is not the strict five-criterion JSON."""


class UnparseableVerdict(ColeforgeError):
    """Pairwise verdict text is not '| Image 1' or '| Image 2'."""


class StageFailure(ColeforgeError):
    """A pipeline stage failed; carries the stage name and partial bundle."""

    def __init__(self, stage, cause, partial=None):
        self.stage = stage
        self.cause = cause
        self.partial = partial
        super().__init__(f"stage '{stage}' failed: {cause}")


class BackendUnreachable(ColeforgeError):
    """Remote backend could not be reached within the retry budget."""


class BadResponse(ColeforgeError):
    """Remote backend returned a malformed or non-JSON payload."""


class PromptTooLong(ColeforgeError):
    """Prompt exceeds the configured token budget."""


class EmptyDataset(ColeforgeError):
    """Pair generation was asked to sample from an empty dataset."""


class ParseError(ColeforgeError):
    """Corpus file could not be parsed; carries the 1-based line number."""

    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class NotFound(ColeforgeError):
    """Requested design id is not in the store."""


class InvalidEdit(ColeforgeError):
    """An edit would violate bundle invariants."""

    def __init__(self, message, findings=None):
        self.findings = list(findings or [])
        super().__init__(message)


class Conflict(ColeforgeError):
    """Edit was based on a stale version."""
