"""Exception hierarchy shared across the toolkit."""


class CoreselectError(Exception):
    """Base class for all toolkit errors."""


# --- corpus / templating ---

class MissingField(CoreselectError):
    """A template placeholder has no matching sample field."""


class DatasetMismatch(CoreselectError):
    """Template and sample belong to different datasets."""


class ParseError(CoreselectError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateId(CoreselectError):
    """A sample id occurs more than once in a corpus."""


# --- embeddings ---

class EmptyInput(CoreselectError):
    """Pooling called with zero token rows."""


class ZeroVector(CoreselectError):
    """Cannot L2-normalize an all-zero vector."""


class FormatError(CoreselectError):
    """Bad magic bytes or unsupported version in a binary file."""


class TruncatedFile(CoreselectError):
    """Binary file ends before the header-declared payload."""


class DimensionMismatch(CoreselectError):
    """Vector or matrix dimensions disagree."""


# --- clustering ---

class TooFewSamples(CoreselectError):
    """Requested more clusters than available samples."""


class NotNormalized(CoreselectError):
    """Operation requires unit-length embeddings."""


# --- centers ---

class UnknownTask(CoreselectError):
    """No corpus sample carries the requested task label."""


# --- selection ---

class NotATaskSample(CoreselectError):
    """Initial center does not belong to the target task."""


class BudgetExceedsPool(CoreselectError):
    """Requested more samples than the task pool holds."""


class EmptySelection(CoreselectError):
    """Coverage radius needs at least one selected sample."""


# --- scoring ---

class InvalidProbability(CoreselectError):
    """Token probability outside (0, 1]."""


class TooFewOptions(CoreselectError):
    """Prediction needs at least two answer options."""


class LengthMismatch(CoreselectError):
    """Predictions and gold labels differ in length."""


# --- pipeline ---

class UnknownId(CoreselectError):
    """Selection references an id absent from the corpus."""


class AlignmentError(CoreselectError):
    """Corpus and embedding file ids do not line up."""


class StageError(CoreselectError):
    """Wraps a module error with the pipeline stage it occurred in."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause
