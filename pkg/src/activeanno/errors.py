"""Exception hierarchy shared across the package."""


class ActiveAnnoError(Exception):
    """Base class for all errors raised by this package."""


class DatasetError(ActiveAnnoError):
    """Malformed dataset file, duplicate ids, empty input."""


class EmbeddingError(ActiveAnnoError):
    """Embedder misconfiguration or inconsistent precomputed vectors."""


class NumericsError(ActiveAnnoError):
    """Invalid numeric input to PCA / clustering / neighbour search."""


class SessionError(ActiveAnnoError):
    """Operation not valid in the session's current phase or state."""


class InvalidResponseError(SessionError):
    """Annotator response rejected; session state is unchanged."""


class EvalError(ActiveAnnoError):
    """Evaluation inputs missing or inconsistent."""
