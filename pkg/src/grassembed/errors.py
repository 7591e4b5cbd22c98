class GrassembedError(Exception):
    """Base class for library errors."""


class FieldError(GrassembedError, ValueError):
    pass


class DimensionError(GrassembedError, ValueError):
    """Operands live in incompatible spaces or have the wrong dimension."""


class NotAnEmbeddingError(GrassembedError):
    """A map fails a required embedding property.

    ``witness`` carries the offending object (a subspace, a pair, a star).
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotLinePreservingError(NotAnEmbeddingError):
    pass


class NotInducedError(NotAnEmbeddingError):
    """No semilinear map induces the given table."""


class BudgetExceeded(GrassembedError):
    def __init__(self, message, budget=None):
        super().__init__(message)
        self.budget = budget


class FormatError(GrassembedError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
