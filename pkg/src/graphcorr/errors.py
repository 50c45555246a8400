"""Exception hierarchy shared by all graphcorr modules."""


class GraphcorrError(Exception):
    """Base class for every error raised by graphcorr."""


class DimensionError(GraphcorrError, ValueError):
    """Array shapes that do not fit together."""


class NonFiniteError(GraphcorrError, ValueError):
    """NaN or Inf found in numerical input."""


class SingularMatrixError(GraphcorrError):
    """A matrix is not invertible at the requested tolerance."""


class OrthonormalityError(GraphcorrError):
    """A vector family expected to be orthonormal is not."""


class GraphError(GraphcorrError, ValueError):
    """Malformed graph or graph morphism."""


class CorrespondenceError(GraphcorrError, ValueError):
    """Malformed or unusable correspondence presentation."""


class DecompositionError(GraphcorrError):
    """Block decomposition failed to exhaust the module."""


class SchemaError(GraphcorrError, ValueError):
    """A serialized document does not match its schema.

    ``field`` is a dotted path to the offending entry and ``line`` is the
    1-based line number for JSON syntax errors (``None`` otherwise).
    """

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
