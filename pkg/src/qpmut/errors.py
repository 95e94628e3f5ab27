"""Exception hierarchy for the mutation engine."""


class QpmutError(Exception):
    """Base class for all engine errors."""


class CompositionError(QpmutError):
    """Paths with mismatched endpoints cannot be concatenated."""


class ContextError(QpmutError):
    """Operands live over different quivers, truncation orders or fields."""


class NotCyclicError(QpmutError):
    """A term that is not a cycle was fed to a potential operation."""


class NotInvertibleError(QpmutError):
    """The linear part of a substitution (or a matrix) is singular."""


class MutationNotDefined(QpmutError):
    """Mutation was requested at a vertex lying on a 2-cycle."""


class TruncationTooSmall(QpmutError):
    """The jet order N is too small for the requested operation."""


class CertificateError(QpmutError):
    """A machine-checked certificate failed verification."""


class ShapeError(QpmutError):
    """Matrix dimensions do not match."""


class SchemaError(QpmutError):
    """A document does not conform to the serialization schema."""


class InvariantError(QpmutError):
    """A parsed or constructed object violates a structural invariant."""
