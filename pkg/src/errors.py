"""Exception hierarchy for the orthoforms toolkit.

Every error raised for bad input derives from `OrthoformsError`, itself a
`ValueError`, so callers can treat them the way the CLI does: as rejected input.
`InvariantViolation` is the exception to that rule; it means a cross-check that
must always hold did not, i.e. a bug.
"""

from typing import Any, Optional


class OrthoformsError(ValueError):
    """Base class for all input and precondition errors."""


class InvariantViolation(RuntimeError):
    """An internal consistency check failed."""


class NonInvolutive(OrthoformsError):
    """The point map given as sigma does not square to the identity."""


class DuplicateLabel(OrthoformsError):
    """A point label occurs more than once."""


class UnknownLabel(OrthoformsError):
    """A label does not name a point of the space."""


class NotTauSymmetric(OrthoformsError):
    """Values do not satisfy x(sigma(t)) = conj(x(t))."""


class SpaceMismatch(OrthoformsError):
    """Operands live on different spaces."""


class DimensionMismatch(OrthoformsError):
    """A vector or matrix has the wrong shape for its space."""


class NotOrthogonal(OrthoformsError):
    """A bilinear form is not orthogonal.

    Attributes:
        counterexample: An orthogonal pair (x, y) on which the form does not vanish.
    """

    def __init__(self, message: str, counterexample: Optional[tuple[Any, Any]] = None):
        super().__init__(message)
        self.counterexample = counterexample


class NotSymmetric(OrthoformsError):
    """A bilinear form is not symmetric."""


class NotOrthogonalityPreserving(OrthoformsError):
    """A linear map sends some orthogonal pair to a non-orthogonal pair.

    Attributes:
        witness: The orthogonal domain pair (x, y) whose images overlap.
    """

    def __init__(self, message: str, witness: Optional[tuple[Any, Any]] = None):
        super().__init__(message)
        self.witness = witness


class MultiOrbitSupport(NotOrthogonalityPreserving):
    """A codomain point reads values from more than one domain orbit."""


class InvalidStructure(OrthoformsError):
    """A preserver structure breaks its invariants."""


class InvalidCertificate(OrthoformsError):
    """A bi-orthogonality certificate does not yield a two-sided inverse."""


class NotOPBijection(OrthoformsError):
    """The map is required to be an orthogonality preserving bijection."""


class PreconditionFailed(OrthoformsError):
    """A check was called outside of its hypotheses."""


class IncompatibleSpaces(OrthoformsError):
    """No bi-orthogonality preserving map exists between the given spaces."""


class UnknownSuite(OrthoformsError):
    """The fuzz suite name is not registered."""


class ConfigError(OrthoformsError):
    """Invalid generator or CLI configuration."""


class DocumentError(OrthoformsError):
    """A JSON document is malformed or fails its schema.

    Attributes:
        line: 1-based line of a JSON syntax error, if known.
        column: 1-based column of a JSON syntax error, if known.
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        super().__init__(message)
        self.line = line
        self.column = column
