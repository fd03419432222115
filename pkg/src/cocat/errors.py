"""Exception hierarchy.

``InputError`` covers malformed data (wrong shapes, unknown ids); the CLI maps it
to exit code 2.  ``AlgebraicError`` covers well-formed data that violates an
algebraic law; it carries a ``witness`` and maps to exit code 3.
"""


class CocatError(Exception):
    """Base class for every error raised by the package."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InputError(CocatError, ValueError):
    pass


class AlgebraicError(CocatError, ValueError):
    pass


# finite groups
class NonAssociative(AlgebraicError):
    pass


class NoIdentity(AlgebraicError):
    pass


class NoInverse(AlgebraicError):
    pass


# groupoids and 2-groupoids
class CompositionGap(AlgebraicError):
    pass


class AssociativityFailure(AlgebraicError):
    pass


class InterchangeFailure(AlgebraicError):
    pass


class NotAFunctor(AlgebraicError):
    pass


class NotAFibration(AlgebraicError):
    pass


class NotWeakEquivalence(AlgebraicError):
    pass


class BoundTooSmall(InputError):
    pass


# sites and presheaves
class CoverageViolation(AlgebraicError):
    pass


class NotFunctorial(AlgebraicError):
    pass


class NonFunctorialDiagram(NotFunctorial):
    pass


class NotSheaf(AlgebraicError):
    pass


class NotLocalWeakEquivalence(AlgebraicError):
    pass


class NotLocallyConnected(AlgebraicError):
    pass


# torsors
class NotTorsor(AlgebraicError):
    pass


class InconsistentRoutes(CocatError, RuntimeError):
    """Two independent computations of the same predicate disagreed."""


# extensions
class NotSurjective(AlgebraicError):
    pass


class IllFormedTwoFunctor(AlgebraicError):
    pass


class NotExact(AlgebraicError):
    pass


class RangeExceeded(InputError):
    pass


# abelian groups / chain complexes
class NoAbelianValues(AlgebraicError):
    pass


class BoundaryNotNilpotent(AlgebraicError):
    pass


# wire format
class SchemaViolation(InputError):
    """JSON input that does not match its schema; ``witness`` is the schema path."""
