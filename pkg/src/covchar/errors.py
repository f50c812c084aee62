"""Exception types shared across the package."""


class CovcharError(Exception):
    """Base class for all package errors."""


class MalformedTable(CovcharError):
    """Cayley-table document is structurally invalid (shape, range, labels)."""


class NotAGroup(CovcharError):
    """Table violates a group axiom; the message names the witnessing cells."""


class NotASubgroup(CovcharError):
    """Member set is not closed / misses the identity."""


class NotNormal(CovcharError):
    """Operation requires a normal subgroup."""


class TooLarge(CovcharError):
    """Input exceeds an enumeration bound."""


class UnknownFamily(CovcharError):
    """Builtin group family name not recognized."""


class ParameterOutOfRange(CovcharError):
    """Builtin family parameter outside the supported range."""


class IndexOutOfRange(CovcharError):
    """Element index outside 0..order-1."""


class NotInDomain(CovcharError):
    """Element is not in the character's domain subgroup."""


class DomainMismatch(CovcharError):
    """Operands live on different groups."""


class NonPositiveWeight(CovcharError):
    """Haar weights must be strictly positive."""


class NotAnAutomorphism(CovcharError):
    """Permutation fails bijectivity or product preservation."""


class NotCovariant(CovcharError):
    """Function violates the covariance property beyond tolerance."""


class UnknownTheorem(CovcharError):
    """Theorem id not in the registered check table."""


class GridTooCoarse(CovcharError):
    """Quadrature grid cannot resolve the requested oscillation."""


class TruncationViolation(CovcharError):
    """Function is not negligible on the truncation-box boundary."""
