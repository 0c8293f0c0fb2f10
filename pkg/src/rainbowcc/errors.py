"""Exception types shared across the package.

Every domain failure raises a subclass of SchemeError so callers (and the
CLI) can separate modelling errors from I/O errors.
"""


class SchemeError(Exception):
    """Base class for all domain errors raised by this package."""


class KindMismatch(SchemeError):
    """Operation or structure applied to elements of the wrong kind."""


class EmptyFamily(SchemeError):
    """A universe family is empty or contains duplicate members."""


class DomainTooLarge(SchemeError):
    """Exhaustive search requested on a domain above the guard size."""


class InfeasibleUnderCap(SchemeError):
    """No rainbow coloring exists within the requested color cap."""


class NoBinaryMds(SchemeError):
    """No binary MDS matrix exists for the requested shape."""


class DimensionMismatch(SchemeError):
    """Matrix or table dimensions are inconsistent."""


class LengthMismatch(SchemeError):
    """Packet vector length or packet sizes do not match."""


class Underdetermined(SchemeError):
    """More unknown columns than rows; the system cannot be solved."""


class TooLarge(SchemeError):
    """Exhaustive verification requested above the guard size."""


class NonuniformCache(SchemeError):
    """Users would cache different numbers of packets."""


class RainbowViolation(SchemeError):
    """A designated structure is not rainbow under the coloring."""


class ClaimViolation(SchemeError):
    """Two same-colored pairs do not miss each other's packets."""


class PdaInvalid(SchemeError):
    """A placement delivery array violates one of its axioms."""


class RangeError(SchemeError):
    """A numeric parameter is outside its legal range."""


class RankPropertyFail(SchemeError):
    """Generator matrix columns do not satisfy the rank property."""


class UnsupportedGenerator(SchemeError):
    """Linear block construction only implemented for n = k + 1."""


class BudgetInfeasible(SchemeError):
    """No valid coloring exists under the given color budget."""


class InfeasiblePiece(SchemeError):
    """A shuffle summand set cannot be covered by single-node pieces."""


class DivisibilityError(SchemeError):
    """Function count is not divisible by the node count."""


class SweepTooLarge(SchemeError):
    """Exhaustive demand sweep requested above the guard size."""


class Undecodable(SchemeError):
    """A user could not decode its demand; signals a scheme bug."""
