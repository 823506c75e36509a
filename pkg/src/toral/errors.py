"""Exception hierarchy shared by the library and the command line."""

from __future__ import annotations


class ToralError(Exception):
    """Base class for every error raised by :mod:`toral`."""


class ParseError(ToralError):
    """Malformed matrix, polynomial or chain input."""


class RankDeficientError(ToralError):
    """A full-rank lattice was required."""


class PreconditionError(ToralError):
    """A mathematical hypothesis of an operation is violated.

    ``hypothesis`` names the violated assumption so front-ends can report it
    verbatim; ``code`` is a short stable identifier.
    """

    code = "precondition"
    hypothesis = "precondition"

    def __init__(self, message: str):
        super().__init__(message)


class NotHyperbolicError(PreconditionError):
    code = "not_hyperbolic"
    hypothesis = "A hyperbolic (no eigenvalue of modulus 1)"


class SingularError(PreconditionError):
    code = "singular"
    hypothesis = "g(A) invertible over Q (g in Q^a)"


class DissimilarError(PreconditionError):
    code = "dissimilar"
    hypothesis = "A and B similar over Q"


class ReducibleError(PreconditionError):
    code = "reducible"
    hypothesis = "irreducible characteristic polynomial"


class NotMonicError(PreconditionError):
    code = "not_monic"
    hypothesis = "monic polynomial"


class FieldMismatchError(PreconditionError):
    code = "field_mismatch"
    hypothesis = "same defining polynomial"


class NotUnimodularError(PreconditionError):
    code = "not_unimodular"
    hypothesis = "conjugator C in GL_n(Z) with AC = CB"


class ChainError(PreconditionError):
    code = "bad_chain"
    hypothesis = "levels form a divisibility chain"


class TooManyPointsError(ToralError):
    """Enumeration would exceed the configured cap."""


class NotInvertibleModError(PreconditionError):
    code = "not_invertible_mod"
    hypothesis = "A invertible modulo d"
