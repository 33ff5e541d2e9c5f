"""Exception hierarchy.

Validation errors (bad input, malformed files, exceeded budgets) derive from
:class:`LatpolyError`.  Property failures that carry a counterexample derive
from :class:`PropertyFailure`; the CLI maps those to exit status 1 and every
other :class:`LatpolyError` to exit status 2.
"""


class LatpolyError(Exception):
    """Base class for all errors raised by this package."""


class PropertyFailure(LatpolyError):
    """A decision procedure answered "no"; ``witness`` holds the counterexample."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# lattices

class NotALattice(PropertyFailure):
    pass


class NotDistributive(PropertyFailure):
    pass


class DuplicateName(LatpolyError):
    pass


class CyclicCovers(LatpolyError):
    pass


class LatticeTooLarge(LatpolyError):
    pass


class ForeignElement(LatpolyError, ValueError):
    pass


# polynomial functions and associativity

class ArityError(LatpolyError, ValueError):
    pass


class NotPolynomial(PropertyFailure):
    pass


class NotAssociative(PropertyFailure):
    pass


class InvalidParameters(LatpolyError, ValueError):
    pass


class BudgetExceeded(LatpolyError):
    pass


class UnsoundConstruction(LatpolyError):
    """A construction that the theory guarantees to succeed did not."""


class NotAChain(LatpolyError):
    pass


# term expressions

class ExprSyntaxError(LatpolyError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class VariableOutOfRange(LatpolyError):
    pass


class UnknownConstant(LatpolyError):
    pass
