"""Exception hierarchy.

Everything raised for bad input derives from :class:`InputError`, which the
command line maps to exit status 2.
"""


class InputError(ValueError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidFan(InputError):
    pass


class OverlappingCones(InvalidFan):
    pass


class EmptyFan(InvalidFan):
    pass


class NotPure(InputError):
    pass


class NotComplete(InputError):
    pass


class NotSimplicial(InputError):
    pass


class ConeNotInFan(InputError):
    pass


class RaysDoNotSpan(InputError):
    pass


class NonIntegral(InputError):
    pass


class NotQCartier(InputError):
    """Raised where a Q-Cartier divisor is required; ``support_function`` returns it instead."""


class OutsideSupport(InputError):
    pass


class NoAmpleAvoidingW(InputError):
    pass


class InvalidPair(InputError):
    pass


class DecompositionExceedsBoundary(InputError):
    pass


class TooManyComponents(InputError):
    pass


class NotHomogeneous(InputError):
    pass


class NonzeroConstantTerm(InputError):
    pass


class NotTwoTorsion(InputError):
    pass


class EliminationStalled(Exception):
    pass


class ZeroQ(Exception):
    """The relation became ``x_i x_j``: the hypersurface is reducible."""


class PostconditionFailed(AssertionError):
    """A constructed object failed its own independent re-check."""
