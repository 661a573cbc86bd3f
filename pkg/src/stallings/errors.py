class StallingsError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInputError(StallingsError, ValueError):
    pass


class AlphabetMismatchError(StallingsError, ValueError):
    pass


class NotInverseError(StallingsError, ValueError):
    pass


class GroupTableError(StallingsError, ValueError):
    """A multiplication table failed the group axioms."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SpecError(StallingsError, ValueError):
    """A group description is inconsistent (bad homomorphism, clashing letters...)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SectionError(StallingsError):
    """A section violates one of the axioms it is supposed to satisfy."""


class HypothesisRefused(StallingsError):
    """The operation needs a property the input does not carry by construction."""
