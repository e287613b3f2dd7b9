"""Exception hierarchy shared by all orelab modules."""


class OrelabError(Exception):
    """Base class for every error raised by the library."""


class ParseError(OrelabError):
    """Malformed input text; carries the character offset of the problem."""

    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class RingSpecError(OrelabError):
    """A field or ring description is invalid (reducible modulus, bad q, ...)."""


class SpecMismatchError(OrelabError):
    """Operands live in different fields or rings."""


class NotPerfectError(OrelabError):
    """Operation needs q-th roots but the coefficient field is not perfect."""


class CapError(OrelabError):
    """A desk-scale bound (field size, degree, search space) was exceeded."""


class PrecisionError(OrelabError):
    """A series operation has no valid coefficient window left."""


class DomainError(OrelabError):
    """Input outside the mathematical domain of an operation (division by zero, ...)."""
