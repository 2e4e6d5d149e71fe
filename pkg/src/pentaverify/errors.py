"""Exception types raised across the package."""


class PentaverifyError(Exception):
    """Base class for all package errors."""


class DegenerateConfiguration(PentaverifyError):
    """Points are coincident or (nearly) collinear for the requested computation."""


class NumericalFailure(PentaverifyError):
    """A least-squares solution is not well isolated."""


class InsufficientPoints(PentaverifyError):
    """Fewer than five matches are available to form a pentagon."""


class InvalidInput(PentaverifyError):
    """A match set or configuration violates its invariants."""


class ParseError(InvalidInput):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class BoundsError(InvalidInput):
    """A point lies outside its image extent."""


class InfeasibleSpec(PentaverifyError):
    """A synthetic scene specification could not be realised."""
