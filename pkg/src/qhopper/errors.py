"""Exception types shared across the engine."""
from __future__ import annotations


class HopperError(Exception):
    """Base class for all errors raised by this package."""


class InvalidOrderError(HopperError, ValueError):
    """A cyclotomic order was zero or negative."""


class OrderMismatchError(HopperError, ValueError):
    """Ring arithmetic was attempted between values of different orders."""


class EmbeddingError(HopperError, ValueError):
    """A value was embedded into an order that its own order does not divide."""


class InvalidSiteError(HopperError, ValueError):
    """A lattice site outside 0..n-1 was referenced."""


class UnknownStateError(HopperError, ValueError):
    """An initial-state label is not one of the recognized names."""


class SpaceMismatchError(HopperError, ValueError):
    """Two objects built over different history spaces were combined."""


class WrongSpaceError(HopperError, ValueError):
    """An operation requires a fixed-final (or unrestricted) space and got the other kind."""


class InfeasibleSizeError(HopperError, RuntimeError):
    """An enumeration would exceed its configured size guard."""
