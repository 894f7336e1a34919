"""Exception hierarchy shared by all levypacket modules."""


class LevyPacketError(Exception):
    """Base class for every error raised by levypacket."""


class DomainError(LevyPacketError, ValueError):
    """Argument outside the domain where a function is defined."""


class PoleError(DomainError):
    """Argument sits on a pole (e.g. Gamma at a non-positive integer)."""


class AliasingError(LevyPacketError):
    """Spectral samples have not decayed at the edge of the frequency window."""


class NonSymmetricError(LevyPacketError):
    """A characteristic function expected to be Hermitian is not."""


class SingularityError(LevyPacketError):
    """A Levy density is too singular at the origin for the requested operation."""


class ConvergenceError(LevyPacketError):
    """An iterative or adaptive computation failed to reach its tolerance."""


class UnsupportedClosedForm(LevyPacketError):
    """The requested law or parameter combination has no implemented closed form."""


class NotInfinitelyDivisible(LevyPacketError):
    """The law is not infinitely divisible, so it has no Levy-Khintchine data."""


class UnknownLevyMeasure(LevyPacketError):
    """No Levy measure is available for the law."""


class ScaleMismatch(LevyPacketError):
    """Two laws of a family only close under convolution at equal scale."""


class NotAbsolutelyContinuous(LevyPacketError):
    """The law has atoms, so a density does not exist."""


class ParseError(LevyPacketError, ValueError):
    """A law string or configuration could not be parsed."""
