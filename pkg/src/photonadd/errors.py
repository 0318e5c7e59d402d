"""Exception types raised across the package."""


class PhotonAddError(Exception):
    """Base class for all package errors."""


class InvalidParameter(PhotonAddError, ValueError):
    """A parameter lies outside its admissible range."""


class TruncationOverflow(PhotonAddError):
    """Too much probability mass falls outside the truncated Fock basis."""


class DimensionCapExceeded(TruncationOverflow):
    """A two-mode simulation would exceed the joint dimension cap."""


class OrderTooLarge(PhotonAddError, ValueError):
    pass


class MissingMoment(PhotonAddError, KeyError):
    pass


class ZeroProbability(PhotonAddError):
    """Conditioning on an event whose probability is (numerically) zero."""


class UndefinedWitness(PhotonAddError):
    """The witness denominator vanishes, so the witness has no value."""


class DomainError(PhotonAddError, ValueError):
    """A closed form is evaluated where it is explicitly undefined."""


class DegenerateGeometry(PhotonAddError):
    """The printed thermal coincidence formula is singular at this point."""
