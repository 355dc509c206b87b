"""Exception hierarchy shared by every module."""


class ArtifactError(Exception):
    """Base class for all errors raised by this package."""


class PrecisionError(ArtifactError):
    """A quantity is not determined by the stored truncated series."""


class InvalidInvariantError(ArtifactError, ValueError):
    """A numerical invariant violates the validity classification."""


class NotRealizableError(ArtifactError, ValueError):
    """The requested datum has no realization of the requested kind."""


class CertificateError(ArtifactError):
    """A completeness certificate of a bounded enumeration failed."""


class InternalInvariantError(ArtifactError):
    """Two independent computations that must agree did not."""


class NoMatchingError(ArtifactError, ValueError):
    """No element of the requested division algebra matches the invariant."""
