from __future__ import annotations


EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_PRECONDITION = 3


class SectorboundError(Exception):
    exit_code = EXIT_PRECONDITION


class DomainError(SectorboundError, ValueError):
    """Argument outside the domain of a formula or operation."""

    exit_code = EXIT_USAGE


class ShapeError(DomainError):
    pass


class NotHermitianError(SectorboundError):
    pass


class SingularMatrixError(SectorboundError):
    pass


class NotCoerciveError(SectorboundError):
    pass


class NotEllipticError(SectorboundError):
    pass


class SpectrumError(SectorboundError):
    """-λ hit the spectrum: A + λI is singular."""


class InadmissibleError(SectorboundError):
    """-λ lies inside the sector, so no resolvent bound applies."""


class PreconditionError(SectorboundError):
    pass
