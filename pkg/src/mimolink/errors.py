"""Typed errors raised by the numeric modules.

Everything derives from :class:`MimoLinkError` so callers (notably the CLI)
can distinguish a numeric/contract failure from ordinary exceptions.
"""


class MimoLinkError(ValueError):
    """Base class for all contract violations raised by this package."""


class ShapeError(MimoLinkError):
    """Operand dimensions do not conform."""


class DomainError(MimoLinkError):
    """A parameter lies outside its admissible domain."""


class SymmetryError(MimoLinkError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class DefinitenessError(MimoLinkError):
    """A matrix required to be positive definite has a nonpositive pivot."""


class SingularChannelError(MimoLinkError):
    """A channel matrix is rank deficient where full rank is required."""


class InsufficientSamplesError(MimoLinkError):
    """Too few samples to form an invertible sample covariance."""


class DegenerateChannelError(MimoLinkError):
    """All channel gains are zero; no power allocation exists."""


class ConstraintError(MimoLinkError):
    """An input violates a normalization constraint (e.g. unit trace)."""
