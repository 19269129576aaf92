"""Exception hierarchy.

Everything raised deliberately by the package derives from :class:`ParliamentError`,
so callers (the CLI in particular) can map failures onto exit codes.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from autoparl.domain import SessionTranscript


class ParliamentError(Exception):
    """Base class for all package errors."""


class InvalidParliamentError(ParliamentError, ValueError):
    """Stances, weights or thresholds violate the parliament invariants."""


class DimensionError(ParliamentError, ValueError):
    pass


class DomainError(ParliamentError, ValueError):
    """A numeric argument lies outside the interval an operation is defined on."""


class StructureError(ParliamentError, ValueError):
    """A transcript is missing records that an operation needs."""


class SchemaError(ParliamentError, ValueError):
    pass


class DatasetValidationError(ParliamentError, ValueError):
    pass


class PairingError(ParliamentError, ValueError):
    pass


class UndefinedImprovementError(ParliamentError, ValueError):
    pass


class UnsupportedBaselineError(ParliamentError, NotImplementedError):
    pass


class BackendError(ParliamentError, RuntimeError):
    """A generator, modifier or evaluator failed to produce usable output."""


class PolicyError(BackendError):
    """A modification does not respect the configured modification policy."""


class ScoreParseError(BackendError, ValueError):
    pass


class ConfigurationError(BackendError):
    pass


class TransportError(BackendError):
    pass


class ProtocolError(BackendError):
    """The remote service answered with a body that does not follow the wire format."""


class SessionAborted(ParliamentError):
    """A backend failed mid-session.

    ``transcript`` holds every iteration that completed before the failure;
    the original exception is chained as ``__cause__``.
    """

    def __init__(self, message: str, transcript: SessionTranscript):
        super().__init__(message)
        self.transcript = transcript
