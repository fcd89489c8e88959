"""Exception hierarchy. Every error carries a stable machine-readable code
that the CLI prints as a prefix and the HTTP service maps to a status."""

from __future__ import annotations


class ForgeError(Exception):
    """Base class; ``code`` is stable across releases."""

    code = "ERROR"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class SpecInvalid(ForgeError):
    code = "SPEC_INVALID"


class CapExceeded(ForgeError):
    code = "CAP_EXCEEDED"


class NonFiniteField(ForgeError):
    code = "NON_FINITE"


class InvalidThickness(ForgeError):
    code = "INVALID_THICKNESS"


class GridMismatch(ForgeError):
    code = "GRID_MISMATCH"


class CapFailure(ForgeError):
    code = "CAP_FAILURE"


class TargetUnreachable(ForgeError):
    code = "TARGET_UNREACHABLE"


class ResolutionTooCoarse(ForgeError):
    code = "RESOLUTION_TOO_COARSE"


class NonMonotoneObjective(ForgeError):
    code = "NON_MONOTONE"


class EnvelopeExceeded(ForgeError):
    code = "ENVELOPE_EXCEEDED"


class NotWatertight(ForgeError):
    code = "NOT_WATERTIGHT"


class MalformedMesh(ForgeError):
    code = "MALFORMED"


class SinkError(ForgeError):
    code = "SINK_ERROR"
