"""Exception hierarchy.

Domain errors (``NormalFormError`` subclasses) carry a machine-readable
``code`` and an optional ``witness`` dict; the CLI maps them to exit
status 1. Malformed input raises ``InputError`` (exit status 2).
"""

from __future__ import annotations


class NormalFormError(Exception):
    code = "domain-error"

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = dict(witness or {})

    def as_dict(self) -> dict:
        return {"code": self.code, "message": str(self), "witness": self.witness}


class FieldError(NormalFormError, ValueError):
    code = "field"


class DimensionError(NormalFormError, ValueError):
    code = "dimension"


class SplitNotConfiguredError(NormalFormError, ValueError):
    code = "split-not-configured"


class NonTerminatingSeriesError(NormalFormError):
    code = "non-terminating-series"


class ValidationError(NormalFormError):
    code = "validation"


class PreconditionError(NormalFormError):
    code = "precondition"


class ResonanceError(NormalFormError):
    code = "resonance"


class NotInCartanError(NormalFormError):
    code = "not-in-cartan"


class CohomologyError(NormalFormError):
    code = "cohomology-no-solution"


class InconsistentLinearPartError(NormalFormError):
    code = "inconsistent-linear-part"


class LoopBoundError(NormalFormError):
    code = "nilpotent-loop-bound"


class InputError(Exception):
    """Malformed problem file, unparsable polynomial, unknown key."""

    code = "malformed-input"

    def as_dict(self) -> dict:
        return {"code": self.code, "message": str(self), "witness": {}}
