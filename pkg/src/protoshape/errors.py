"""Exception hierarchy. Every error raised on purpose derives from ProtoshapeError."""

from __future__ import annotations


class ProtoshapeError(Exception):
    """Base class; ``code`` is the machine-readable name used in CLI error objects."""

    code = "error"

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidInput(ProtoshapeError):
    code = "InvalidInput"


class NotATopology(ProtoshapeError):
    code = "NotATopology"


class MissingEmptyOrFull(NotATopology):
    code = "MissingEmptyOrFull"


class TooLarge(ProtoshapeError):
    code = "TooLarge"


class SpaceMismatch(ProtoshapeError):
    code = "SpaceMismatch"


class NotContinuous(ProtoshapeError):
    code = "NotContinuous"


class NotConstant(ProtoshapeError):
    code = "NotConstant"


class Mismatch(ProtoshapeError):
    code = "Mismatch"


class NotARefinement(ProtoshapeError):
    code = "NotARefinement"


class DepthTooShallow(ProtoshapeError):
    code = "DepthTooShallow"


class NoMorphismFound(ProtoshapeError):
    code = "NoMorphismFound"


class NotAComplex(ProtoshapeError):
    code = "NotAComplex"


class NotAChainMap(ProtoshapeError):
    code = "NotAChainMap"


class NotSimplicial(ProtoshapeError):
    code = "NotSimplicial"
