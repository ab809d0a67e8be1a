"""Exception hierarchy shared by all modules."""

from typing import Any, Optional


class HyperGlueError(Exception):
    """Base class for toolkit errors."""


class DomainError(HyperGlueError, ValueError):
    """An operation was called outside its domain (bad point, radius, set...)."""


class FormatError(HyperGlueError, ValueError):
    """Input data could not be parsed into the expected structure."""


class ConfigError(HyperGlueError):
    """A run configuration is invalid."""


class NoGateError(HyperGlueError):
    """A point has no gate in the set; `witness` is the sample that failed."""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


class PropertyViolation(HyperGlueError):
    """A construction's hypotheses or conclusion failed at runtime.

    The certificate is a JSON-serializable dict that lets the failure be
    re-checked independently.
    """

    def __init__(self, message: str, certificate: Optional[dict] = None):
        super().__init__(message)
        self.certificate = certificate or {}
