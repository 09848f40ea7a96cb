"""Exception types shared across the package."""


class QuasiClusterError(Exception):
    """Base class for all errors raised by this package."""


class InputError(QuasiClusterError):
    """Malformed value handed to a constructor (bad variable name, bad exponent)."""


class DomainError(QuasiClusterError):
    """Operation applied outside its domain (non-unit division, wrong curve kind)."""


class ParseError(QuasiClusterError):
    """Syntax error in a spec or identity file, with source location."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", col {col}" if col is not None else "")
            message = f"{loc}: {message}"
        super().__init__(message)


class ValidationError(QuasiClusterError):
    """Structurally valid input that violates a semantic constraint."""


class SignError(QuasiClusterError):
    """Mixed-sign coefficients where a single global sign was expected."""
