"""Exception hierarchy shared by all certreg modules."""


class CertregError(Exception):
    """Base class for all certreg errors."""


class ConfigError(CertregError):
    """Invalid or mutually inconsistent configuration."""


class DataError(CertregError):
    """Invalid dataset content or dataset/operation mismatch."""


class ParseError(DataError):
    """Malformed input file; carries a 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SolverError(CertregError):
    """Solver failed to reach the requested quality (non-convergence etc.)."""
