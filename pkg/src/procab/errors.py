"""Exceptions shared across the package."""


class DomainError(ValueError):
    """Base for physics-domain failures (validity windows, brackets, solvers)."""


class ValidityWindowError(DomainError):
    """An asymptotic formula was requested outside its validity window."""


class BracketError(DomainError):
    """A threshold inversion found no root inside the search bracket."""

    def __init__(self, message, ceiling=None):
        super().__init__(message)
        self.ceiling = ceiling


class OracleConvergenceError(DomainError):
    """The finite-difference oracle failed to meet its own error target."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class QuadratureError(DomainError):
    """Adaptive quadrature did not converge to the requested accuracy."""


class ConfigError(Exception):
    """Experiment-description parse or validation failure (CLI exit code 2)."""

    def __init__(self, message, line=None, key=None):
        parts = []
        if line is not None:
            parts.append(f"line {line}")
        if key is not None:
            parts.append(f"key {key!r}")
        full = f"{message} [{', '.join(parts)}]" if parts else message
        super().__init__(full)
        self.line = line
        self.key = key
