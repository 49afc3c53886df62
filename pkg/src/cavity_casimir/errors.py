"""Exception types."""


class DomainError(ValueError):
    """Argument outside the domain where a quantity is defined."""


class PoleError(ZeroDivisionError):
    """Evaluation exactly on a pole of a response function."""


class ResonanceError(ValueError):
    """A resonance frequency sits on or too close to an integration or evaluation path."""


class ContourError(ValueError):
    """A mode-counting contour passes through a zero or pole, or is degenerate."""


class ConfigError(ValueError):
    """Invalid run configuration."""


class QuadratureError(RuntimeError):
    """Quadrature did not reach the requested tolerance."""
