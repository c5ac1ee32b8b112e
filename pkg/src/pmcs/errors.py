"""Exception types shared across the package."""


class PmcsError(Exception):
    """Base class for all package-specific failures."""


class ConvergenceError(PmcsError, RuntimeError):
    """A truncated computation did not converge (non-decaying tail, bad dimension)."""


class DegenerateStateError(PmcsError, ValueError):
    """The requested state is mathematically the zero vector."""


class ConfigError(PmcsError, ValueError):
    """A sweep configuration is malformed or inconsistent."""
