class OscillintError(Exception):
    pass


class ConfigError(OscillintError, ValueError):
    """Configuration file missing or invalid."""


class ResolutionError(OscillintError, ValueError):
    """A grid is too coarse for the oscillation it has to carry."""


class CoverageError(OscillintError, ValueError):
    """A transform grid does not reach far enough to hold the relevant mass."""
