class ConfigurationError(ValueError):
    """Invalid user-supplied configuration (bad spec, dimension mismatch, ...)."""


class OracleInfeasible(RuntimeError):
    """Brute-force enumeration exceeded its path cap."""


class VerificationError(AssertionError):
    """A hypothesis or oracle check failed; carries the reproduction seed."""

    def __init__(self, message, seed=None):
        super().__init__(message)
        self.seed = seed
