""" Exceptions raised by the uav_caching package. """


class UavCachingError(Exception):
    """Base class of every error raised by this package."""


class ConfigurationError(UavCachingError, ValueError):
    """A configuration value is unknown, malformed or infeasible."""


class DomainError(UavCachingError, ValueError):
    """An argument lies outside the domain of an operation."""


class DegeneratePlanError(DomainError):
    """A cache plan carries no value mass where a ratio needs one."""


class InvariantViolation(UavCachingError, RuntimeError):
    """A simulation invariant failed mid-run."""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        message = f"invariant '{invariant}' violated"
        if detail:
            message += f": {detail}"
        super().__init__(message)


class ReplicationError(UavCachingError):
    """A replication of an experiment aborted."""

    def __init__(self, variant: str, seed: int, cause: Exception):
        self.variant = variant
        self.seed = seed
        super().__init__(f"replication '{variant}' with seed {seed} "
                         f"aborted: {cause}")
