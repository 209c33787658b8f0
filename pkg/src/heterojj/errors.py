"""Exception types shared across the package."""


class HeterojjError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(HeterojjError, ValueError):
    """A physical parameter or argument violates its validity constraints."""


class ConfigError(HeterojjError, ValueError):
    """A run-configuration file is missing, malformed, or incomplete."""


class NoEquilibriumError(HeterojjError):
    """No stable static phase configuration exists at the given bias."""


class NoBarrierError(HeterojjError):
    """The tilted potential has no metastable barrier (running state)."""


class NonFiniteStateError(HeterojjError):
    """Time integration produced a non-finite state.

    The failing step index is stored in ``step``.
    """

    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"non-finite state at step {step}")


class InvalidAxisError(HeterojjError, ValueError):
    """A sweep axis specification is unknown or inconsistent."""


class ConvergenceError(HeterojjError):
    """A discretized computation failed its resolution self-check."""
