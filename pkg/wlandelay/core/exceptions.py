"""Error hierarchy shared by the models, simulators and front ends."""


class WlanDelayError(Exception):
    """Base class for all errors raised by wlandelay."""

    pass


class ConfigError(WlanDelayError):
    """Invalid configuration file, override or experiment description."""

    pass


class DomainError(WlanDelayError, ValueError):
    """Argument outside the domain of an operation."""

    pass


class InstabilityError(WlanDelayError):
    """Offered load at or above capacity (rho >= 1)."""

    pass


class InfeasibleConfigError(InstabilityError):
    """Polling configuration outside the region where the mean-value formulas hold."""

    pass


class ConvergenceError(WlanDelayError):
    """Root finder hit its iteration cap."""

    def __init__(self, message: str, iterations: int, residual: float):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual

    def __reduce__(self) -> tuple[type["ConvergenceError"], tuple[str, int, float]]:
        # rebuilt from constructor arguments when crossing a process boundary
        return type(self), (str(self), self.iterations, self.residual)


class InsufficientReplicationsError(WlanDelayError):
    """Confidence interval requested from fewer than two observations."""

    pass


class ReplicationError(WlanDelayError):
    """An experiment failed inside one replication."""

    def __init__(self, index: int, cause: BaseException):
        super().__init__(f"Replication {index} failed: {cause}")
        self.index = index
        self.cause = cause

    def __reduce__(self) -> tuple[type["ReplicationError"], tuple[int, BaseException]]:
        return type(self), (self.index, self.cause)


class OutputError(WlanDelayError):
    """Result file could not be written."""

    pass
