"""Exception hierarchy shared by all flatlqr modules."""


class FlatLQRError(Exception):
    """Base class for every error raised by flatlqr."""


class InvalidArgumentError(FlatLQRError, ValueError):
    pass


class NumericError(FlatLQRError, ArithmeticError):
    pass


class OutOfRangeError(NumericError):
    """An exponential would overflow the double range."""


class SingularSystemError(NumericError):
    def __init__(self, message, rcond):
        super().__init__(f"{message} (rcond={rcond:.3e})")
        self.rcond = rcond


class SingularHorizonError(SingularSystemError):
    """The boundary matrix is singular at this horizon."""

    def __init__(self, T, rcond):
        super().__init__(f"boundary matrix singular at T={T!r}", rcond)
        self.T = T


class DegenerateLagrangianError(FlatLQRError):
    pass


class SweepFailedError(FlatLQRError):
    pass


class UncontrollableError(FlatLQRError):
    pass


class WarmupError(FlatLQRError):
    """The estimator buffer does not yet span the estimation window."""


class SimulationDivergedError(FlatLQRError):
    def __init__(self, t, norm):
        super().__init__(f"state norm {norm:.3e} exceeded bound at t={t:.6g}")
        self.t = t
        self.norm = norm


class ConfigError(FlatLQRError):
    pass
