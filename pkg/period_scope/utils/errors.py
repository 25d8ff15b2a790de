class PeriodScopeError(Exception):
    """
    Base class for every failure raised by the toolkit.
    The exit code is what the command-line front end returns for it.
    """

    exit_code = 1


class BadParamsError(PeriodScopeError):
    exit_code = 2


class BadFlagsError(BadParamsError):
    pass


class BadConfigError(BadParamsError):
    pass


class BadPeriodError(BadParamsError):
    pass


class TooShortError(PeriodScopeError):
    pass


class InsufficientDataError(PeriodScopeError):
    pass


class LengthMismatchError(PeriodScopeError):
    pass


class ZeroEnergyError(PeriodScopeError):
    pass


class ZeroPowerSignalError(PeriodScopeError):
    pass


class ZeroNoiseError(PeriodScopeError):
    pass


class NotAFactorError(PeriodScopeError):
    pass


class NoComponentsError(PeriodScopeError):
    pass


class EstimationError(PeriodScopeError):
    """Raised when an estimator finds no usable period."""

    exit_code = 3


class NoDipsFoundError(EstimationError):
    pass


class NoConsistentDipsError(EstimationError):
    pass


class SignalIOError(PeriodScopeError):
    exit_code = 4
