"""Exception types shared across the package."""


class RmtLabError(Exception):
    """Base class for all rmtlab errors."""


class InvalidDimension(RmtLabError, ValueError):
    pass


class InvalidParameter(RmtLabError, ValueError):
    pass


class InvalidInput(RmtLabError, ValueError):
    pass


class UnsupportedReference(RmtLabError, ValueError):
    pass


class UnsupportedOrder(RmtLabError, ValueError):
    pass


class OutOfRegime(RmtLabError, ValueError):
    pass


class EmptyMinor(RmtLabError, ValueError):
    pass


class InvalidIndices(RmtLabError, ValueError):
    pass


class SingularInput(RmtLabError, ValueError):
    pass


class NumericalFailure(RmtLabError, ArithmeticError):
    pass


class InvalidEnergy(RmtLabError, ValueError):
    pass


class InvalidCutoff(RmtLabError, ValueError):
    pass


class ContourTooClose(RmtLabError, ValueError):
    pass


class AccuracyFailure(RmtLabError, ArithmeticError):
    pass


class EmptyDomain(RmtLabError, ValueError):
    pass


class InsufficientData(RmtLabError, ValueError):
    pass


class ConfigError(RmtLabError, ValueError):
    """Configuration parsing/validation failure; carries per-error locations."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(str(p) for p in self.problems))
