"""Exception hierarchy shared by all nopanet modules."""


class NopanetError(Exception):
    """Base class for all nopanet errors."""


class DimensionError(NopanetError):
    """Matrix arguments have incompatible or invalid dimensions."""


class SingularMatrixError(NopanetError):
    """Matrix is singular (or numerically indistinguishable from singular)."""

    def __init__(self, message, det_magnitude=None):
        super().__init__(message)
        self.det_magnitude = det_magnitude


class NumericalError(NopanetError):
    """An iterative numerical routine failed to converge or lost accuracy."""


class UnitarityError(NopanetError):
    """A matrix expected to be unitary is not, within tolerance."""

    def __init__(self, message, deviation=None, worst_index=None):
        super().__init__(message)
        self.deviation = deviation
        self.worst_index = worst_index


class WellPosednessError(NopanetError):
    """The closed loop is ill-posed: the feedback elimination is singular."""


class StabilityError(NopanetError):
    """Operation requires a stable system but the system is unstable."""


class PoleError(NopanetError):
    """Transfer coefficients are evaluated at (or too close to) a pole."""


class DegenerateRecurrenceError(NopanetError):
    """A recurrence denominator vanished at step k."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class StructureError(NopanetError):
    """A matrix does not have the structural pattern required by the caller."""


class ConfigError(NopanetError):
    """Invalid experiment configuration."""
