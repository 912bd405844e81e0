"""Exception hierarchy shared by all lovespec modules."""


class LoveSpecError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LoveSpecError):
    """Input values outside the physical domain (e.g. non-positive shear modulus)."""


class ResolutionError(LoveSpecError):
    """Grid too coarse, malformed, or incompatible for the requested operation."""


class ConvergenceError(LoveSpecError):
    """An iterative or marching solver failed to produce a finite solution."""


class PoleError(LoveSpecError):
    """Evaluation requested at (or too close to) a zero of the Jost function."""

    def __init__(self, message, nearest_zero=None):
        super().__init__(message)
        self.nearest_zero = nearest_zero


class ProximityError(LoveSpecError):
    """Spectral parameter too close to the continuous-spectrum cut or a pole."""


class SingularRecoveryError(LoveSpecError):
    """Shear-modulus recovery denominator vanished at some depth."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class ConfigurationError(LoveSpecError):
    """Invalid or inconsistent configuration / degenerate input data."""


class TruncationError(LoveSpecError):
    """Partial products over zeros do not settle within the truncation radius."""


class QuadratureResolutionError(LoveSpecError):
    """Oscillatory quadrature tail estimate exceeds the requested tolerance."""


class SolvabilityError(LoveSpecError):
    """Discrete Gelfand-Levitan system singular or ill-conditioned."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class ExtractionError(LoveSpecError):
    """Differentiated and integrated potential extractions disagree."""


class DataInconsistencyError(LoveSpecError):
    """Spectral data violating structural facts (e.g. non-positive norming constant)."""


class IncompleteSearchError(LoveSpecError):
    """Zero count from the argument principle does not match the zeros found."""

    def __init__(self, message, region=None):
        super().__init__(message)
        self.region = region


class BackendInconsistencyError(LoveSpecError):
    """An evaluator returned values incompatible with its declared symmetry."""


class IngestionError(LoveSpecError):
    """Profile / data files missing fields or violating their invariants."""


class StageError(LoveSpecError):
    """Pipeline stage failure; carries the stage name for reporting."""

    def __init__(self, stage, message):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
