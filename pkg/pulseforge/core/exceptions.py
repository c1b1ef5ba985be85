"""
Exception hierarchy; every error knows the CLI exit code it maps to
"""

from typing import Optional

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DIVERGENCE = 4
EXIT_INCONSISTENT = 5


class PulseForgeError(Exception):
    """Base class for all pulseforge errors"""
    exit_code = EXIT_DIVERGENCE


class UsageError(PulseForgeError):
    """Invalid flags or arguments"""
    exit_code = EXIT_USAGE


class InvalidSpecError(PulseForgeError, ValueError):
    """Pulse specification cannot be evaluated"""
    exit_code = EXIT_USAGE


class ShapeMismatchError(PulseForgeError, ValueError):
    """Array shapes incompatible with the requested operation"""
    exit_code = EXIT_USAGE


class ArtifactIOError(PulseForgeError):
    """Reading or writing an artifact failed"""
    exit_code = EXIT_IO


class InconsistentArtifactError(PulseForgeError):
    """Artifacts exist but do not fit together"""
    exit_code = EXIT_INCONSISTENT


class CorruptFileError(InconsistentArtifactError):
    """File is truncated or malformed"""


class VersionMismatchError(InconsistentArtifactError):
    """File was written by an unsupported format version"""


class DivergenceError(PulseForgeError):
    """A numerical procedure produced non-finite values"""
    exit_code = EXIT_DIVERGENCE

    def __init__(self, message: str, epoch: Optional[int] = None, step: Optional[int] = None):
        location = []
        if epoch is not None:
            location.append(f"epoch {epoch}")
        if step is not None:
            location.append(f"step {step}")
        suffix = f" ({', '.join(location)})" if location else ""
        super().__init__(f"{message}{suffix}")
        self.epoch = epoch
        self.step = step


class NumericalDomainError(PulseForgeError, ValueError):
    """Input lies outside the domain of a numerical operation"""
    exit_code = EXIT_DIVERGENCE


class DegeneratePulseError(NumericalDomainError):
    """Pulse has no usable support"""


class DegenerateDensityError(NumericalDomainError):
    """Profile cannot be normalized to a probability density"""


class InvalidCovarianceError(NumericalDomainError):
    """Covariance matrix is not positive semi-definite"""


class DegenerateNormalizationError(NumericalDomainError):
    """All pairwise distances vanish"""


class UndefinedRatioError(NumericalDomainError):
    """Ratio with a vanishing denominator"""


class UndefinedCorrelationError(NumericalDomainError):
    """Correlation of a zero-variance variable"""


class PathEvaluationError(NumericalDomainError):
    """A decoded waypoint cannot be evaluated"""

    def __init__(self, message: str, waypoint: int):
        super().__init__(f"waypoint {waypoint}: {message}")
        self.waypoint = waypoint
