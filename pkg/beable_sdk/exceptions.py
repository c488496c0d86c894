"""
Exception classes for the Bell lattice beables SDK.
"""

from typing import Any, Dict, Optional


class BeableError(Exception):
    """Base exception for all simulation and verification errors."""

    def __init__(
        self,
        message: str,
        error_code: str = "SIMULATION_ERROR",
        check: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.message = message
        self.error_code = error_code
        self.check = check
        self.details = details or {}
        super().__init__(message)

    def __str__(self) -> str:
        return f"{self.error_code}: {self.message}"

    def to_record(self) -> Dict[str, Any]:
        """Serializable form stored in run manifests."""
        return {
            "error": self.error_code,
            "message": self.message,
            "check": self.check,
            "details": self.details,
        }


class ValidationError(BeableError):
    """Parameter or configuration validation failed."""

    def __init__(self, message: str = "Validation failed", **kwargs):
        super().__init__(message, error_code="VALIDATION_ERROR", **kwargs)


class ModeCapExceeded(BeableError):
    """Fock space of 2^M states would exceed the configured mode cap."""

    def __init__(self, message: str = "Mode cap exceeded", **kwargs):
        super().__init__(message, error_code="MODE_CAP_EXCEEDED", **kwargs)


class GridMismatch(BeableError):
    """Position grid and momentum grid are not Fourier-compatible."""

    def __init__(self, message: str = "Grid mismatch", **kwargs):
        super().__init__(message, error_code="GRID_MISMATCH", **kwargs)


class SectorTooLarge(BeableError):
    """Fixed fermion-number sector exceeds the dimension cap."""

    def __init__(self, message: str = "Sector too large", **kwargs):
        super().__init__(message, error_code="SECTOR_TOO_LARGE", **kwargs)


class StepTooLarge(BeableError):
    """Integrator step violates its stability bound."""

    def __init__(self, message: str = "Step too large", **kwargs):
        super().__init__(message, error_code="STEP_TOO_LARGE", **kwargs)


class NormDrift(BeableError):
    """State norm drifted beyond tolerance."""

    def __init__(self, message: str = "Norm drift exceeded tolerance", **kwargs):
        super().__init__(message, error_code="NORM_DRIFT", **kwargs)


class DegenerateOrbitals(BeableError):
    """Orbitals are linearly dependent; the antisymmetrized state vanishes."""

    def __init__(self, message: str = "Degenerate orbitals", **kwargs):
        super().__init__(message, error_code="DEGENERATE_ORBITALS", **kwargs)


class SourceProbabilityUnderflow(BeableError):
    """The beable sits on a configuration where the pilot-state vanishes."""

    def __init__(self, message: str = "Source probability underflow", **kwargs):
        super().__init__(message, error_code="SOURCE_PROBABILITY_UNDERFLOW", **kwargs)


class RateStepOverflow(BeableError):
    """Total jump rate times substep exceeds the thinning bound."""

    def __init__(self, message: str = "Rate step overflow", **kwargs):
        super().__init__(message, error_code="RATE_STEP_OVERFLOW", **kwargs)


class OddSiteCount(BeableError):
    """Staggered sites cannot be paired into spinor cells."""

    def __init__(self, message: str = "Odd site count", **kwargs):
        super().__init__(message, error_code="ODD_SITE_COUNT", **kwargs)


class OutOfGrid(BeableError):
    """Requested position lies outside the spinor grid."""

    def __init__(self, message: str = "Position out of grid", **kwargs):
        super().__init__(message, error_code="OUT_OF_GRID", **kwargs)


class NodeReached(BeableError):
    """Guidance trajectory reached a node of the density."""

    def __init__(self, message: str = "Node of the density reached", **kwargs):
        super().__init__(message, error_code="NODE_REACHED", **kwargs)


# Mapping from error codes to exception classes
ERROR_CODE_TO_EXCEPTION = {
    "VALIDATION_ERROR": ValidationError,
    "MODE_CAP_EXCEEDED": ModeCapExceeded,
    "GRID_MISMATCH": GridMismatch,
    "SECTOR_TOO_LARGE": SectorTooLarge,
    "STEP_TOO_LARGE": StepTooLarge,
    "NORM_DRIFT": NormDrift,
    "DEGENERATE_ORBITALS": DegenerateOrbitals,
    "SOURCE_PROBABILITY_UNDERFLOW": SourceProbabilityUnderflow,
    "RATE_STEP_OVERFLOW": RateStepOverflow,
    "ODD_SITE_COUNT": OddSiteCount,
    "OUT_OF_GRID": OutOfGrid,
    "NODE_REACHED": NodeReached,
}


def exception_from_record(record: Dict[str, Any]) -> BeableError:
    """Create an exception from a failure record stored in a run manifest."""
    error_code = record.get("error", "SIMULATION_ERROR")
    message = record.get("message", "Unknown error")
    check = record.get("check")
    details = record.get("details", {})

    exception_class = ERROR_CODE_TO_EXCEPTION.get(error_code)
    if exception_class is None:
        return BeableError(message, error_code=error_code, check=check, details=details)
    return exception_class(message=message, check=check, details=details)
