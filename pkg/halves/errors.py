"""
Error hierarchy. Each class carries the process exit code the CLI reports for it.
"""

from typing import Any, Dict, Optional


class HalvesError(Exception):
    exit_code = 1


class InvalidArgumentError(HalvesError, ValueError):
    pass


class PreconditionViolationError(HalvesError):
    pass


class HypothesisViolationError(HalvesError):
    pass


class ConstraintViolationError(HalvesError):
    pass


class InvalidHalfError(HalvesError):
    pass


class DegenerateFiberError(HalvesError):
    pass


class NotApplicableError(HalvesError):
    pass


class InconsistentInputError(HalvesError):
    def __init__(self, message: str, witness: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.witness = witness or {}


class PipelineFailureError(HalvesError):
    """
    A constructive pipeline could not finish. `stage` names the step that failed,
    `report` carries whatever the earlier stages produced.
    """

    def __init__(self, message: str, stage: str, report: Optional[Dict[str, Any]] = None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.report = report or {}


class ResourceLimitError(HalvesError):
    exit_code = 2

    def __init__(self, guard: str, limit: int, actual: int):
        super().__init__(f"{guard} exceeded: {actual} > {limit}")
        self.guard = guard
        self.limit = limit
        self.actual = actual


class FatalFindingError(HalvesError):
    """
    Would refute a proven statement. Never expected in a passing build.
    """

    exit_code = 3

    def __init__(self, message: str, witness: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.witness = witness or {}


class TheoremViolationError(FatalFindingError):
    pass


class LemmaViolationError(FatalFindingError):
    pass


class StructureViolationError(FatalFindingError):
    pass


class UsageError(HalvesError):
    exit_code = 64


def check_guard(guard: str, actual: int, limit: int):
    if actual > limit:
        raise ResourceLimitError(guard, limit, actual)
