"""Exception taxonomy shared across the planning pipeline.

The CLI maps these onto distinct exit codes, so keep the hierarchy flat
and the categories disjoint.
"""

from __future__ import annotations


class MeshPlanError(Exception):
    """Base class for all package-specific failures."""


class ConfigurationError(MeshPlanError, ValueError):
    """Invalid construction parameters (unknown topology kind, bad counts)."""


class ScenarioParseError(MeshPlanError):
    """Scenario document is not syntactically readable."""


class ScenarioValidationError(MeshPlanError):
    """Scenario document parsed but carries invalid or unknown fields."""


class ContractError(MeshPlanError):
    """Two components disagree about a shared interface (pair sets, link coverage)."""


class UnroutableFlowError(MeshPlanError):
    """A traffic flow has no acceptable path; names the offending pair."""

    def __init__(self, src: int, dst: int):
        self.pair = (src, dst)
        super().__init__(f"flow ({src}, {dst}) has no acceptable path")


class PipelineError(MeshPlanError):
    """Wraps a failure with the pipeline stage it occurred in."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        super().__init__(f"pipeline stage '{stage}' failed: {cause}")
        self.__cause__ = cause
