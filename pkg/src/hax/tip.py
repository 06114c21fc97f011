"""Collaboration modes and what each one obliges agents to surface.

A session is always in exactly one mode. Each mode carries four
surfacing requirements (sixteen in total, no overlaps) and maps to the
two guardrail principles it leans on hardest. Session events drive the
mode machine; compliance checking compares what the surfaced blocks
cover against what the current mode requires.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable

from .schemas import BlockKind


class TipMode(str, Enum):
    INCEPTION = "inception"
    PROBLEM_SOLVING = "problem_solving"
    CONFLICT_RESOLUTION = "conflict_resolution"
    EXECUTION = "execution"


class Principle(str, Enum):
    CONTROL = "control"
    CLARITY = "clarity"
    RECOVERY = "recovery"
    COLLABORATION = "collaboration"
    TRACEABILITY = "traceability"


class SurfacingRequirement(str, Enum):
    # inception: what is about to happen, and the human's grip on it
    GOALS = "goals"
    PLANNED_ACTIONS = "planned_actions"
    ASSUMPTIONS = "assumptions"
    APPROVAL_CONTROLS = "approval_controls"
    # problem_solving: how the agents are thinking
    REASONING = "reasoning"
    TRADEOFFS = "tradeoffs"
    CONFIDENCE_LEVEL = "confidence_level"
    INPUT_INVITATION = "input_invitation"
    # conflict_resolution: what went sideways and the way out
    DISAGREEMENTS = "disagreements"
    OVERRIDES = "overrides"
    ANOMALIES = "anomalies"
    CORRECTION_PATHS = "correction_paths"
    # execution: what is being done and how to take it back
    PROGRESS = "progress"
    COMPLETION_STATUS = "completion_status"
    DECISION_LOGS = "decision_logs"
    ROLLBACK_CONTROLS = "rollback_controls"


class SessionEvent(str, Enum):
    PLAN_PROPOSED = "plan_proposed"
    OPTION_EVALUATED = "option_evaluated"
    CONFLICT_DETECTED = "conflict_detected"
    APPROVAL_GRANTED = "approval_granted"
    TASK_COMPLETED = "task_completed"
    ANOMALY_RAISED = "anomaly_raised"


REQUIRED_SURFACING: dict[TipMode, frozenset[SurfacingRequirement]] = {
    TipMode.INCEPTION: frozenset(
        {
            SurfacingRequirement.GOALS,
            SurfacingRequirement.PLANNED_ACTIONS,
            SurfacingRequirement.ASSUMPTIONS,
            SurfacingRequirement.APPROVAL_CONTROLS,
        }
    ),
    TipMode.PROBLEM_SOLVING: frozenset(
        {
            SurfacingRequirement.REASONING,
            SurfacingRequirement.TRADEOFFS,
            SurfacingRequirement.CONFIDENCE_LEVEL,
            SurfacingRequirement.INPUT_INVITATION,
        }
    ),
    TipMode.CONFLICT_RESOLUTION: frozenset(
        {
            SurfacingRequirement.DISAGREEMENTS,
            SurfacingRequirement.OVERRIDES,
            SurfacingRequirement.ANOMALIES,
            SurfacingRequirement.CORRECTION_PATHS,
        }
    ),
    TipMode.EXECUTION: frozenset(
        {
            SurfacingRequirement.PROGRESS,
            SurfacingRequirement.COMPLETION_STATUS,
            SurfacingRequirement.DECISION_LOGS,
            SurfacingRequirement.ROLLBACK_CONTROLS,
        }
    ),
}

MODE_PRINCIPLES: dict[TipMode, frozenset[Principle]] = {
    TipMode.INCEPTION: frozenset({Principle.CONTROL, Principle.CLARITY}),
    TipMode.PROBLEM_SOLVING: frozenset({Principle.COLLABORATION, Principle.CLARITY}),
    TipMode.CONFLICT_RESOLUTION: frozenset({Principle.RECOVERY, Principle.COLLABORATION}),
    TipMode.EXECUTION: frozenset({Principle.TRACEABILITY, Principle.RECOVERY}),
}

# What surfacing obligations each block kind discharges when it appears.
DEFAULT_BLOCK_COVERAGE: dict[BlockKind, frozenset[SurfacingRequirement]] = {
    BlockKind.PERMISSION_GATE: frozenset(
        {SurfacingRequirement.APPROVAL_CONTROLS, SurfacingRequirement.OVERRIDES}
    ),
    BlockKind.RATIONALE_DISPLAY: frozenset(
        {
            SurfacingRequirement.GOALS,
            SurfacingRequirement.PLANNED_ACTIONS,
            SurfacingRequirement.ASSUMPTIONS,
            SurfacingRequirement.REASONING,
            SurfacingRequirement.TRADEOFFS,
            SurfacingRequirement.CONFIDENCE_LEVEL,
        }
    ),
    BlockKind.RECOVERABLE_CHANGE: frozenset(
        {SurfacingRequirement.PROGRESS, SurfacingRequirement.ROLLBACK_CONTROLS}
    ),
    BlockKind.CO_EDIT_PROPOSAL: frozenset(
        {
            SurfacingRequirement.INPUT_INVITATION,
            SurfacingRequirement.DISAGREEMENTS,
            SurfacingRequirement.CORRECTION_PATHS,
        }
    ),
    BlockKind.TRACE_ENTRY: frozenset(
        {
            SurfacingRequirement.DECISION_LOGS,
            SurfacingRequirement.COMPLETION_STATUS,
            SurfacingRequirement.ANOMALIES,
        }
    ),
    BlockKind.GENERIC: frozenset(),
}


def required_surfacing(mode: TipMode) -> frozenset[SurfacingRequirement]:
    return REQUIRED_SURFACING[mode]


def principles_for(mode: TipMode) -> frozenset[Principle]:
    return MODE_PRINCIPLES[mode]


def transition(mode: TipMode, event: SessionEvent) -> TipMode:
    """Next mode after an event. Unlisted (mode, event) pairs stay put."""
    if event in (SessionEvent.CONFLICT_DETECTED, SessionEvent.ANOMALY_RAISED):
        return TipMode.CONFLICT_RESOLUTION
    if event is SessionEvent.APPROVAL_GRANTED:
        return TipMode.EXECUTION
    if event is SessionEvent.TASK_COMPLETED:
        return TipMode.INCEPTION
    if event is SessionEvent.OPTION_EVALUATED:
        return TipMode.PROBLEM_SOLVING
    if event is SessionEvent.PLAN_PROPOSED and mode is TipMode.INCEPTION:
        return TipMode.PROBLEM_SOLVING
    return mode


@dataclass(frozen=True)
class ComplianceReport:
    mode: TipMode
    satisfied: frozenset[SurfacingRequirement]
    missing: frozenset[SurfacingRequirement]

    @property
    def compliant(self) -> bool:
        return not self.missing

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode.value,
            "compliant": self.compliant,
            "satisfied": sorted(r.value for r in self.satisfied),
            "missing": sorted(r.value for r in self.missing),
        }


def check_surfacing(mode: TipMode, emitted_blocks: Iterable[Any]) -> ComplianceReport:
    """Compare covered requirements against the mode's obligations.

    Accepts surfaced blocks (anything with a `covers` attribute) or raw
    requirement sets.
    """
    covered: set[SurfacingRequirement] = set()
    for block in emitted_blocks:
        covered.update(getattr(block, "covers", block))
    required = REQUIRED_SURFACING[mode]
    return ComplianceReport(
        mode=mode,
        satisfied=frozenset(covered & required),
        missing=frozenset(required - covered),
    )


def export_tables() -> dict[str, Any]:
    """Machine-readable dump of every table this module defines."""
    return {
        "required_surfacing": {
            mode.value: sorted(r.value for r in reqs)
            for mode, reqs in REQUIRED_SURFACING.items()
        },
        "mode_principles": {
            mode.value: sorted(p.value for p in principles)
            for mode, principles in MODE_PRINCIPLES.items()
        },
        "transitions": {
            mode.value: {
                event.value: transition(mode, event).value for event in SessionEvent
            }
            for mode in TipMode
        },
        "block_coverage": {
            kind.value: sorted(r.value for r in reqs)
            for kind, reqs in DEFAULT_BLOCK_COVERAGE.items()
        },
    }
