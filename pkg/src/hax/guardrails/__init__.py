"""Guardrails: permission gating, recoverable actions, initiative, tracing."""

from .actions import (
    MISSING,
    ActionLog,
    ActionStatus,
    Delta,
    RecoverableAction,
    Write,
    apply_delta,
    delta_from_state,
    make_action,
)
from .initiative import Handoff, Holder, InitiativeState
from .permissions import (
    ALL_BLOCK_KINDS,
    AutonomyLevel,
    Decision,
    PermissionScope,
    Verdict,
    check_display,
    check_permission,
)
from .trace import SENTINEL_HASH, Trace, TraceEntry, verify_entries, verify_jsonl

__all__ = [
    "ALL_BLOCK_KINDS",
    "ActionLog",
    "ActionStatus",
    "AutonomyLevel",
    "Decision",
    "Delta",
    "Handoff",
    "Holder",
    "InitiativeState",
    "MISSING",
    "PermissionScope",
    "RecoverableAction",
    "SENTINEL_HASH",
    "Trace",
    "TraceEntry",
    "Verdict",
    "Write",
    "apply_delta",
    "check_display",
    "check_permission",
    "delta_from_state",
    "make_action",
    "verify_entries",
    "verify_jsonl",
]
