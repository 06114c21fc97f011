"""Surfaced blocks and the verbs a human can apply to them.

A surfaced block is the unit the interface renders: one validated (or
rejected) agent tool call, the permission decision it received, the
surfacing obligations it discharges, and its lifecycle status. Human
verbs are the only way block status moves after surfacing.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

from ..errors import ProtocolError, ScopeError
from ..guardrails.permissions import Decision, PermissionScope
from ..schemas import BlockKind, ToolCallPayload, ValidationReport
from ..tip import SurfacingRequirement, TipMode


class BlockStatus(str, Enum):
    PROPOSED = "proposed"
    APPROVED = "approved"
    DENIED = "denied"
    APPLIED = "applied"
    REVERTED = "reverted"


@dataclass
class SurfacedBlock:
    block_id: str
    block_kind: BlockKind
    payload: ToolCallPayload
    decision: Decision
    covers: frozenset[SurfacingRequirement]
    status: BlockStatus
    linked_action: str | None = None
    report: ValidationReport | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "block_id": self.block_id,
            "block_kind": self.block_kind.value,
            "status": self.status.value,
            "component_id": self.payload.component_id,
            "schema_version": self.payload.schema_version,
            "agent_id": self.payload.agent_id,
            "correlation_id": self.payload.correlation_id,
            "values": self.payload.values,
            "decision": self.decision.to_dict(),
            "covers": sorted(r.value for r in self.covers),
            "linked_action": self.linked_action,
            "report": self.report.to_dict() if self.report is not None else None,
        }


class VerbKind(str, Enum):
    APPROVE = "approve"
    DENY = "deny"
    ADJUST = "adjust"
    UNDO = "undo"
    REDO = "redo"
    REVERT_ALL = "revert_all"
    APPROVE_ALL = "approve_all"
    SET_SCOPE = "set_scope"
    SET_MODE = "set_mode"
    YIELD_INITIATIVE = "yield_initiative"


@dataclass(frozen=True)
class HumanVerb:
    """One human steering action. Unused parameters stay None."""

    kind: VerbKind
    target_block: str | None = None
    field_edits: dict[str, Any] | None = None
    action_id: str | None = None
    scope: PermissionScope | None = None
    mode: TipMode | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind.value}
        if self.target_block is not None:
            out["target_block"] = self.target_block
        if self.field_edits is not None:
            out["field_edits"] = self.field_edits
        if self.action_id is not None:
            out["action_id"] = self.action_id
        if self.scope is not None:
            out["scope"] = self.scope.to_dict()
        if self.mode is not None:
            out["mode"] = self.mode.value
        return out

    @classmethod
    def from_dict(cls, data: Any) -> "HumanVerb":
        if not isinstance(data, dict):
            raise ProtocolError("verb must be an object")
        unknown = set(data) - {"kind", "target_block", "field_edits", "action_id", "scope", "mode"}
        if unknown:
            raise ProtocolError(f"unknown verb keys: {', '.join(sorted(unknown))}")
        try:
            kind = VerbKind(data.get("kind"))
        except ValueError:
            raise ProtocolError(f"unknown verb kind {data.get('kind')!r}") from None
        field_edits = data.get("field_edits")
        if field_edits is not None and not isinstance(field_edits, dict):
            raise ProtocolError("field_edits must be an object")
        scope = None
        if data.get("scope") is not None:
            try:
                scope = PermissionScope.from_dict(data["scope"])
            except (KeyError, ValueError, ScopeError) as exc:
                raise ProtocolError(f"malformed scope: {exc}") from None
        mode = None
        if data.get("mode") is not None:
            try:
                mode = TipMode(data["mode"])
            except ValueError:
                raise ProtocolError(f"unknown mode {data['mode']!r}") from None
        for key in ("target_block", "action_id"):
            if data.get(key) is not None and not isinstance(data[key], str):
                raise ProtocolError(f"{key} must be text")
        return cls(
            kind=kind,
            target_block=data.get("target_block"),
            field_edits=field_edits,
            action_id=data.get("action_id"),
            scope=scope,
            mode=mode,
        )
