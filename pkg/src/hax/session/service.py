"""The live session: every agent tool call runs the full guardrail pipeline.

Pipeline for each submission, in fixed order and fully traced:
validate against the component schema, enforce clarity requirements,
gate against the permission scope, check mode surfacing compliance,
then surface a block. Denied and invalid calls still surface (with the
decision or report attached) so the human sees what was attempted.

Human verbs are the only way to move a surfaced block or the undo log;
explicit session events are the only way the collaboration mode moves.
"""

from __future__ import annotations

import json
from typing import Any, Callable

from ..clocks import Clock, IdSource, SequentialIds, SystemClock
from ..errors import InitiativeError, VerbError
from ..guardrails.actions import ActionLog, make_action
from ..guardrails.initiative import InitiativeState
from ..guardrails.permissions import (
    Decision,
    PermissionScope,
    Verdict,
    check_display,
    check_permission,
)
from ..guardrails.trace import Trace
from ..schemas import (
    BlockKind,
    ComponentSchema,
    ToolCallPayload,
    ValidationReport,
    Violation,
    ViolationKind,
    enforce_clarity,
    validate_payload,
)
from ..tip import (
    DEFAULT_BLOCK_COVERAGE,
    ComplianceReport,
    SessionEvent,
    TipMode,
    check_surfacing,
    transition,
)
from .blocks import BlockStatus, HumanVerb, SurfacedBlock, VerbKind

Observer = Callable[[str, dict[str, Any]], None]

HUMAN_ACTOR = "human"
SYSTEM_ACTOR = "system"


class Session:
    """One mediated human/agents working session."""

    def __init__(
        self,
        session_id: str,
        scope: PermissionScope,
        schemas: dict[str, ComponentSchema],
        domain_state: dict[str, Any] | None = None,
        mode: TipMode = TipMode.INCEPTION,
        clock: Clock | None = None,
        ids: IdSource | None = None,
        scenario_name: str = "",
    ) -> None:
        self.session_id = session_id
        self.scope = scope
        self.schemas = dict(schemas)
        self.domain_state: dict[str, Any] = dict(domain_state or {})
        self.initial_state: dict[str, Any] = dict(self.domain_state)
        self.mode = mode
        self.scenario_name = scenario_name
        self.clock: Clock = clock if clock is not None else SystemClock()
        self.ids: IdSource = ids if ids is not None else SequentialIds()
        self.trace = Trace(self.clock)
        self.action_log = ActionLog()
        self.initiative = InitiativeState()
        self.blocks: list[SurfacedBlock] = []
        self._blocks_by_id: dict[str, SurfacedBlock] = {}
        self._mode_window: list[SurfacedBlock] = []
        self._last_gap: frozenset = frozenset()
        self.last_root_seq: int | None = None
        self.observers: list[Observer] = []

    # -- plumbing ---------------------------------------------------------

    def _emit(self, kind: str, data: dict[str, Any]) -> None:
        for observer in list(self.observers):
            observer(kind, data)

    def _trace(self, actor: str, summary: str, caused_by: int | None = None) -> int:
        entry = self.trace.append(actor, summary, caused_by)
        self._emit("trace_appended", {"entry": entry.to_dict()})
        return entry.seq_no

    def note(self, actor: str, summary: str, caused_by: int | None = None) -> int:
        """Append a free-form trace entry (scenario banners, operator notes)."""
        return self._trace(actor, summary, caused_by)

    def _register(self, block: SurfacedBlock) -> SurfacedBlock:
        self.blocks.append(block)
        self._blocks_by_id[block.block_id] = block
        self._mode_window.append(block)
        return block

    def _get_block(self, block_id: str | None) -> SurfacedBlock:
        if not block_id:
            raise VerbError("this verb needs a target_block")
        block = self._blocks_by_id.get(block_id)
        if block is None:
            raise VerbError(f"no block '{block_id}' in this session")
        return block

    def block(self, block_id: str) -> SurfacedBlock:
        return self._get_block(block_id)

    # -- agent side ---------------------------------------------------------

    def submit_tool_call(self, payload: ToolCallPayload) -> SurfacedBlock:
        """Run one tool call through the pipeline; always surfaces a block."""
        actor = f"agent:{payload.agent_id}"
        label = payload.correlation_id or "(uncorrelated)"
        root = self._trace(
            actor, f"submitted tool call {label} for component '{payload.component_id}'"
        )
        self.last_root_seq = root
        schema = self.schemas.get(payload.component_id)
        if schema is None or schema.version != payload.schema_version:
            if schema is None:
                reason = f"unknown component '{payload.component_id}'"
            else:
                reason = (
                    f"schema version mismatch: payload pins {payload.schema_version}, "
                    f"session has {schema.version}"
                )
            self._trace(SYSTEM_ACTOR, f"rejected tool call: {reason}", caused_by=root)
            block = SurfacedBlock(
                block_id=self.ids.next_id("blk"),
                block_kind=BlockKind.GENERIC,
                payload=payload,
                decision=Decision(Verdict.DENY, reason),
                covers=frozenset(),
                status=BlockStatus.DENIED,
            )
            return self._surface(block, root)

        report = validate_payload(schema, payload)
        if report.valid and schema.block_kind is BlockKind.RECOVERABLE_CHANGE:
            report = report.merged(self._check_change_fields(payload))
        if report.valid:
            report = report.merged(enforce_clarity(schema, payload))
        if not report.valid:
            detail = "; ".join(f"{v.path}: {v.message}" for v in report.violations)
            self._trace(
                SYSTEM_ACTOR,
                f"validation failed for '{payload.component_id}': {detail}",
                caused_by=root,
            )
            block = SurfacedBlock(
                block_id=self.ids.next_id("blk"),
                block_kind=schema.block_kind,
                payload=payload,
                decision=Decision(Verdict.DENY, "payload failed validation"),
                covers=frozenset(),
                status=BlockStatus.DENIED,
                report=report,
            )
            return self._surface(block, root)
        self._trace(
            SYSTEM_ACTOR, f"validation passed for '{payload.component_id}'", caused_by=root
        )

        decision = self._gate(schema.block_kind, payload)
        self._trace(
            SYSTEM_ACTOR,
            f"permission {decision.verdict.value} for '{payload.component_id}': {decision.reason}",
            caused_by=root,
        )
        block = SurfacedBlock(
            block_id=self.ids.next_id("blk"),
            block_kind=schema.block_kind,
            payload=payload,
            decision=decision,
            covers=DEFAULT_BLOCK_COVERAGE[schema.block_kind],
            status=BlockStatus.PROPOSED,
        )
        if decision.verdict is Verdict.DENY:
            block.status = BlockStatus.DENIED
        elif decision.verdict is Verdict.ALLOW and schema.block_kind is BlockKind.RECOVERABLE_CHANGE:
            self._apply_change(block, actor, caused_by=root)
        return self._surface(block, root)

    def _check_change_fields(self, payload: ToolCallPayload) -> ValidationReport:
        # State-affecting components must say what they touch and what it becomes.
        violations = []
        for name in ("target", "new_value"):
            if not isinstance(payload.values.get(name), str):
                violations.append(
                    Violation(
                        name,
                        ViolationKind.MISSING_REQUIRED,
                        "recoverable changes need a text field here",
                    )
                )
        return ValidationReport(tuple(violations))

    def _gate(self, block_kind: BlockKind, payload: ToolCallPayload) -> Decision:
        if block_kind is BlockKind.RECOVERABLE_CHANGE:
            return check_permission(self.scope, str(payload.values["target"]), block_kind)
        return check_display(self.scope, block_kind)

    def _apply_change(self, block: SurfacedBlock, actor: str, caused_by: int | None) -> None:
        values = block.payload.values
        target = str(values["target"])
        action = make_action(
            action_id=self.ids.next_id("act"),
            target=target,
            description=str(values.get("description", f"set {target}")),
            state=self.domain_state,
            updates={target: values["new_value"]},
            actor=actor,
            timestamp=self.clock.now(),
        )
        self.action_log.apply(action, self.domain_state)
        block.linked_action = action.action_id
        block.status = BlockStatus.APPLIED
        self._trace(
            actor,
            f"applied action {action.action_id}: '{target}' -> {values['new_value']!r}",
            caused_by=caused_by,
        )

    def _surface(self, block: SurfacedBlock, root: int) -> SurfacedBlock:
        self._register(block)
        covering = (
            " covering " + ", ".join(sorted(r.value for r in block.covers))
            if block.covers
            else ""
        )
        self._trace(
            SYSTEM_ACTOR,
            f"surfaced {block.block_kind.value} block {block.block_id} "
            f"({block.payload.component_id}) status {block.status.value}{covering}",
            caused_by=root,
        )
        self._emit("block_proposed", {"block": block.to_dict()})
        self._report_compliance(root)
        return block

    def _report_compliance(self, caused_by: int | None) -> None:
        report = self.compliance()
        if report.missing and report.missing != self._last_gap:
            self._trace(
                SYSTEM_ACTOR,
                f"surfacing gap in {self.mode.value}: missing "
                + ", ".join(sorted(r.value for r in report.missing)),
                caused_by=caused_by,
            )
        self._last_gap = report.missing
        self._emit(
            "compliance_warning",
            {
                "mode": report.mode.value,
                "missing": sorted(r.value for r in report.missing),
                "satisfied": sorted(r.value for r in report.satisfied),
            },
        )

    def compliance(self) -> ComplianceReport:
        """Surfacing compliance for the current mode's window of blocks."""
        return check_surfacing(self.mode, self._mode_window)

    # -- events and modes ------------------------------------------------------

    def fire_event(self, event: SessionEvent, caused_by: int | None = None) -> TipMode:
        seq = self._trace(SYSTEM_ACTOR, f"session event {event.value}", caused_by=caused_by)
        new_mode = transition(self.mode, event)
        if new_mode is not self.mode:
            self._change_mode(new_mode, cause=f"event {event.value}", caused_by=seq)
        return self.mode

    def _change_mode(self, mode: TipMode, cause: str, caused_by: int | None) -> None:
        self.mode = mode
        self._mode_window = []
        self._last_gap = frozenset()
        self._trace(SYSTEM_ACTOR, f"mode changed to {mode.value} ({cause})", caused_by=caused_by)
        self._emit("mode_changed", {"mode": mode.value, "cause": cause})

    # -- human side ---------------------------------------------------------

    def handle_verb(self, verb: HumanVerb) -> list[SurfacedBlock]:
        """Apply one human verb; returns the blocks whose status changed."""
        detail = f" on {verb.target_block}" if verb.target_block else ""
        root = self._trace(HUMAN_ACTOR, f"human verb {verb.kind.value}{detail}")
        handler = {
            VerbKind.APPROVE: self._verb_approve,
            VerbKind.DENY: self._verb_deny,
            VerbKind.ADJUST: self._verb_adjust,
            VerbKind.UNDO: self._verb_undo,
            VerbKind.REDO: self._verb_redo,
            VerbKind.REVERT_ALL: self._verb_revert_all,
            VerbKind.APPROVE_ALL: self._verb_approve_all,
            VerbKind.SET_SCOPE: self._verb_set_scope,
            VerbKind.SET_MODE: self._verb_set_mode,
            VerbKind.YIELD_INITIATIVE: self._verb_yield,
        }[verb.kind]
        changed = handler(verb, root)
        for block in changed:
            self._emit("block_updated", {"block": block.to_dict()})
        return changed

    def _require_proposed(self, verb: HumanVerb) -> SurfacedBlock:
        block = self._get_block(verb.target_block)
        if block.status is not BlockStatus.PROPOSED:
            raise VerbError(
                f"block '{block.block_id}' is {block.status.value}; "
                f"{verb.kind.value} needs a proposed block"
            )
        return block

    def _verb_approve(self, verb: HumanVerb, root: int) -> list[SurfacedBlock]:
        block = self._require_proposed(verb)
        if block.decision.verdict is Verdict.DENY:
            raise VerbError(f"block '{block.block_id}' was denied and cannot be approved")
        if block.block_kind is BlockKind.RECOVERABLE_CHANGE:
            self._apply_change(block, HUMAN_ACTOR, caused_by=root)
            assert block.linked_action is not None
            self.action_log.approve(block.linked_action)
            block.status = BlockStatus.APPROVED
            self._trace(
                HUMAN_ACTOR,
                f"approved action {block.linked_action}; it is locked against undo",
                caused_by=root,
            )
            # A granted approval is itself a session event.
            self.fire_event(SessionEvent.APPROVAL_GRANTED, caused_by=root)
        else:
            block.status = BlockStatus.APPROVED
            self._trace(HUMAN_ACTOR, f"acknowledged block {block.block_id}", caused_by=root)
        return [block]

    def _verb_deny(self, verb: HumanVerb, root: int) -> list[SurfacedBlock]:
        block = self._require_proposed(verb)
        block.status = BlockStatus.DENIED
        self._trace(HUMAN_ACTOR, f"denied block {block.block_id}", caused_by=root)
        return [block]

    def _verb_adjust(self, verb: HumanVerb, root: int) -> list[SurfacedBlock]:
        block = self._require_proposed(verb)
        if not verb.field_edits:
            raise VerbError("adjust needs field_edits")
        schema = self.schemas[block.payload.component_id]
        values = dict(block.payload.values)
        for name, value in verb.field_edits.items():
            if value is None:
                values.pop(name, None)  # null removes a field
            else:
                values[name] = value
        candidate = block.payload.with_values(values, agent_id=HUMAN_ACTOR)
        report = validate_payload(schema, candidate)
        if report.valid and schema.block_kind is BlockKind.RECOVERABLE_CHANGE:
            report = report.merged(self._check_change_fields(candidate))
        if report.valid:
            report = report.merged(enforce_clarity(schema, candidate))
        if not report.valid:
            block.report = report
            detail = "; ".join(f"{v.path}: {v.message}" for v in report.violations)
            self._trace(
                HUMAN_ACTOR,
                f"adjustment of block {block.block_id} rejected: {detail}",
                caused_by=root,
            )
            return [block]
        # The adjusted payload is the human's own; re-run the gate on it.
        block.payload = candidate
        block.report = None
        decision = self._gate(block.block_kind, candidate)
        block.decision = decision
        edited = ", ".join(sorted(verb.field_edits))
        self._trace(
            HUMAN_ACTOR,
            f"adjusted block {block.block_id} fields: {edited}; permission {decision.verdict.value}",
            caused_by=root,
        )
        if decision.verdict is Verdict.DENY:
            block.status = BlockStatus.DENIED
        elif (
            decision.verdict is Verdict.ALLOW
            and block.block_kind is BlockKind.RECOVERABLE_CHANGE
        ):
            self._apply_change(block, HUMAN_ACTOR, caused_by=root)
        return [block]

    def _block_for_action(self, action_id: str) -> SurfacedBlock | None:
        for block in self.blocks:
            if block.linked_action == action_id:
                return block
        return None

    def _verb_undo(self, verb: HumanVerb, root: int) -> list[SurfacedBlock]:
        nxt = self.action_log.next_undo()
        if nxt is None:
            raise VerbError("nothing to undo")
        if verb.action_id is not None and verb.action_id != nxt.action_id:
            self.action_log.find(verb.action_id)  # unknown ids are their own error
            raise VerbError(
                f"undo is linear: next undoable action is '{nxt.action_id}', not '{verb.action_id}'"
            )
        entry = self.action_log.undo(self.domain_state)
        self._trace(
            HUMAN_ACTOR,
            f"reverted action {entry.action_id}: '{entry.target}' restored to "
            f"{self.domain_state.get(entry.target)!r}",
            caused_by=root,
        )
        block = self._block_for_action(entry.action_id)
        if block is not None:
            block.status = BlockStatus.REVERTED
            return [block]
        return []

    def _verb_redo(self, verb: HumanVerb, root: int) -> list[SurfacedBlock]:
        nxt = self.action_log.next_redo()
        if nxt is None:
            raise VerbError("nothing to redo")
        entry = self.action_log.redo(self.domain_state)
        self._trace(
            HUMAN_ACTOR,
            f"re-applied action {entry.action_id}: '{entry.target}' -> "
            f"{self.domain_state.get(entry.target)!r}",
            caused_by=root,
        )
        block = self._block_for_action(entry.action_id)
        if block is not None:
            block.status = BlockStatus.APPLIED
            return [block]
        return []

    def _verb_revert_all(self, verb: HumanVerb, root: int) -> list[SurfacedBlock]:
        entries = self.action_log.revert_all(self.domain_state)
        changed: list[SurfacedBlock] = []
        for entry in entries:
            self._trace(
                HUMAN_ACTOR,
                f"reverted action {entry.action_id}: '{entry.target}' restored to "
                f"{self.domain_state.get(entry.target)!r}",
                caused_by=root,
            )
            block = self._block_for_action(entry.action_id)
            if block is not None:
                block.status = BlockStatus.REVERTED
                changed.append(block)
        self._trace(
            HUMAN_ACTOR,
            f"revert_all complete ({len(entries)} actions); state: "
            + json.dumps(self.domain_state, sort_keys=True),
            caused_by=root,
        )
        return changed

    def _verb_approve_all(self, verb: HumanVerb, root: int) -> list[SurfacedBlock]:
        entries = self.action_log.approve_all()
        changed: list[SurfacedBlock] = []
        for entry in entries:
            self._trace(
                HUMAN_ACTOR,
                f"approved action {entry.action_id}; it is locked against undo",
                caused_by=root,
            )
            block = self._block_for_action(entry.action_id)
            if block is not None:
                block.status = BlockStatus.APPROVED
                changed.append(block)
        return changed

    def _verb_set_scope(self, verb: HumanVerb, root: int) -> list[SurfacedBlock]:
        if verb.scope is None:
            raise VerbError("set_scope needs a scope")
        self.scope = verb.scope
        self._trace(
            HUMAN_ACTOR,
            "scope updated: " + json.dumps(verb.scope.to_dict(), sort_keys=True),
            caused_by=root,
        )
        return []

    def _verb_set_mode(self, verb: HumanVerb, root: int) -> list[SurfacedBlock]:
        if verb.mode is None:
            raise VerbError("set_mode needs a mode")
        if verb.mode is not self.mode:
            self._change_mode(verb.mode, cause="human set_mode", caused_by=root)
        return []

    def _verb_yield(self, verb: HumanVerb, root: int) -> list[SurfacedBlock]:
        try:
            self.initiative.yield_to_agent("human yielded initiative", self.clock.now())
        except InitiativeError as exc:
            raise VerbError(str(exc)) from None
        self._trace(HUMAN_ACTOR, "initiative yielded to agents", caused_by=root)
        return []

    # -- snapshots --------------------------------------------------------------

    def snapshot(self) -> dict[str, Any]:
        """Everything a client needs to render the session from scratch."""
        compliance = self.compliance()
        return {
            "session_id": self.session_id,
            "scenario": self.scenario_name,
            "mode": self.mode.value,
            "domain_state": dict(sorted(self.domain_state.items())),
            "scope": self.scope.to_dict(),
            "initiative": self.initiative.to_dict(),
            "blocks": [b.to_dict() for b in self.blocks],
            "trace": [e.to_dict() for e in self.trace],
            "can_undo": self.action_log.can_undo(),
            "can_redo": self.action_log.can_redo(),
            "compliance": compliance.to_dict(),
        }
