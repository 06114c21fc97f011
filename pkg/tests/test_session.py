from __future__ import annotations

import json

import pytest

from hax.clocks import SequentialIds, TickClock
from hax.errors import UnknownActionError, VerbError
from hax.guardrails.initiative import Holder
from hax.guardrails.permissions import (
    ALL_BLOCK_KINDS,
    AutonomyLevel,
    PermissionScope,
    Verdict,
)
from hax.registry.project import OFFICIAL_REPOSITORY
from hax.registry.sources import load_repository_schemas
from hax.schemas import BlockKind, ToolCallPayload, ViolationKind
from hax.session.blocks import BlockStatus, HumanVerb, VerbKind
from hax.session.service import Session
from hax.tip import SessionEvent, SurfacingRequirement, TipMode

CATALOG = load_repository_schemas(OFFICIAL_REPOSITORY)


def make_scope(
    autonomy=AutonomyLevel.ACT_AUTONOMOUSLY,
    modifiable=frozenset({"doc.title", "doc.body"}),
    approval=frozenset({"doc.body"}),
    forbidden=frozenset({"vault.key"}),
    kinds=ALL_BLOCK_KINDS,
) -> PermissionScope:
    return PermissionScope(
        allowed_block_kinds=kinds,
        modifiable_targets=modifiable,
        forbidden_targets=forbidden,
        approval_required_targets=approval,
        autonomy_level=autonomy,
    )


def make_session(scope: PermissionScope | None = None, **kwargs) -> Session:
    return Session(
        session_id="ses-0001",
        scope=scope if scope is not None else make_scope(),
        schemas=CATALOG,
        domain_state={"doc.title": "draft", "doc.body": "empty"},
        clock=TickClock(),
        ids=SequentialIds(),
        **kwargs,
    )


def call(component: str, values: dict, agent: str = "writer", corr: str = "c-1") -> ToolCallPayload:
    return ToolCallPayload(
        component_id=component,
        schema_version="1.0.0",
        values=values,
        agent_id=agent,
        correlation_id=corr,
    )


def change(target: str, new_value: str, description: str = "edit") -> ToolCallPayload:
    return call(
        "state-change", {"target": target, "description": description, "new_value": new_value}
    )


def plan(confidence: float = 0.8) -> ToolCallPayload:
    return call(
        "plan-preview",
        {
            "goal": "tidy the doc",
            "steps": ["retitle", "rewrite body"],
            "assumptions": ["doc is a draft"],
            "confidence": confidence,
            "rationale": "small focused edits",
        },
    )


def verb(kind: VerbKind, **kwargs) -> HumanVerb:
    return HumanVerb(kind=kind, **kwargs)


def summaries(session: Session) -> list[str]:
    return [e.summary for e in session.trace]


# --- submission pipeline ---------------------------------------------------------


def test_valid_display_call_runs_the_full_pipeline_in_order():
    session = make_session()
    block = session.submit_tool_call(plan())
    assert block.status is BlockStatus.PROPOSED
    assert block.decision.verdict is Verdict.ALLOW
    assert block.block_kind is BlockKind.RATIONALE_DISPLAY
    lines = summaries(session)
    submitted = lines.index("submitted tool call c-1 for component 'plan-preview'")
    validated = lines.index("validation passed for 'plan-preview'")
    gated = next(i for i, s in enumerate(lines) if s.startswith("permission allow"))
    surfaced = next(i for i, s in enumerate(lines) if s.startswith("surfaced"))
    assert submitted < validated < gated < surfaced


def test_every_pipeline_entry_cites_the_submission_as_cause():
    session = make_session()
    session.submit_tool_call(plan())
    root = next(e for e in session.trace if e.summary.startswith("submitted"))
    followups = [e for e in session.trace if e.seq_no > root.seq_no]
    assert followups
    assert all(e.caused_by == root.seq_no for e in followups)


def test_unknown_component_is_denied_on_a_generic_block():
    session = make_session()
    block = session.submit_tool_call(call("mystery-box", {"x": 1}))
    assert block.status is BlockStatus.DENIED
    assert block.block_kind is BlockKind.GENERIC
    assert "unknown component" in block.decision.reason
    assert any("rejected tool call: unknown component" in s for s in summaries(session))


def test_version_mismatch_is_denied():
    session = make_session()
    payload = ToolCallPayload("plan-preview", "9.9.9", {}, "writer")
    block = session.submit_tool_call(payload)
    assert block.status is BlockStatus.DENIED
    assert "version mismatch" in block.decision.reason


def test_invalid_payload_surfaces_denied_with_report():
    session = make_session()
    block = session.submit_tool_call(call("plan-preview", {"goal": "g", "surprise": 1}))
    assert block.status is BlockStatus.DENIED
    assert block.decision.verdict is Verdict.DENY
    assert block.report is not None and not block.report.valid
    assert block.covers == frozenset()
    kinds = {v.kind for v in block.report.violations}
    assert ViolationKind.UNKNOWN_FIELD in kinds
    assert ViolationKind.MISSING_REQUIRED in kinds
    assert any(s.startswith("validation failed for 'plan-preview'") for s in summaries(session))


def test_clarity_violation_blocks_surfacing_as_valid():
    session = make_session()
    payload = plan()
    payload.values["rationale"] = "   "  # structurally fine, clarity says no
    block = session.submit_tool_call(payload)
    assert block.status is BlockStatus.DENIED
    assert any(
        v.kind is ViolationKind.CLARITY_VIOLATION and v.path == "rationale"
        for v in block.report.violations
    )


def test_allowed_change_applies_immediately():
    session = make_session()
    block = session.submit_tool_call(change("doc.title", "Final Title"))
    assert block.status is BlockStatus.APPLIED
    assert block.linked_action == "act-0001"
    assert session.domain_state["doc.title"] == "Final Title"
    assert session.action_log.can_undo()
    assert any(
        s == "applied action act-0001: 'doc.title' -> 'Final Title'" for s in summaries(session)
    )


def test_approval_required_change_waits():
    session = make_session()
    block = session.submit_tool_call(change("doc.body", "new body"))
    assert block.status is BlockStatus.PROPOSED
    assert block.decision.verdict is Verdict.REQUIRE_APPROVAL
    assert session.domain_state["doc.body"] == "empty"  # untouched until approval
    assert block.linked_action is None


def test_forbidden_target_is_denied_and_state_untouched():
    session = make_session()
    block = session.submit_tool_call(change("vault.key", "hacked"))
    assert block.status is BlockStatus.DENIED
    assert "forbidden" in block.decision.reason
    assert "vault.key" not in session.domain_state


def test_undeclared_target_is_denied():
    session = make_session()
    block = session.submit_tool_call(change("doc.footer", "x"))
    assert block.status is BlockStatus.DENIED
    assert "not declared" in block.decision.reason


def test_observe_only_scope_denies_display_blocks():
    session = make_session(scope=make_scope(autonomy=AutonomyLevel.OBSERVE_ONLY))
    block = session.submit_tool_call(plan())
    assert block.status is BlockStatus.DENIED


def test_suggest_autonomy_escalates_changes_to_approval():
    session = make_session(scope=make_scope(autonomy=AutonomyLevel.SUGGEST))
    block = session.submit_tool_call(change("doc.title", "suggested"))
    assert block.decision.verdict is Verdict.REQUIRE_APPROVAL
    assert session.domain_state["doc.title"] == "draft"


def test_change_call_missing_target_field_fails_validation():
    session = make_session()
    block = session.submit_tool_call(
        call("state-change", {"description": "no target", "new_value": "x", "target": 4})
    )
    assert block.status is BlockStatus.DENIED
    assert block.report is not None


# --- approve ------------------------------------------------------------------------


def test_approve_applies_locks_and_fires_the_event():
    session = make_session()
    block = session.submit_tool_call(change("doc.body", "approved body"))
    changed = session.handle_verb(verb(VerbKind.APPROVE, target_block=block.block_id))
    assert changed == [block]
    assert block.status is BlockStatus.APPROVED
    assert session.domain_state["doc.body"] == "approved body"
    assert not session.action_log.can_undo()  # locked, not undoable
    assert session.mode is TipMode.EXECUTION  # approval_granted moved the mode
    lines = summaries(session)
    assert any("approved action act-0001; it is locked against undo" in s for s in lines)
    assert "session event approval_granted" in lines


def test_approve_display_block_just_acknowledges():
    session = make_session()
    block = session.submit_tool_call(plan())
    session.handle_verb(verb(VerbKind.APPROVE, target_block=block.block_id))
    assert block.status is BlockStatus.APPROVED
    assert session.mode is TipMode.INCEPTION  # no approval event for displays
    assert any(f"acknowledged block {block.block_id}" in s for s in summaries(session))


def test_approve_needs_a_proposed_block():
    session = make_session()
    block = session.submit_tool_call(change("doc.title", "instant"))  # auto-applied
    with pytest.raises(VerbError):
        session.handle_verb(verb(VerbKind.APPROVE, target_block=block.block_id))


def test_approve_rejects_denied_blocks():
    session = make_session()
    block = session.submit_tool_call(change("vault.key", "nope"))
    with pytest.raises(VerbError):
        session.handle_verb(verb(VerbKind.APPROVE, target_block=block.block_id))


def test_verb_on_unknown_block():
    session = make_session()
    with pytest.raises(VerbError):
        session.handle_verb(verb(VerbKind.APPROVE, target_block="blk-9999"))


def test_deny_verb_marks_the_block():
    session = make_session()
    block = session.submit_tool_call(change("doc.body", "pending"))
    session.handle_verb(verb(VerbKind.DENY, target_block=block.block_id))
    assert block.status is BlockStatus.DENIED
    assert session.domain_state["doc.body"] == "empty"


# --- adjust -------------------------------------------------------------------------


def test_adjust_invalid_edit_attaches_report_and_keeps_payload():
    session = make_session()
    block = session.submit_tool_call(change("doc.body", "pending"))
    before = dict(block.payload.values)
    session.handle_verb(
        verb(VerbKind.ADJUST, target_block=block.block_id, field_edits={"new_value": 42})
    )
    assert block.payload.values == before  # rejected edit changes nothing
    assert block.status is BlockStatus.PROPOSED
    assert block.report is not None and not block.report.valid
    assert any("adjustment of block blk-0001 rejected" in s for s in summaries(session))


def test_adjust_rewrites_payload_and_regates():
    session = make_session()
    block = session.submit_tool_call(change("doc.body", "pending"))
    assert block.decision.verdict is Verdict.REQUIRE_APPROVAL
    session.handle_verb(
        verb(
            VerbKind.ADJUST,
            target_block=block.block_id,
            field_edits={"target": "doc.title", "new_value": "retargeted"},
        )
    )
    # doc.title needs no approval, so the human's adjusted change applies.
    assert block.payload.agent_id == "human"
    assert block.decision.verdict is Verdict.ALLOW
    assert block.status is BlockStatus.APPLIED
    assert session.domain_state["doc.title"] == "retargeted"
    assert block.report is None


def test_adjust_to_forbidden_target_denies_the_block():
    session = make_session()
    block = session.submit_tool_call(change("doc.body", "pending"))
    session.handle_verb(
        verb(VerbKind.ADJUST, target_block=block.block_id, field_edits={"target": "vault.key"})
    )
    assert block.status is BlockStatus.DENIED


def test_adjust_null_removes_a_field():
    session = make_session()
    block = session.submit_tool_call(plan())
    session.handle_verb(
        verb(VerbKind.ADJUST, target_block=block.block_id, field_edits={"assumptions": None})
    )
    assert "assumptions" not in block.payload.values
    assert block.status is BlockStatus.PROPOSED


def test_adjust_needs_edits():
    session = make_session()
    block = session.submit_tool_call(plan())
    with pytest.raises(VerbError):
        session.handle_verb(verb(VerbKind.ADJUST, target_block=block.block_id))


# --- undo / redo ----------------------------------------------------------------------


def test_undo_verb_reverts_and_flips_block_status():
    session = make_session()
    block = session.submit_tool_call(change("doc.title", "v2"))
    changed = session.handle_verb(verb(VerbKind.UNDO))
    assert changed == [block]
    assert block.status is BlockStatus.REVERTED
    assert session.domain_state["doc.title"] == "draft"
    assert any(
        "reverted action act-0001: 'doc.title' restored to 'draft'" in s
        for s in summaries(session)
    )


def test_redo_verb_reapplies():
    session = make_session()
    block = session.submit_tool_call(change("doc.title", "v2"))
    session.handle_verb(verb(VerbKind.UNDO))
    session.handle_verb(verb(VerbKind.REDO))
    assert block.status is BlockStatus.APPLIED
    assert session.domain_state["doc.title"] == "v2"


def test_undo_with_wrong_action_id_is_linear():
    session = make_session()
    session.submit_tool_call(change("doc.title", "v2"))
    session.submit_tool_call(change("doc.title", "v3"))
    with pytest.raises(VerbError, match="linear"):
        session.handle_verb(verb(VerbKind.UNDO, action_id="act-0001"))
    with pytest.raises(UnknownActionError):
        session.handle_verb(verb(VerbKind.UNDO, action_id="act-9999"))
    session.handle_verb(verb(VerbKind.UNDO, action_id="act-0002"))
    assert session.domain_state["doc.title"] == "v2"


def test_undo_with_nothing_to_undo():
    session = make_session()
    with pytest.raises(VerbError):
        session.handle_verb(verb(VerbKind.UNDO))


def test_revert_all_traces_each_step_and_the_final_state():
    session = make_session()
    session.submit_tool_call(change("doc.title", "v2"))
    session.submit_tool_call(change("doc.title", "v3", description="again"))
    session.handle_verb(verb(VerbKind.REVERT_ALL))
    assert session.domain_state["doc.title"] == "draft"
    final = [s for s in summaries(session) if s.startswith("revert_all complete")]
    assert len(final) == 1
    state_json = final[0].split("state: ", 1)[1]
    assert json.loads(state_json) == session.domain_state


def test_approve_all_locks_every_applied_action():
    session = make_session()
    b1 = session.submit_tool_call(change("doc.title", "v2"))
    b2 = session.submit_tool_call(change("doc.title", "v3", description="again"))
    changed = session.handle_verb(verb(VerbKind.APPROVE_ALL))
    assert changed == [b1, b2]
    assert b1.status is BlockStatus.APPROVED and b2.status is BlockStatus.APPROVED
    assert not session.action_log.can_undo()


# --- scope, mode, initiative verbs ------------------------------------------------------


def test_set_scope_changes_future_gating():
    session = make_session()
    tightened = make_scope(autonomy=AutonomyLevel.SUGGEST)
    session.handle_verb(verb(VerbKind.SET_SCOPE, scope=tightened))
    block = session.submit_tool_call(change("doc.title", "later"))
    assert block.decision.verdict is Verdict.REQUIRE_APPROVAL
    assert any(s.startswith("scope updated: ") for s in summaries(session))


def test_set_mode_switches_and_resets_the_window():
    session = make_session()
    session.submit_tool_call(plan())
    assert session.compliance().satisfied  # the plan covered something
    session.handle_verb(verb(VerbKind.SET_MODE, mode=TipMode.EXECUTION))
    assert session.mode is TipMode.EXECUTION
    report = session.compliance()
    assert report.satisfied == frozenset()
    assert report.missing == frozenset(
        {
            SurfacingRequirement.PROGRESS,
            SurfacingRequirement.COMPLETION_STATUS,
            SurfacingRequirement.DECISION_LOGS,
            SurfacingRequirement.ROLLBACK_CONTROLS,
        }
    )


def test_yield_initiative():
    session = make_session()
    session.handle_verb(verb(VerbKind.YIELD_INITIATIVE))
    assert session.initiative.current_holder is Holder.AGENT
    with pytest.raises(VerbError):
        session.handle_verb(verb(VerbKind.YIELD_INITIATIVE))


# --- events and compliance ---------------------------------------------------------------


def test_fire_event_traces_and_changes_mode():
    session = make_session()
    session.fire_event(SessionEvent.PLAN_PROPOSED)
    assert session.mode is TipMode.PROBLEM_SOLVING
    lines = summaries(session)
    assert "session event plan_proposed" in lines
    assert "mode changed to problem_solving (event plan_proposed)" in lines


def test_stationary_event_does_not_log_a_mode_change():
    session = make_session()
    session.fire_event(SessionEvent.TASK_COMPLETED)  # inception stays inception
    assert session.mode is TipMode.INCEPTION
    assert not any("mode changed" in s for s in summaries(session))


def test_compliance_gap_traced_once_until_it_changes():
    session = make_session()
    session.submit_tool_call(plan())
    session.submit_tool_call(plan(confidence=0.7))
    gaps = [s for s in summaries(session) if s.startswith("surfacing gap in inception")]
    assert len(gaps) == 1  # same gap, logged once
    assert "approval_controls" in gaps[0]


def test_surfacing_gap_closes_when_coverage_arrives():
    session = make_session()
    session.submit_tool_call(plan())
    assert not session.compliance().compliant
    session.submit_tool_call(
        call("scope-gate", {"target": "doc.body", "requested_action": "rewrite"})
    )
    assert session.compliance().compliant


def test_observers_see_submission_events_in_order():
    session = make_session()
    events: list[str] = []
    session.observers.append(lambda kind, data: events.append(kind))
    session.submit_tool_call(plan())
    assert events[-1] == "compliance_warning"
    assert "block_proposed" in events
    assert events.index("block_proposed") < len(events) - 1
    assert events.count("trace_appended") >= 3


def test_compliance_warning_payload_lists_missing_sorted():
    session = make_session()
    seen: list[dict] = []
    session.observers.append(
        lambda kind, data: seen.append(data) if kind == "compliance_warning" else None
    )
    session.submit_tool_call(plan())
    assert seen[-1]["mode"] == "inception"
    assert seen[-1]["missing"] == ["approval_controls"]
    assert seen[-1]["satisfied"] == sorted(
        ["goals", "planned_actions", "assumptions"]
    )


# --- gate soundness ------------------------------------------------------------------------
#
# Scan the trace: every applied action by an agent must be preceded by an
# explicit allow for that submission; human-applied actions must follow an
# approval-required decision plus a human approve verb.


def test_no_agent_action_applies_without_a_permission_line():
    session = make_session()
    session.submit_tool_call(change("doc.title", "a"))
    session.submit_tool_call(change("doc.body", "b"))  # waits for approval
    session.submit_tool_call(change("vault.key", "c"))  # denied
    blocked = session.blocks[1]
    session.handle_verb(verb(VerbKind.APPROVE, target_block=blocked.block_id))

    entries = list(session.trace)
    for entry in entries:
        if not entry.summary.startswith("applied action"):
            continue
        if entry.actor == "human":
            continue
        root = entry.caused_by
        assert root is not None
        pipeline = [e for e in entries if e.caused_by == root and e.seq_no < entry.seq_no]
        assert any(
            e.summary.startswith("permission allow") for e in pipeline
        ), entry.summary


def test_snapshot_carries_everything_a_client_needs():
    session = make_session()
    block = session.submit_tool_call(change("doc.body", "pending"))
    snap = session.snapshot()
    assert snap["session_id"] == "ses-0001"
    assert snap["mode"] == "inception"
    assert snap["domain_state"] == {"doc.body": "empty", "doc.title": "draft"}
    assert snap["scope"]["autonomy_level"] == "act_autonomously"
    assert snap["can_undo"] is False
    assert snap["blocks"][0]["block_id"] == block.block_id
    assert snap["blocks"][0]["decision"]["verdict"] == "require_approval"
    assert len(snap["trace"]) == len(session.trace)
    assert snap["compliance"]["mode"] == "inception"
    assert snap["initiative"]["current_holder"] == "human"
