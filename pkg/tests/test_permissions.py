from __future__ import annotations

import pytest

from hax.errors import ScopeError
from hax.guardrails.permissions import (
    ALL_BLOCK_KINDS,
    AutonomyLevel,
    Decision,
    PermissionScope,
    Verdict,
    check_display,
    check_permission,
)
from hax.schemas import BlockKind


def scope(
    autonomy: AutonomyLevel = AutonomyLevel.ACT_AUTONOMOUSLY,
    kinds: frozenset = ALL_BLOCK_KINDS,
    modifiable: frozenset = frozenset({"doc.title", "doc.body"}),
    forbidden: frozenset = frozenset({"secrets.key"}),
    approval: frozenset = frozenset({"doc.body"}),
) -> PermissionScope:
    return PermissionScope(
        allowed_block_kinds=kinds,
        modifiable_targets=modifiable,
        forbidden_targets=forbidden,
        approval_required_targets=approval,
        autonomy_level=autonomy,
    )


CHANGE = BlockKind.RECOVERABLE_CHANGE


# --- scope invariants -----------------------------------------------------------


def test_forbidden_and_modifiable_cannot_overlap():
    with pytest.raises(ScopeError):
        scope(modifiable=frozenset({"x"}), forbidden=frozenset({"x"}), approval=frozenset())


def test_approval_targets_must_be_modifiable():
    with pytest.raises(ScopeError):
        scope(approval=frozenset({"unlisted"}))


def test_non_allow_decision_needs_a_reason():
    with pytest.raises(ValueError):
        Decision(Verdict.DENY, "")
    assert Decision(Verdict.ALLOW, "").verdict is Verdict.ALLOW


def test_scope_round_trip():
    s = scope()
    assert PermissionScope.from_dict(s.to_dict()) == s


# --- precedence, one discriminating pair per neighbouring rule -------------------


def test_forbidden_wins_over_everything():
    decision = check_permission(scope(), "secrets.key", CHANGE)
    assert decision.verdict is Verdict.DENY
    assert "forbidden" in decision.reason


def test_forbidden_reported_even_when_kind_also_disallowed():
    s = scope(kinds=frozenset({BlockKind.GENERIC}))
    decision = check_permission(s, "secrets.key", CHANGE)
    assert "forbidden" in decision.reason


def test_kind_check_precedes_observe_only():
    s = scope(autonomy=AutonomyLevel.OBSERVE_ONLY, kinds=frozenset({BlockKind.GENERIC}))
    decision = check_permission(s, "doc.title", CHANGE)
    assert decision.verdict is Verdict.DENY
    assert "not allowed" in decision.reason


def test_observe_only_precedes_undeclared_target():
    s = scope(autonomy=AutonomyLevel.OBSERVE_ONLY)
    decision = check_permission(s, "nowhere.declared", CHANGE)
    assert decision.verdict is Verdict.DENY
    assert "observation" in decision.reason


def test_undeclared_target_denied_even_at_full_autonomy():
    decision = check_permission(scope(), "nowhere.declared", CHANGE)
    assert decision.verdict is Verdict.DENY
    assert "not declared" in decision.reason


def test_approval_target_escalates_despite_full_autonomy():
    decision = check_permission(scope(), "doc.body", CHANGE)
    assert decision.verdict is Verdict.REQUIRE_APPROVAL
    assert "doc.body" in decision.reason


def test_suggest_autonomy_escalates_plain_target():
    decision = check_permission(scope(autonomy=AutonomyLevel.SUGGEST), "doc.title", CHANGE)
    assert decision.verdict is Verdict.REQUIRE_APPROVAL
    assert "autonomy" in decision.reason


def test_act_with_approval_escalates_plain_target():
    s = scope(autonomy=AutonomyLevel.ACT_WITH_APPROVAL)
    assert check_permission(s, "doc.title", CHANGE).verdict is Verdict.REQUIRE_APPROVAL


def test_full_autonomy_plain_target_allows():
    assert check_permission(scope(), "doc.title", CHANGE).verdict is Verdict.ALLOW


def test_every_autonomy_level_denies_undeclared_targets():
    for level in AutonomyLevel:
        decision = check_permission(scope(autonomy=level), "not.declared", CHANGE)
        assert decision.verdict is Verdict.DENY, level


# --- display gate ------------------------------------------------------------------


def test_display_requires_the_block_kind():
    s = scope(kinds=frozenset({BlockKind.PERMISSION_GATE}))
    decision = check_display(s, BlockKind.RATIONALE_DISPLAY)
    assert decision.verdict is Verdict.DENY


def test_display_denied_for_observe_only_agents():
    s = scope(autonomy=AutonomyLevel.OBSERVE_ONLY)
    assert check_display(s, BlockKind.RATIONALE_DISPLAY).verdict is Verdict.DENY


def test_display_allows_without_target_declarations():
    s = scope(modifiable=frozenset(), approval=frozenset())
    assert check_display(s, BlockKind.RATIONALE_DISPLAY).verdict is Verdict.ALLOW
