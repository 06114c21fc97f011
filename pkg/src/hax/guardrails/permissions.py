"""Permission scopes and the deny-by-default gate.

A scope declares what an agent may touch (modifiable targets), what it
must never touch (forbidden targets), what needs a human sign-off
(approval-required targets), which block kinds it may surface, and how
much autonomy it runs with. Anything not explicitly granted is denied.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

from ..errors import ScopeError
from ..schemas import BlockKind


class AutonomyLevel(str, Enum):
    OBSERVE_ONLY = "observe_only"
    SUGGEST = "suggest"
    ACT_WITH_APPROVAL = "act_with_approval"
    ACT_AUTONOMOUSLY = "act_autonomously"


class Verdict(str, Enum):
    ALLOW = "allow"
    DENY = "deny"
    REQUIRE_APPROVAL = "require_approval"


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    reason: str

    def __post_init__(self) -> None:
        # Every non-allow outcome must be explainable to the human.
        if self.verdict is not Verdict.ALLOW and not self.reason:
            raise ValueError(f"{self.verdict.value} decisions need a reason")

    def to_dict(self) -> dict[str, str]:
        return {"verdict": self.verdict.value, "reason": self.reason}


@dataclass(frozen=True)
class PermissionScope:
    """One agent's granted envelope. Immutable; replace to adjust."""

    allowed_block_kinds: frozenset[BlockKind]
    modifiable_targets: frozenset[str]
    forbidden_targets: frozenset[str] = frozenset()
    approval_required_targets: frozenset[str] = frozenset()
    autonomy_level: AutonomyLevel = AutonomyLevel.SUGGEST

    def __post_init__(self) -> None:
        overlap = self.forbidden_targets & self.modifiable_targets
        if overlap:
            raise ScopeError(
                f"targets both forbidden and modifiable: {', '.join(sorted(overlap))}"
            )
        stray = self.approval_required_targets - self.modifiable_targets
        if stray:
            raise ScopeError(
                f"approval-required targets must be modifiable: {', '.join(sorted(stray))}"
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "allowed_block_kinds": sorted(k.value for k in self.allowed_block_kinds),
            "modifiable_targets": sorted(self.modifiable_targets),
            "forbidden_targets": sorted(self.forbidden_targets),
            "approval_required_targets": sorted(self.approval_required_targets),
            "autonomy_level": self.autonomy_level.value,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PermissionScope":
        return cls(
            allowed_block_kinds=frozenset(
                BlockKind(k) for k in data.get("allowed_block_kinds", [])
            ),
            modifiable_targets=frozenset(data.get("modifiable_targets", [])),
            forbidden_targets=frozenset(data.get("forbidden_targets", [])),
            approval_required_targets=frozenset(data.get("approval_required_targets", [])),
            autonomy_level=AutonomyLevel(data.get("autonomy_level", "suggest")),
        )


def check_permission(scope: PermissionScope, target: str, block_kind: BlockKind) -> Decision:
    """Decide whether one state-affecting call may proceed.

    Deny wins over everything; approval requirements win over autonomy;
    a target missing from every scope set is denied, never allowed.
    """
    if target in scope.forbidden_targets:
        return Decision(Verdict.DENY, f"target '{target}' is forbidden")
    if block_kind not in scope.allowed_block_kinds:
        return Decision(Verdict.DENY, f"block kind '{block_kind.value}' is not allowed")
    if scope.autonomy_level is AutonomyLevel.OBSERVE_ONLY:
        return Decision(Verdict.DENY, "agent is restricted to observation")
    if target not in scope.modifiable_targets:
        return Decision(Verdict.DENY, f"target '{target}' is not declared modifiable")
    if target in scope.approval_required_targets:
        return Decision(
            Verdict.REQUIRE_APPROVAL, f"target '{target}' requires human approval"
        )
    if scope.autonomy_level in (AutonomyLevel.SUGGEST, AutonomyLevel.ACT_WITH_APPROVAL):
        return Decision(
            Verdict.REQUIRE_APPROVAL,
            f"autonomy level '{scope.autonomy_level.value}' requires human approval",
        )
    return Decision(Verdict.ALLOW, "target is modifiable and autonomy permits acting")


def check_display(scope: PermissionScope, block_kind: BlockKind) -> Decision:
    """Gate for blocks that present information without touching state."""
    if block_kind not in scope.allowed_block_kinds:
        return Decision(Verdict.DENY, f"block kind '{block_kind.value}' is not allowed")
    if scope.autonomy_level is AutonomyLevel.OBSERVE_ONLY:
        return Decision(Verdict.DENY, "agent is restricted to observation")
    return Decision(Verdict.ALLOW, "block kind is allowed")


ALL_BLOCK_KINDS = frozenset(BlockKind)
