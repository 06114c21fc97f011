"""Recoverable actions and the linear undo log.

Every state-affecting step is a RecoverableAction carrying a forward
delta and its inverse. The ActionLog keeps an append-only audit list of
everything ever applied plus a linear undo window over it: undo walks
the window backwards, redo walks it forwards, applying a fresh action
discards the not-redone suffix (it stays in the audit list), and
approving an action locks it — removing it from the window so neither
undo nor revert_all can touch it again.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterator

from ..errors import (
    ActionConflictError,
    ActionStateError,
    NothingToRedoError,
    NothingToUndoError,
    UnknownActionError,
)


class _Missing:
    """Sentinel for 'key absent from state' in deltas."""

    _instance: "_Missing | None" = None

    def __new__(cls) -> "_Missing":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "MISSING"


MISSING = _Missing()


@dataclass(frozen=True)
class Write:
    """One keyed mutation: key moves from `before` to `after`.

    MISSING as `before` means the key is created; as `after`, deleted.
    """

    key: str
    before: Any
    after: Any


@dataclass(frozen=True)
class Delta:
    writes: tuple[Write, ...]

    def inverted(self) -> "Delta":
        return Delta(tuple(Write(w.key, w.after, w.before) for w in reversed(self.writes)))

    def keys(self) -> tuple[str, ...]:
        return tuple(w.key for w in self.writes)


def delta_from_state(state: dict[str, Any], updates: dict[str, Any]) -> Delta:
    """Build a delta whose `before` values are captured from live state."""
    return Delta(
        tuple(Write(k, state.get(k, MISSING), v) for k, v in updates.items())
    )


def apply_delta(state: dict[str, Any], delta: Delta, check: bool = True) -> None:
    """Apply a delta in place.

    With check=True, every write's `before` must match current state or
    the whole delta is rejected (state untouched). Undo and redo replay
    recorded deltas with check=False.
    """
    if check:
        for w in delta.writes:
            current = state.get(w.key, MISSING)
            if current != w.before:
                raise ActionConflictError(
                    f"key '{w.key}' is {current!r}, expected {w.before!r}"
                )
    for w in delta.writes:
        if w.after is MISSING:
            state.pop(w.key, None)
        else:
            state[w.key] = w.after


class ActionStatus(str, Enum):
    PENDING = "pending"
    APPLIED = "applied"
    REVERTED = "reverted"
    APPROVED = "approved"


@dataclass
class RecoverableAction:
    """One undoable step. Status is owned by the ActionLog it joins."""

    action_id: str
    target: str
    description: str
    forward_delta: Delta
    inverse_delta: Delta
    actor: str
    timestamp: float
    status: ActionStatus = ActionStatus.PENDING

    def to_dict(self) -> dict[str, Any]:
        return {
            "action_id": self.action_id,
            "target": self.target,
            "description": self.description,
            "actor": self.actor,
            "timestamp": self.timestamp,
            "status": self.status.value,
        }


def make_action(
    action_id: str,
    target: str,
    description: str,
    state: dict[str, Any],
    updates: dict[str, Any],
    actor: str,
    timestamp: float,
) -> RecoverableAction:
    """Build an action against live state; the inverse restores exactly it."""
    forward = delta_from_state(state, updates)
    return RecoverableAction(
        action_id=action_id,
        target=target,
        description=description,
        forward_delta=forward,
        inverse_delta=forward.inverted(),
        actor=actor,
        timestamp=timestamp,
    )


class ActionLog:
    """Append-only action history with a linear undo window.

    `entries` records every action ever applied and is never truncated.
    `_window` holds indices into `entries` in application order; the
    cursor splits it into the applied prefix and the reverted suffix.
    Approved entries leave the window but stay in `entries`.
    """

    def __init__(self) -> None:
        self.entries: list[RecoverableAction] = []
        self._window: list[int] = []
        self._cursor = 0

    # -- queries ------------------------------------------------------------

    @property
    def undo_cursor(self) -> int:
        return self._cursor

    def can_undo(self) -> bool:
        return self._cursor > 0

    def can_redo(self) -> bool:
        return self._cursor < len(self._window)

    def next_undo(self) -> RecoverableAction | None:
        if not self.can_undo():
            return None
        return self.entries[self._window[self._cursor - 1]]

    def next_redo(self) -> RecoverableAction | None:
        if not self.can_redo():
            return None
        return self.entries[self._window[self._cursor]]

    def window_entries(self) -> Iterator[RecoverableAction]:
        for idx in self._window:
            yield self.entries[idx]

    def effective_entries(self) -> list[RecoverableAction]:
        """Actions currently in force (applied or approved), oldest first."""
        return [
            e
            for e in self.entries
            if e.status in (ActionStatus.APPLIED, ActionStatus.APPROVED)
        ]

    def find(self, action_id: str) -> RecoverableAction:
        for entry in self.entries:
            if entry.action_id == action_id:
                return entry
        raise UnknownActionError(f"no action '{action_id}'")

    # -- transitions ----------------------------------------------------------

    def apply(self, action: RecoverableAction, state: dict[str, Any]) -> RecoverableAction:
        """Apply a pending action; discards the redo branch beyond the cursor."""
        if action.status is not ActionStatus.PENDING:
            raise ActionStateError(
                f"action '{action.action_id}' is {action.status.value}, not pending"
            )
        apply_delta(state, action.forward_delta, check=True)
        del self._window[self._cursor:]  # reverted suffix is no longer reachable
        self.entries.append(action)
        self._window.append(len(self.entries) - 1)
        self._cursor = len(self._window)
        action.status = ActionStatus.APPLIED
        return action

    def undo(self, state: dict[str, Any]) -> RecoverableAction:
        if not self.can_undo():
            raise NothingToUndoError("nothing to undo")
        entry = self.entries[self._window[self._cursor - 1]]
        apply_delta(state, entry.inverse_delta, check=False)
        entry.status = ActionStatus.REVERTED
        self._cursor -= 1
        return entry

    def redo(self, state: dict[str, Any]) -> RecoverableAction:
        if not self.can_redo():
            raise NothingToRedoError("nothing to redo")
        entry = self.entries[self._window[self._cursor]]
        apply_delta(state, entry.forward_delta, check=False)
        entry.status = ActionStatus.APPLIED
        self._cursor += 1
        return entry

    def revert_all(self, state: dict[str, Any]) -> list[RecoverableAction]:
        """Undo every undoable entry, newest first. Approved entries stay."""
        reverted: list[RecoverableAction] = []
        while self.can_undo():
            reverted.append(self.undo(state))
        return reverted

    def approve(self, action_id: str) -> RecoverableAction:
        """Lock one applied action: no undo, no revert_all can reach it."""
        entry = self.find(action_id)
        if entry.status is not ActionStatus.APPLIED:
            raise ActionStateError(
                f"action '{action_id}' is {entry.status.value}; only applied actions can be approved"
            )
        pos = None
        for i in range(self._cursor):
            if self.entries[self._window[i]] is entry:
                pos = i
                break
        if pos is None:  # applied but sitting in the redo suffix cannot happen
            raise ActionStateError(f"action '{action_id}' is not in the undo window")
        entry.status = ActionStatus.APPROVED
        del self._window[pos]
        self._cursor -= 1
        return entry

    def approve_all(self) -> list[RecoverableAction]:
        """Lock every currently applied entry, oldest first."""
        applied = [self.entries[idx] for idx in self._window[: self._cursor]]
        return [self.approve(e.action_id) for e in applied]
