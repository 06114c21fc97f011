"""Scenario files: scripted multi-agent sessions that replay deterministically.

A scenario bundles an initial domain state, a permission scope, an
ordered script of agent tool calls (each optionally firing a session
event), and named verb scripts — scheduled human verbs keyed by the
step they follow. Verb targets may reference blocks symbolically as
``@step:N`` (the block surfaced by script step N), so scripts survive
edits to the scenario.

Run with an injected deterministic clock, a scenario produces exactly
the same trace every time, chain hashes included.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Sequence

from ..clocks import Clock, IdSource, SequentialIds, TickClock
from ..errors import ProtocolError, ScenarioError, ScopeError
from ..guardrails.permissions import PermissionScope
from ..registry.project import OFFICIAL_REPOSITORY
from ..registry.sources import load_repository_schemas
from ..schemas import SchemaError, ToolCallPayload
from ..tip import SessionEvent
from .blocks import HumanVerb
from .service import Session

STEP_REF_RE = re.compile(r"^@step:(\d+)$")


@dataclass(frozen=True)
class ScenarioStep:
    agent_id: str
    payload: ToolCallPayload
    event: SessionEvent | None = None


@dataclass(frozen=True)
class ScheduledVerb:
    """A raw verb dict to run after the given 1-based script step (0 = before any)."""

    after_step: int
    verb: dict[str, Any]


@dataclass(frozen=True)
class Scenario:
    name: str
    title: str
    initial_state: dict[str, Any]
    scope: PermissionScope
    script: tuple[ScenarioStep, ...]
    verb_scripts: dict[str, tuple[ScheduledVerb, ...]] = field(default_factory=dict)
    expected: dict[str, Any] = field(default_factory=dict)


def scenario_from_dict(data: Any) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    for key in ("name", "initial_state", "scope", "script"):
        if key not in data:
            raise ScenarioError(f"scenario missing {key!r}")
    try:
        scope = PermissionScope.from_dict(data["scope"])
    except (KeyError, ValueError, ScopeError) as exc:
        raise ScenarioError(f"malformed scope: {exc}") from None
    if not isinstance(data["initial_state"], dict):
        raise ScenarioError("initial_state must be an object")
    steps: list[ScenarioStep] = []
    raw_script = data["script"]
    if not isinstance(raw_script, list):
        raise ScenarioError("script must be an array")
    for i, raw in enumerate(raw_script, start=1):
        if not isinstance(raw, dict) or "agent_id" not in raw or "payload" not in raw:
            raise ScenarioError(f"step {i} needs agent_id and payload")
        payload_data = dict(raw["payload"])
        payload_data.setdefault("agent_id", raw["agent_id"])
        try:
            payload = ToolCallPayload.from_dict(payload_data)
        except SchemaError as exc:
            raise ScenarioError(f"step {i}: {exc}") from None
        event = None
        if raw.get("event") is not None:
            try:
                event = SessionEvent(raw["event"])
            except ValueError:
                raise ScenarioError(f"step {i}: unknown event {raw['event']!r}") from None
        steps.append(ScenarioStep(agent_id=str(raw["agent_id"]), payload=payload, event=event))
    verb_scripts: dict[str, tuple[ScheduledVerb, ...]] = {}
    for script_name, entries in (data.get("verb_scripts") or {}).items():
        if not isinstance(entries, list):
            raise ScenarioError(f"verb script {script_name!r} must be an array")
        scheduled = []
        for raw in entries:
            if not isinstance(raw, dict) or "after_step" not in raw or "verb" not in raw:
                raise ScenarioError(f"verb script {script_name!r} entries need after_step and verb")
            after = raw["after_step"]
            if not isinstance(after, int) or not 0 <= after <= len(steps):
                raise ScenarioError(
                    f"verb script {script_name!r}: after_step {after!r} is outside the script"
                )
            scheduled.append(ScheduledVerb(after_step=after, verb=dict(raw["verb"])))
        verb_scripts[str(script_name)] = tuple(scheduled)
    return Scenario(
        name=str(data["name"]),
        title=str(data.get("title", "")),
        initial_state=dict(data["initial_state"]),
        scope=scope,
        script=tuple(steps),
        verb_scripts=verb_scripts,
        expected=dict(data.get("expected", {})),
    )


def bundled_scenarios() -> list[str]:
    root = resources.files("hax") / "data" / "scenarios"
    return sorted(
        entry.name[: -len(".json")]
        for entry in root.iterdir()
        if entry.name.endswith(".json")
    )


def load_scenario(ref: str) -> Scenario:
    """Load a bundled scenario by name, or any scenario file by path."""
    if "/" not in ref and not ref.endswith(".json"):
        node = resources.files("hax") / "data" / "scenarios" / f"{ref}.json"
        if not node.is_file():
            known = ", ".join(bundled_scenarios())
            raise ScenarioError(f"no bundled scenario {ref!r} (have: {known})")
        text = node.read_text(encoding="utf-8")
    else:
        path = Path(ref)
        if not path.is_file():
            raise ScenarioError(f"no scenario file at {path}")
        text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"malformed scenario JSON: {exc}") from None
    return scenario_from_dict(data)


def build_session(
    scenario: Scenario,
    session_id: str = "ses-0001",
    clock: Clock | None = None,
    ids: IdSource | None = None,
) -> Session:
    """A fresh session preloaded with the bundled component schemas.

    Defaults to a deterministic clock so scenario runs replay exactly.
    """
    return Session(
        session_id=session_id,
        scope=scenario.scope,
        schemas=load_repository_schemas(OFFICIAL_REPOSITORY),
        domain_state=scenario.initial_state,
        clock=clock if clock is not None else TickClock(),
        ids=ids if ids is not None else SequentialIds(),
        scenario_name=scenario.name,
    )


def resolve_block_refs(verb_data: dict[str, Any], step_blocks: dict[int, str]) -> dict[str, Any]:
    """Swap ``@step:N`` block references for the ids minted at run time."""
    target = verb_data.get("target_block")
    if isinstance(target, str):
        match = STEP_REF_RE.match(target)
        if match:
            step = int(match.group(1))
            if step not in step_blocks:
                raise ScenarioError(f"verb references @step:{step}, which has not surfaced a block")
            return {**verb_data, "target_block": step_blocks[step]}
    return verb_data


def run_scenario(
    session: Session,
    scenario: Scenario,
    verbs: str | Sequence[ScheduledVerb] = (),
) -> Session:
    """Replay a scenario script, injecting scheduled human verbs.

    `verbs` is a named verb script bundled with the scenario, or an
    explicit sequence. An empty scenario leaves the session untouched
    beyond the opening trace entry.
    """
    if isinstance(verbs, str):
        if verbs not in scenario.verb_scripts:
            known = ", ".join(sorted(scenario.verb_scripts))
            raise ScenarioError(f"no verb script {verbs!r} (have: {known})")
        schedule_source: Iterable[ScheduledVerb] = scenario.verb_scripts[verbs]
    else:
        schedule_source = verbs
    schedule: dict[int, list[dict[str, Any]]] = {}
    for item in schedule_source:
        schedule.setdefault(item.after_step, []).append(item.verb)

    session.note("system", f"scenario '{scenario.name}' started")
    step_blocks: dict[int, str] = {}

    def run_verbs(after: int) -> None:
        for raw in schedule.get(after, []):
            try:
                verb = HumanVerb.from_dict(resolve_block_refs(raw, step_blocks))
            except ProtocolError as exc:
                raise ScenarioError(f"bad verb after step {after}: {exc}") from None
            session.handle_verb(verb)

    run_verbs(0)
    for number, step in enumerate(scenario.script, start=1):
        block = session.submit_tool_call(step.payload)
        step_blocks[number] = block.block_id
        if step.event is not None:
            session.fire_event(step.event, caused_by=session.last_root_seq)
        run_verbs(number)
    return session
