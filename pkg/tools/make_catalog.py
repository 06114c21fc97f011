#!/usr/bin/env python3
"""Regenerate the bundled component catalog under src/hax/data/catalog/.

The catalog is a normal repository file tree (index.json + one
directory per component with manifest.json, schema.json,
instructions.md, description.md, component.tsx). Digests in the
manifests are computed here, so rerun this script after editing any
component definition below.
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO_ROOT / "src"))

from hax.registry.models import content_digest  # noqa: E402
from hax.schemas import (  # noqa: E402
    AgentInstruction,
    BlockKind,
    ClarityRequirements,
    ComponentKind,
    ComponentSchema,
    Constraints,
    FieldKind,
    FieldSpec,
    FieldType,
    serialize_instruction,
    serialize_schema,
)

CATALOG_DIR = REPO_ROOT / "src" / "hax" / "data" / "catalog"


def text(name: str, required: bool = False, max_length: int | None = None) -> FieldSpec:
    return FieldSpec(
        name,
        FieldType(FieldKind.TEXT),
        required=required,
        constraints=Constraints(max_length=max_length),
    )


def real(name: str, required: bool = False, lo: float | None = None, hi: float | None = None) -> FieldSpec:
    return FieldSpec(
        name,
        FieldType(FieldKind.REAL),
        required=required,
        constraints=Constraints(min_value=lo, max_value=hi),
    )


def integer(name: str, required: bool = False, lo: float | None = None) -> FieldSpec:
    return FieldSpec(
        name,
        FieldType(FieldKind.INTEGER),
        required=required,
        constraints=Constraints(min_value=lo),
    )


def text_list(name: str, required: bool = False, max_count: int | None = None) -> FieldSpec:
    return FieldSpec(
        name,
        FieldType(FieldKind.LIST, element=FieldType(FieldKind.TEXT)),
        required=required,
        constraints=Constraints(max_count=max_count),
    )


def enum(name: str, values: tuple[str, ...], required: bool = False) -> FieldSpec:
    return FieldSpec(name, FieldType(FieldKind.ENUM, enum_values=values), required=required)


COMPONENTS: list[tuple[ComponentSchema, AgentInstruction, str]] = [
    (
        ComponentSchema(
            component_id="confidence-card",
            version="1.0.0",
            kind=ComponentKind.ARTIFACT,
            block_kind=BlockKind.RATIONALE_DISPLAY,
            fields=(
                text("statement", required=True, max_length=500),
                real("confidence", required=True, lo=0, hi=1),
                text("rationale", required=True),
                text_list("sources", required=True, max_count=10),
            ),
            clarity=ClarityRequirements(True, True, True),
        ),
        AgentInstruction(
            component_id="confidence-card",
            guidance=(
                "Surface one claim the human should weigh, with how sure you are "
                "and why. Keep the statement to a single finding; open a second "
                "card for a second finding."
            ),
            output_constraints=(
                "statement is a single declarative sentence",
                "confidence reflects your real uncertainty, not politeness",
                "rationale names the evidence, not the conclusion again",
                "sources list every document or feed the rationale leans on",
            ),
            examples=(
                'statement "Budget Inn saves $300 over the trip" with confidence 0.72',
            ),
        ),
        "Shows one agent claim with its confidence, rationale, and sources.",
    ),
    (
        ComponentSchema(
            component_id="plan-preview",
            version="1.0.0",
            kind=ComponentKind.ARTIFACT,
            block_kind=BlockKind.RATIONALE_DISPLAY,
            fields=(
                text("goal", required=True, max_length=200),
                text_list("steps", required=True, max_count=20),
                text_list("assumptions", max_count=20),
                real("confidence", required=True, lo=0, hi=1),
                text("rationale", required=True),
            ),
            clarity=ClarityRequirements(requires_confidence=True, requires_rationale=True),
        ),
        AgentInstruction(
            component_id="plan-preview",
            guidance=(
                "Lay out what you intend to do before doing any of it: the goal, "
                "the ordered steps, and the assumptions the plan stands on."
            ),
            output_constraints=(
                "steps are ordered and individually actionable",
                "assumptions list anything the human could correct before work starts",
            ),
        ),
        "Previews an agent's goal, planned steps, and assumptions before execution.",
    ),
    (
        ComponentSchema(
            component_id="scope-gate",
            version="1.0.0",
            kind=ComponentKind.ARTIFACT,
            block_kind=BlockKind.PERMISSION_GATE,
            fields=(
                text("target", required=True),
                text("requested_action", required=True, max_length=100),
                text("justification", max_length=300),
            ),
        ),
        AgentInstruction(
            component_id="scope-gate",
            guidance=(
                "Announce which protected target you want to touch and what you "
                "want to do to it, so the human can grant, narrow, or refuse the "
                "permission before anything happens."
            ),
            output_constraints=(
                "target names one resource exactly as the scope declares it",
                "justification says why now, in one or two sentences",
            ),
        ),
        "Requests or displays a permission boundary around one target.",
    ),
    (
        ComponentSchema(
            component_id="state-change",
            version="1.0.0",
            kind=ComponentKind.ARTIFACT,
            block_kind=BlockKind.RECOVERABLE_CHANGE,
            fields=(
                text("target", required=True),
                text("description", required=True, max_length=300),
                text("new_value", required=True),
            ),
        ),
        AgentInstruction(
            component_id="state-change",
            guidance=(
                "Propose one reversible change to one target. The description is "
                "what the human reads before approving or reverting, so write the "
                "consequence, not the mechanism."
            ),
            output_constraints=(
                "one target per call; never batch unrelated changes",
                "description is plain language a non-engineer can act on",
            ),
        ),
        "One reversible change to one target, with a plain-language description.",
    ),
    (
        ComponentSchema(
            component_id="proposal-composer",
            version="1.0.0",
            kind=ComponentKind.COMPOSER,
            block_kind=BlockKind.CO_EDIT_PROPOSAL,
            fields=(
                text("topic", required=True, max_length=120),
                text("proposal", required=True),
                text("question", required=True, max_length=200),
            ),
        ),
        AgentInstruction(
            component_id="proposal-composer",
            guidance=(
                "Draft something for the human to edit rather than merely approve. "
                "State the proposal, then ask the one question whose answer would "
                "change it."
            ),
            output_constraints=(
                "proposal is concrete enough to edit line by line",
                "question invites a decision, not reassurance",
            ),
        ),
        "A draft the human co-edits, with an explicit invitation for input.",
    ),
    (
        ComponentSchema(
            component_id="trace-note",
            version="1.0.0",
            kind=ComponentKind.ARTIFACT,
            block_kind=BlockKind.TRACE_ENTRY,
            fields=(
                text("summary", required=True, max_length=300),
                enum("outcome", ("in_progress", "completed", "anomaly"), required=True),
                integer("related_seq", lo=0),
            ),
        ),
        AgentInstruction(
            component_id="trace-note",
            guidance=(
                "Record what just happened in the shared timeline: progress, "
                "completion, or an anomaly worth a human look."
            ),
            output_constraints=(
                "summary states what changed, not what you intend",
                "use outcome anomaly whenever reality diverged from the plan",
            ),
        ),
        "A timeline entry: progress, completion, or an anomaly flag.",
    ),
    (
        ComponentSchema(
            component_id="status-banner",
            version="1.0.0",
            kind=ComponentKind.ARTIFACT,
            block_kind=BlockKind.GENERIC,
            fields=(
                text("message", required=True, max_length=200),
                enum("severity", ("info", "warning", "error"), required=True),
            ),
        ),
        AgentInstruction(
            component_id="status-banner",
            guidance="Short, severity-tagged status line for anything the other components do not cover.",
            output_constraints=("one sentence; no markup",),
        ),
        "A one-line severity-tagged status message.",
    ),
]


def component_stub(component_id: str, description: str) -> str:
    """Placeholder source file; real render implementations replace it."""
    name = "".join(part.capitalize() for part in component_id.split("-"))
    return (
        f"// {component_id}: {description}\n"
        f"// Render implementation placeholder; the schema in schema.json is the contract.\n"
        f"export interface {name}Props {{\n"
        f"  values: Record<string, unknown>;\n"
        f"  status: string;\n"
        f"}}\n\n"
        f"export function {name}(props: {name}Props): string {{\n"
        f"  return JSON.stringify(props.values);\n"
        f"}}\n"
    )


def main() -> None:
    if CATALOG_DIR.exists():
        shutil.rmtree(CATALOG_DIR)
    (CATALOG_DIR / "components").mkdir(parents=True)
    index_entries = []
    for schema, instruction, description in COMPONENTS:
        cid = schema.component_id
        cdir = CATALOG_DIR / "components" / cid
        cdir.mkdir()
        files = {
            "schema.json": serialize_schema(schema).encode(),
            "instructions.md": serialize_instruction(instruction).encode(),
            "description.md": f"# {cid}\n\n{description}\n".encode(),
            "component.tsx": component_stub(cid, description).encode(),
        }
        for name, data in files.items():
            (cdir / name).write_bytes(data)
        manifest = {
            "component_id": cid,
            "version": schema.version,
            "kind": schema.kind.value,
            "schema_file": "schema.json",
            "instruction_file": "instructions.md",
            "files": [
                {"path": name, "digest": content_digest(data)}
                for name, data in sorted(files.items())
            ],
        }
        (cdir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
        index_entries.append(
            {
                "component_id": cid,
                "version": schema.version,
                "kind": schema.kind.value,
                "manifest_path": f"components/{cid}/manifest.json",
            }
        )
    index = {"components": sorted(index_entries, key=lambda e: e["component_id"])}
    (CATALOG_DIR / "index.json").write_text(json.dumps(index, indent=2) + "\n")
    print(f"wrote {len(COMPONENTS)} components to {CATALOG_DIR}")


if __name__ == "__main__":
    main()
