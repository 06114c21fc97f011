"""Shared fixtures: schema factories, on-disk fixture repositories, a CLI runner."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from hax.cli import main as cli_main
from hax.registry.models import content_digest
from hax.schemas import (
    BlockKind,
    ClarityRequirements,
    ComponentKind,
    ComponentSchema,
    Constraints,
    FieldKind,
    FieldSpec,
    FieldType,
    serialize_schema,
)


def text_field(name: str, required: bool = False, max_length: int | None = None) -> FieldSpec:
    return FieldSpec(
        name=name,
        kind=FieldType(kind=FieldKind.TEXT),
        required=required,
        constraints=Constraints(max_length=max_length),
    )


def make_schema(
    component_id: str = "note-card",
    version: str = "1.0.0",
    kind: ComponentKind = ComponentKind.ARTIFACT,
    block_kind: BlockKind = BlockKind.RATIONALE_DISPLAY,
    fields: tuple[FieldSpec, ...] | None = None,
    clarity: ClarityRequirements = ClarityRequirements(),
) -> ComponentSchema:
    if fields is None:
        fields = (
            text_field("title", required=True, max_length=80),
            text_field("body"),
            FieldSpec(
                name="count",
                kind=FieldType(kind=FieldKind.INTEGER),
                constraints=Constraints(min_value=0, max_value=10),
            ),
        )
    return ComponentSchema(
        component_id=component_id,
        version=version,
        kind=kind,
        block_kind=block_kind,
        fields=fields,
        clarity=clarity,
    )


def write_repository(
    root: Path,
    schemas: list[ComponentSchema],
    corrupt: set[str] = frozenset(),
) -> None:
    """Lay out a repository directory: index.json plus per-component manifests.

    Components named in ``corrupt`` get a wrong digest recorded for their
    schema file, so fetching them trips the integrity check.
    """
    root.mkdir(parents=True, exist_ok=True)
    components = []
    for schema in schemas:
        cid = schema.component_id
        cdir = root / "components" / cid
        cdir.mkdir(parents=True)
        schema_bytes = serialize_schema(schema).encode("utf-8")
        instructions = f"# component: {cid}\n\nRender plainly.\n"
        instruction_bytes = instructions.encode("utf-8")
        (cdir / "schema.json").write_bytes(schema_bytes)
        (cdir / "instructions.md").write_bytes(instruction_bytes)
        schema_digest = content_digest(schema_bytes)
        if cid in corrupt:
            schema_digest = ("0" if schema_digest[0] != "0" else "1") + schema_digest[1:]
        manifest = {
            "component_id": cid,
            "version": schema.version,
            "kind": schema.kind.value,
            "schema_file": "schema.json",
            "instruction_file": "instructions.md",
            "files": [
                {"path": "schema.json", "digest": schema_digest},
                {"path": "instructions.md", "digest": content_digest(instruction_bytes)},
            ],
        }
        (cdir / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")
        components.append(
            {
                "component_id": cid,
                "version": schema.version,
                "kind": schema.kind.value,
                "manifest_path": f"components/{cid}/manifest.json",
            }
        )
    (root / "index.json").write_text(
        json.dumps({"components": components}, indent=2), encoding="utf-8"
    )


@pytest.fixture
def schema_factory():
    return make_schema


@pytest.fixture
def repo_builder():
    return write_repository


@pytest.fixture
def run_cli(capsys):
    """Run the CLI in-process; returns (exit_code, stdout, stderr)."""

    def run(*argv: str) -> tuple[int, str, str]:
        code = cli_main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run
