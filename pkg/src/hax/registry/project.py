"""Project state: the ``hax.config`` file and copy-into-tree installation.

A project is any directory holding a ``hax.config``. Components are
installed by copying their files under ``hax/components/<id>/`` so the
project owns the source outright; the config records each installed
file's digest, which is how later installs detect local edits and
refuse to clobber them without --force.

Config writes are atomic (temp file + rename in the same directory).
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..errors import (
    AlreadyInitializedError,
    LocallyModifiedError,
    NotInitializedError,
    RegistryError,
)
from ..schemas import ComponentKind
from ..tip import export_tables
from .models import ComponentPackage, RepositoryConfig, content_digest

CONFIG_NAME = "hax.config"
HAX_DIR = "hax"
COMPONENTS_DIR = "components"
CONFIG_FORMAT = 1

OFFICIAL_REPOSITORY = RepositoryConfig(
    name="official", location="builtin:official", priority=100
)


@dataclass(frozen=True)
class InstalledComponent:
    component_id: str
    version: str
    kind: ComponentKind
    repository: str
    files: dict[str, str]  # project-relative path -> sha256 recorded at install

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": self.version,
            "kind": self.kind.value,
            "repository": self.repository,
            "files": dict(sorted(self.files.items())),
        }


@dataclass
class Project:
    root: Path
    repositories: list[RepositoryConfig] = field(default_factory=list)
    installed: dict[str, InstalledComponent] = field(default_factory=dict)

    @property
    def config_path(self) -> Path:
        return self.root / CONFIG_NAME

    def components_dir(self) -> Path:
        return self.root / HAX_DIR / COMPONENTS_DIR


def init_project(root: Path) -> tuple[Project, list[Path]]:
    """Create the project skeleton; returns the project and created paths."""
    root = Path(root)
    if not root.is_dir():
        raise RegistryError(f"{root} is not a directory")
    if (root / CONFIG_NAME).exists() or (root / HAX_DIR).exists():
        raise AlreadyInitializedError(f"{root} already contains a hax project")
    created: list[Path] = []
    hax_dir = root / HAX_DIR
    (hax_dir / COMPONENTS_DIR).mkdir(parents=True)
    project = Project(root=root, repositories=[OFFICIAL_REPOSITORY], installed={})
    save_project(project)
    created.append(project.config_path)
    format_path = hax_dir / "schema-format.json"
    _write_atomic(format_path, json.dumps(_schema_format_reference(), indent=2) + "\n")
    created.append(format_path)
    tables_path = hax_dir / "tip_tables.json"
    _write_atomic(tables_path, json.dumps(export_tables(), indent=2) + "\n")
    created.append(tables_path)
    return project, created


def load_project(root: Path) -> Project:
    root = Path(root)
    config_path = root / CONFIG_NAME
    if not config_path.is_file():
        raise NotInitializedError(f"no {CONFIG_NAME} in {root}; run init first")
    try:
        data = json.loads(config_path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise RegistryError(f"cannot read {config_path}: {exc}") from None
    if not isinstance(data, dict) or data.get("format") != CONFIG_FORMAT:
        raise RegistryError(f"{config_path} has an unsupported format")
    repositories = [RepositoryConfig.from_dict(r) for r in data.get("repositories", [])]
    installed: dict[str, InstalledComponent] = {}
    for component_id, info in data.get("installed", {}).items():
        installed[component_id] = InstalledComponent(
            component_id=component_id,
            version=str(info["version"]),
            kind=ComponentKind(info["kind"]),
            repository=str(info.get("repository", "")),
            files={str(p): str(d) for p, d in info.get("files", {}).items()},
        )
    return Project(root=root, repositories=repositories, installed=installed)


def save_project(project: Project) -> None:
    data = {
        "format": CONFIG_FORMAT,
        "repositories": [r.to_dict() for r in sorted(project.repositories, key=lambda r: (r.priority, r.name))],
        "installed": {
            cid: comp.to_dict() for cid, comp in sorted(project.installed.items())
        },
    }
    _write_atomic(project.config_path, json.dumps(data, indent=2) + "\n")


def _write_atomic(path: Path, text: str) -> None:
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def local_modifications(project: Project, component_id: str) -> list[str]:
    """Installed files whose on-disk bytes differ from the recorded digests."""
    record = project.installed.get(component_id)
    if record is None:
        return []
    changed: list[str] = []
    for rel_path, digest in sorted(record.files.items()):
        path = project.root / rel_path
        if not path.is_file() or content_digest(path.read_bytes()) != digest:
            changed.append(rel_path)
    return changed


def install(
    package: ComponentPackage,
    project: Project,
    repository: str,
    force: bool = False,
) -> list[Path]:
    """Copy a fetched component into the project tree and record it.

    Refuses to overwrite locally modified files unless force is set.
    Returns the written paths. Reinstalling pristine files is a no-op
    overwrite and always safe.
    """
    manifest = package.manifest
    changed = local_modifications(project, manifest.component_id)
    if changed and not force:
        raise LocallyModifiedError(
            f"'{manifest.component_id}' has local edits: {', '.join(changed)} "
            "(use --force to overwrite)"
        )
    dest_root = project.components_dir() / manifest.component_id
    dest_root.mkdir(parents=True, exist_ok=True)
    resolved_root = dest_root.resolve()
    written: list[Path] = []
    recorded: dict[str, str] = {}
    for mf in manifest.files:
        dest = dest_root / mf.path
        # Manifest parsing already rejects traversal; re-check the final path.
        if resolved_root not in dest.resolve().parents and dest.resolve() != resolved_root:
            raise RegistryError(f"refusing to write outside the component directory: {mf.path}")
        dest.parent.mkdir(parents=True, exist_ok=True)
        data = package.contents[mf.path]
        dest.write_bytes(data)
        written.append(dest)
        recorded[str(dest.relative_to(project.root))] = content_digest(data)
    project.installed[manifest.component_id] = InstalledComponent(
        component_id=manifest.component_id,
        version=manifest.version,
        kind=manifest.kind,
        repository=repository,
        files=recorded,
    )
    save_project(project)
    return written


def _schema_format_reference() -> dict[str, Any]:
    """Reference document describing the schema-file format, written at init."""
    return {
        "document": {
            "component_id": "lowercase identifier (letters, digits, _ or -)",
            "version": "X.Y.Z",
            "kind": ["artifact", "composer"],
            "block_kind": [
                "permission_gate",
                "rationale_display",
                "recoverable_change",
                "co_edit_proposal",
                "trace_entry",
                "generic",
            ],
            "clarity_requirements": {
                "requires_confidence": "payloads must carry confidence in [0, 1]",
                "requires_rationale": "payloads must carry a non-empty rationale",
                "requires_sources": "payloads must carry at least one source",
            },
            "fields": "array of field entries",
        },
        "field_entry": {
            "name": "lowercase identifier",
            "kind": ["text", "integer", "real", "boolean", "enum", "list", "record"],
            "required": "boolean, default false",
            "values": "enum only: permitted text values",
            "element": "list only: element type (kind name or object)",
            "fields": "record only: nested field entries",
            "constraints": {
                "min": "integer/real lower bound",
                "max": "integer/real upper bound",
                "max_length": "text length cap, >= 1",
                "max_count": "list size cap, >= 1",
            },
        },
    }
