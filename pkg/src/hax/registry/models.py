"""Registry data model: repositories, manifests, fetched packages.

Everything a repository serves is content-addressed: the manifest lists
each file with its sha256 digest, and installation records those
digests so later runs can tell local edits from pristine installs.
"""

from __future__ import annotations

import hashlib
import posixpath
from dataclasses import dataclass
from typing import Any

from ..errors import ManifestError
from ..schemas import COMPONENT_ID_RE, VERSION_RE, ComponentKind


def content_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass(frozen=True)
class RepositoryConfig:
    """One configured repository. Lower priority number wins."""

    name: str
    location: str
    priority: int
    auth_env: str | None = None

    def __post_init__(self) -> None:
        if self.priority < 0:
            raise ValueError("priority must be non-negative")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "name": self.name,
            "location": self.location,
            "priority": self.priority,
        }
        if self.auth_env:
            out["auth_env"] = self.auth_env
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RepositoryConfig":
        return cls(
            name=str(data["name"]),
            location=str(data["location"]),
            priority=int(data["priority"]),
            auth_env=data.get("auth_env"),
        )


def _check_relative_path(path: str) -> str:
    """Reject anything that could escape the install directory."""
    if not path or path != path.strip():
        raise ManifestError(f"malformed file path {path!r}")
    if "\\" in path or path.startswith("/"):
        raise ManifestError(f"file path {path!r} must be relative with forward slashes")
    segments = path.split("/")
    if any(seg in ("", ".", "..") for seg in segments):
        raise ManifestError(f"file path {path!r} contains unsafe segments")
    return posixpath.normpath(path)


@dataclass(frozen=True)
class ManifestFile:
    path: str
    digest: str

    def to_dict(self) -> dict[str, str]:
        return {"path": self.path, "digest": self.digest}


@dataclass(frozen=True)
class ComponentManifest:
    component_id: str
    version: str
    kind: ComponentKind
    files: tuple[ManifestFile, ...]
    schema_file: str
    instruction_file: str

    def __post_init__(self) -> None:
        if not COMPONENT_ID_RE.match(self.component_id):
            raise ManifestError(f"invalid component_id {self.component_id!r}")
        if not VERSION_RE.match(self.version):
            raise ManifestError(f"invalid version {self.version!r}")
        seen: set[str] = set()
        for f in self.files:
            checked = _check_relative_path(f.path)
            if checked in seen:
                raise ManifestError(f"duplicate file path {f.path!r}")
            seen.add(checked)
            if len(f.digest) != 64 or set(f.digest) - set("0123456789abcdef"):
                raise ManifestError(f"malformed digest for {f.path!r}")
        for name, path in (("schema_file", self.schema_file), ("instruction_file", self.instruction_file)):
            if path not in seen:
                raise ManifestError(f"{name} {path!r} is not in the file list")

    def digest_for(self, path: str) -> str:
        for f in self.files:
            if f.path == path:
                return f.digest
        raise ManifestError(f"no file {path!r} in manifest")

    def to_dict(self) -> dict[str, Any]:
        return {
            "component_id": self.component_id,
            "version": self.version,
            "kind": self.kind.value,
            "schema_file": self.schema_file,
            "instruction_file": self.instruction_file,
            "files": [f.to_dict() for f in self.files],
        }

    @classmethod
    def from_dict(cls, data: Any) -> "ComponentManifest":
        if not isinstance(data, dict):
            raise ManifestError("manifest must be a JSON object")
        try:
            kind = ComponentKind(data["kind"])
            files_raw = data["files"]
            if not isinstance(files_raw, list):
                raise ManifestError("manifest files must be an array")
            files = tuple(
                ManifestFile(path=str(f["path"]), digest=str(f["digest"]).lower())
                for f in files_raw
            )
            return cls(
                component_id=str(data["component_id"]),
                version=str(data["version"]),
                kind=kind,
                files=files,
                schema_file=str(data["schema_file"]),
                instruction_file=str(data["instruction_file"]),
            )
        except KeyError as exc:
            raise ManifestError(f"manifest missing key {exc.args[0]!r}") from None
        except ValueError as exc:
            raise ManifestError(str(exc)) from None


@dataclass(frozen=True)
class ComponentPackage:
    """A manifest plus the fetched bytes of every file it lists."""

    manifest: ComponentManifest
    contents: dict[str, bytes]

    def __post_init__(self) -> None:
        listed = {f.path for f in self.manifest.files}
        if set(self.contents) != listed:
            raise ManifestError("package contents do not match the manifest file list")


def verify_integrity(package: ComponentPackage) -> list[str]:
    """Paths whose content digest disagrees with the manifest."""
    return [
        f.path
        for f in package.manifest.files
        if content_digest(package.contents[f.path]) != f.digest
    ]


@dataclass(frozen=True)
class IndexEntry:
    component_id: str
    version: str
    kind: ComponentKind
    manifest_path: str

    @classmethod
    def from_dict(cls, data: Any) -> "IndexEntry":
        if not isinstance(data, dict):
            raise ManifestError("index entry must be a JSON object")
        try:
            return cls(
                component_id=str(data["component_id"]),
                version=str(data["version"]),
                kind=ComponentKind(data["kind"]),
                manifest_path=_check_relative_path(str(data["manifest_path"])),
            )
        except KeyError as exc:
            raise ManifestError(f"index entry missing key {exc.args[0]!r}") from None
        except ValueError as exc:
            raise ManifestError(str(exc)) from None
