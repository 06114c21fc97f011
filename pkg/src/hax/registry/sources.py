"""Repository access: local directories, HTTP(S) registries, the bundled catalog.

A repository is a file tree with an ``index.json`` at its root listing
the components it serves. Three location schemes are understood:

- a filesystem path (absolute or relative),
- an ``http://`` / ``https://`` base URL, optionally authenticated with
  a bearer token read from the environment variable named in the
  repository config,
- ``builtin:official`` — the catalog bundled with this package, so a
  fresh project works offline.
"""

from __future__ import annotations

import json
import os
import posixpath
from importlib import resources
from pathlib import Path
from typing import Any

import requests

from ..errors import FetchError, ManifestError
from ..schemas import ComponentSchema, parse_schema
from .models import ComponentManifest, IndexEntry, RepositoryConfig

BUILTIN_SCHEME = "builtin:"
HTTP_TIMEOUT = 10.0


class RepositorySource:
    """Reads files from one repository location."""

    def __init__(self, config: RepositoryConfig):
        self.config = config
        location = config.location
        self._base_url: str | None = None
        self._root: Path | None = None
        if location.startswith(("http://", "https://")):
            self._base_url = location.rstrip("/")
        elif location.startswith(BUILTIN_SCHEME):
            name = location[len(BUILTIN_SCHEME):]
            if name != "official":
                raise FetchError(f"unknown builtin repository {name!r}")
            data_root = resources.files("hax") / "data" / "catalog"
            self._root = Path(str(data_root))
        else:
            self._root = Path(location)

    def read_bytes(self, relative_path: str) -> bytes:
        if self._base_url is not None:
            return self._read_url(relative_path)
        assert self._root is not None
        path = self._root / relative_path
        try:
            return path.read_bytes()
        except OSError as exc:
            raise FetchError(f"cannot read {path}: {exc.strerror or exc}") from None

    def _read_url(self, relative_path: str) -> bytes:
        url = f"{self._base_url}/{relative_path}"
        headers = {}
        if self.config.auth_env:
            token = os.environ.get(self.config.auth_env, "")
            if token:
                headers["Authorization"] = f"Bearer {token}"
        try:
            response = requests.get(url, headers=headers, timeout=HTTP_TIMEOUT)
        except requests.RequestException as exc:
            raise FetchError(f"cannot fetch {url}: {exc}") from None
        if response.status_code != 200:
            raise FetchError(f"cannot fetch {url}: HTTP {response.status_code}")
        return response.content

    def read_json(self, relative_path: str) -> Any:
        raw = self.read_bytes(relative_path)
        try:
            return json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ManifestError(f"malformed JSON in {relative_path}: {exc}") from None

    def load_index(self) -> list[IndexEntry]:
        data = self.read_json("index.json")
        if not isinstance(data, dict) or not isinstance(data.get("components"), list):
            raise ManifestError("index.json must be an object with a components array")
        return [IndexEntry.from_dict(entry) for entry in data["components"]]

    @staticmethod
    def sibling_path(manifest_path: str, relative_path: str) -> str:
        """A manifest's file paths are relative to the manifest's directory."""
        base = posixpath.dirname(manifest_path)
        return posixpath.join(base, relative_path) if base else relative_path


def load_repository_schemas(config: RepositoryConfig) -> dict[str, ComponentSchema]:
    """Every component schema one repository serves, keyed by component_id."""
    source = RepositorySource(config)
    schemas: dict[str, ComponentSchema] = {}
    for entry in source.load_index():
        manifest = ComponentManifest.from_dict(source.read_json(entry.manifest_path))
        raw = source.read_bytes(source.sibling_path(entry.manifest_path, manifest.schema_file))
        schema = parse_schema(raw.decode("utf-8"))
        schemas[schema.component_id] = schema
    return schemas
