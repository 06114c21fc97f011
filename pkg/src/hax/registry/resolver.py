"""Component resolution across prioritized repositories.

Repositories are searched in priority order (lower number first, name
as tie-break). A repository that cannot be reached is recorded as a
warning and skipped; a repository that serves content failing its own
digests is an integrity error and aborts the search.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ComponentNotFoundError, FetchError, IntegrityError, ManifestError
from ..schemas import ComponentKind
from .models import ComponentManifest, ComponentPackage, RepositoryConfig, verify_integrity
from .sources import RepositorySource


@dataclass
class Resolution:
    package: ComponentPackage
    repository: str
    warnings: list[str] = field(default_factory=list)


def search_order(repositories: list[RepositoryConfig]) -> list[RepositoryConfig]:
    return sorted(repositories, key=lambda r: (r.priority, r.name))


def resolve(
    component_id: str,
    kind: ComponentKind,
    repositories: list[RepositoryConfig],
) -> Resolution:
    """Fetch the highest-priority copy of a component.

    Raises ComponentNotFoundError (carrying any per-repository warnings)
    when no reachable repository serves the component, IntegrityError
    when a repository's content contradicts its manifest digests.
    """
    if not repositories:
        raise ValueError("at least one repository must be configured")
    warnings: list[str] = []
    for config in search_order(repositories):
        try:
            source = RepositorySource(config)
            entries = source.load_index()
        except (FetchError, ManifestError) as exc:
            warnings.append(f"repository '{config.name}' skipped: {exc}")
            continue
        entry = next(
            (e for e in entries if e.component_id == component_id and e.kind == kind),
            None,
        )
        if entry is None:
            continue
        try:
            package = _fetch_package(source, entry.manifest_path)
        except (FetchError, ManifestError) as exc:
            warnings.append(f"repository '{config.name}' skipped: {exc}")
            continue
        if package.manifest.component_id != component_id or package.manifest.kind != kind:
            warnings.append(
                f"repository '{config.name}' skipped: manifest disagrees with its index entry"
            )
            continue
        corrupt = verify_integrity(package)
        if corrupt:
            raise IntegrityError(
                f"repository '{config.name}' serves corrupt content for "
                f"'{component_id}': {', '.join(corrupt)}"
            )
        return Resolution(package=package, repository=config.name, warnings=warnings)
    raise ComponentNotFoundError(
        f"no configured repository provides {kind.value} '{component_id}'",
        warnings=tuple(warnings),
    )


def _fetch_package(source: RepositorySource, manifest_path: str) -> ComponentPackage:
    manifest = ComponentManifest.from_dict(source.read_json(manifest_path))
    contents = {
        f.path: source.read_bytes(source.sibling_path(manifest_path, f.path))
        for f in manifest.files
    }
    return ComponentPackage(manifest=manifest, contents=contents)
