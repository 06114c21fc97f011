"""Multi-repository component registry with copy-into-tree installation."""

from .models import (
    ComponentManifest,
    ComponentPackage,
    IndexEntry,
    ManifestFile,
    RepositoryConfig,
    content_digest,
    verify_integrity,
)
from .project import (
    CONFIG_NAME,
    OFFICIAL_REPOSITORY,
    InstalledComponent,
    Project,
    init_project,
    install,
    load_project,
    local_modifications,
    save_project,
)
from .resolver import Resolution, resolve, search_order
from .sources import RepositorySource

__all__ = [
    "CONFIG_NAME",
    "ComponentManifest",
    "ComponentPackage",
    "IndexEntry",
    "InstalledComponent",
    "ManifestFile",
    "OFFICIAL_REPOSITORY",
    "Project",
    "RepositoryConfig",
    "RepositorySource",
    "Resolution",
    "content_digest",
    "init_project",
    "install",
    "load_project",
    "local_modifications",
    "resolve",
    "save_project",
    "search_order",
    "verify_integrity",
]
