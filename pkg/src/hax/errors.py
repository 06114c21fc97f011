"""Exception hierarchy shared across the package.

Every error raised by this package derives from HaxError so callers can
catch one type at the boundary. Subclasses are grouped by subsystem.
"""

from __future__ import annotations


class HaxError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(HaxError):
    """A schema document is malformed or violates a schema invariant.

    line/column are set when the failure maps to a position in the
    source text (JSON syntax errors), otherwise None.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class InstructionError(HaxError):
    """An agent instruction file is malformed."""


class ScopeError(HaxError):
    """A permission scope violates its set-relation invariants."""


class ActionError(HaxError):
    """Base class for recoverable-action failures."""


class ActionConflictError(ActionError):
    """A forward delta's expected prior values do not match current state."""


class NothingToUndoError(ActionError):
    """Undo requested with no applied, unlocked entry behind the cursor."""


class NothingToRedoError(ActionError):
    """Redo requested with no reverted entry ahead of the cursor."""


class UnknownActionError(ActionError):
    """An action_id does not name any logged action."""


class ActionStateError(ActionError):
    """The action exists but its status forbids the requested transition."""


class InitiativeError(HaxError):
    """An initiative request that the holder model forbids."""


class TraceError(HaxError):
    """A trace operation violated the chain contract, or an export is malformed."""


class RegistryError(HaxError):
    """Base class for registry failures."""


class FetchError(RegistryError):
    """A repository or one of its files could not be retrieved."""


class ComponentNotFoundError(RegistryError):
    """No reachable repository provides the requested component."""

    def __init__(self, message: str, warnings: tuple[str, ...] = ()):
        super().__init__(message)
        self.warnings = warnings


class IntegrityError(RegistryError):
    """Fetched file content does not match the manifest digest."""


class ManifestError(RegistryError):
    """A component manifest is malformed or contains unsafe paths."""


class NotInitializedError(RegistryError):
    """The directory has no project configuration."""


class AlreadyInitializedError(RegistryError):
    """The directory already contains a project configuration."""


class LocallyModifiedError(RegistryError):
    """Installed files were edited after installation; refusing to overwrite."""


class SessionError(HaxError):
    """Base class for session-service failures."""


class VerbError(SessionError):
    """A human verb cannot be applied to its target in its current state."""


class ProtocolError(SessionError):
    """An inbound wire message is malformed."""


class ScenarioError(SessionError):
    """A scenario file is malformed or references unknown pieces."""
