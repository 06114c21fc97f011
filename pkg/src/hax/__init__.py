"""hax: guardrails, schemas, a component registry, and a mediated session
service for building human-steerable agentic interfaces."""

__version__ = "0.1.0"

from .errors import HaxError
from .schemas import (
    AgentInstruction,
    BlockKind,
    ComponentKind,
    ComponentSchema,
    ToolCallPayload,
    ValidationReport,
    enforce_clarity,
    parse_instruction_file,
    parse_schema,
    serialize_instruction,
    serialize_schema,
    validate_payload,
)

__all__ = [
    "AgentInstruction",
    "BlockKind",
    "ComponentKind",
    "ComponentSchema",
    "HaxError",
    "ToolCallPayload",
    "ValidationReport",
    "__version__",
    "enforce_clarity",
    "parse_instruction_file",
    "parse_schema",
    "serialize_instruction",
    "serialize_schema",
    "validate_payload",
]
