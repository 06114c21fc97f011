"""Component schemas and tool-call payload validation.

A component schema declares exactly which fields an agent may populate
when it targets an interface component, plus the clarity requirements
(confidence / rationale / sources) its payloads must honour. Validation
is closed-world — fields the schema does not declare are violations —
and reports every violation found rather than stopping at the first.

Schema documents are JSON; agent instruction files are markdown with a
fixed header. Both have canonical serializers that round-trip.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any

from .errors import InstructionError, SchemaError

FIELD_NAME_RE = re.compile(r"^[a-z][a-z0-9_]*$")
COMPONENT_ID_RE = re.compile(r"^[a-z][a-z0-9_-]*$")
VERSION_RE = re.compile(r"^\d+\.\d+\.\d+$")


class ComponentKind(str, Enum):
    ARTIFACT = "artifact"
    COMPOSER = "composer"


class BlockKind(str, Enum):
    """The interface pattern a component renders as when surfaced."""

    PERMISSION_GATE = "permission_gate"
    RATIONALE_DISPLAY = "rationale_display"
    RECOVERABLE_CHANGE = "recoverable_change"
    CO_EDIT_PROPOSAL = "co_edit_proposal"
    TRACE_ENTRY = "trace_entry"
    GENERIC = "generic"


class FieldKind(str, Enum):
    TEXT = "text"
    INTEGER = "integer"
    REAL = "real"
    BOOLEAN = "boolean"
    ENUM = "enum"
    LIST = "list"
    RECORD = "record"


@dataclass(frozen=True)
class FieldType:
    """A field's type: a kind plus the parameters some kinds carry.

    enum carries its permitted values, list its element type, record its
    nested field specs. The unused parameters stay at their defaults.
    """

    kind: FieldKind
    enum_values: tuple[str, ...] = ()
    element: "FieldType | None" = None
    record_fields: tuple["FieldSpec", ...] = ()


@dataclass(frozen=True)
class Constraints:
    min_value: float | None = None
    max_value: float | None = None
    max_length: int | None = None
    max_count: int | None = None

    def is_empty(self) -> bool:
        return all(
            v is None
            for v in (self.min_value, self.max_value, self.max_length, self.max_count)
        )


@dataclass(frozen=True)
class FieldSpec:
    name: str
    kind: FieldType
    required: bool = False
    constraints: Constraints = Constraints()


@dataclass(frozen=True)
class ClarityRequirements:
    requires_confidence: bool = False
    requires_rationale: bool = False
    requires_sources: bool = False


def _check_field_specs(specs: tuple[FieldSpec, ...], where: str) -> None:
    seen: set[str] = set()
    for spec in specs:
        label = f"{where}{spec.name}"
        if not FIELD_NAME_RE.match(spec.name):
            raise SchemaError(f"invalid field name {spec.name!r} at {label}")
        if spec.name in seen:
            raise SchemaError(f"duplicate field name {spec.name!r} at {label}")
        seen.add(spec.name)
        _check_field_type(spec.kind, label)
        _check_constraints(spec, label)


def _check_field_type(ftype: FieldType, label: str) -> None:
    if ftype.kind is FieldKind.ENUM:
        if not ftype.enum_values:
            raise SchemaError(f"enum at {label} declares no values")
        if len(set(ftype.enum_values)) != len(ftype.enum_values):
            raise SchemaError(f"enum at {label} has duplicate values")
        if not all(isinstance(v, str) for v in ftype.enum_values):
            raise SchemaError(f"enum values at {label} must be text")
    elif ftype.enum_values:
        raise SchemaError(f"{label}: only enum fields carry values")
    if ftype.kind is FieldKind.LIST:
        if ftype.element is None:
            raise SchemaError(f"list at {label} declares no element type")
        _check_field_type(ftype.element, f"{label}[]")
    elif ftype.element is not None:
        raise SchemaError(f"{label}: only list fields carry an element type")
    if ftype.kind is FieldKind.RECORD:
        if not ftype.record_fields:
            raise SchemaError(f"record at {label} declares no fields")
        _check_field_specs(ftype.record_fields, f"{label}.")
    elif ftype.record_fields:
        raise SchemaError(f"{label}: only record fields carry nested fields")


def _check_constraints(spec: FieldSpec, label: str) -> None:
    c = spec.constraints
    kind = spec.kind.kind
    numeric = kind in (FieldKind.INTEGER, FieldKind.REAL)
    if (c.min_value is not None or c.max_value is not None) and not numeric:
        raise SchemaError(f"{label}: min/max apply to integer and real fields only")
    if c.min_value is not None and c.max_value is not None and c.min_value > c.max_value:
        raise SchemaError(f"{label}: min exceeds max")
    if c.max_length is not None:
        if kind is not FieldKind.TEXT:
            raise SchemaError(f"{label}: max_length applies to text fields only")
        if c.max_length < 1:
            raise SchemaError(f"{label}: max_length must be at least 1")
    if c.max_count is not None:
        if kind is not FieldKind.LIST:
            raise SchemaError(f"{label}: max_count applies to list fields only")
        if c.max_count < 1:
            raise SchemaError(f"{label}: max_count must be at least 1")


@dataclass(frozen=True)
class ComponentSchema:
    """The validated contract one component version exposes to agents."""

    component_id: str
    version: str
    kind: ComponentKind
    block_kind: BlockKind
    fields: tuple[FieldSpec, ...]
    clarity: ClarityRequirements = ClarityRequirements()

    def __post_init__(self) -> None:
        if not COMPONENT_ID_RE.match(self.component_id):
            raise SchemaError(f"invalid component_id {self.component_id!r}")
        if not VERSION_RE.match(self.version):
            raise SchemaError(f"invalid version {self.version!r}; expected X.Y.Z")
        _check_field_specs(self.fields, f"{self.component_id}.")
        self._check_clarity_fields()

    def _check_clarity_fields(self) -> None:
        by_name = {spec.name: spec for spec in self.fields}
        if self.clarity.requires_confidence:
            spec = by_name.get("confidence")
            ok = (
                spec is not None
                and spec.kind.kind is FieldKind.REAL
                and spec.constraints.min_value == 0
                and spec.constraints.max_value == 1
            )
            if not ok:
                raise SchemaError(
                    "requires_confidence needs a real field 'confidence' constrained to [0, 1]"
                )
        if self.clarity.requires_rationale:
            spec = by_name.get("rationale")
            if spec is None or spec.kind.kind is not FieldKind.TEXT or not spec.required:
                raise SchemaError(
                    "requires_rationale needs a required text field 'rationale'"
                )
        if self.clarity.requires_sources:
            spec = by_name.get("sources")
            ok = (
                spec is not None
                and spec.kind.kind is FieldKind.LIST
                and spec.kind.element is not None
                and spec.kind.element.kind is FieldKind.TEXT
            )
            if not ok:
                raise SchemaError(
                    "requires_sources needs a list-of-text field 'sources'"
                )

    def field_named(self, name: str) -> FieldSpec | None:
        for spec in self.fields:
            if spec.name == name:
                return spec
        return None


@dataclass(frozen=True)
class ToolCallPayload:
    """One agent tool call targeting a component."""

    component_id: str
    schema_version: str
    values: dict[str, Any]
    agent_id: str
    correlation_id: str = ""

    def with_values(self, values: dict[str, Any], agent_id: str | None = None) -> "ToolCallPayload":
        return replace(
            self, values=values, agent_id=self.agent_id if agent_id is None else agent_id
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "component_id": self.component_id,
            "schema_version": self.schema_version,
            "values": self.values,
            "agent_id": self.agent_id,
            "correlation_id": self.correlation_id,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ToolCallPayload":
        try:
            values = data["values"]
            if not isinstance(values, dict):
                raise SchemaError("payload values must be an object")
            return cls(
                component_id=str(data["component_id"]),
                schema_version=str(data["schema_version"]),
                values=values,
                agent_id=str(data["agent_id"]),
                correlation_id=str(data.get("correlation_id", "")),
            )
        except KeyError as exc:
            raise SchemaError(f"payload missing key {exc.args[0]!r}") from None


class ViolationKind(str, Enum):
    UNKNOWN_FIELD = "unknown_field"
    MISSING_REQUIRED = "missing_required"
    TYPE_MISMATCH = "type_mismatch"
    CONSTRAINT_VIOLATION = "constraint_violation"
    CLARITY_VIOLATION = "clarity_violation"


@dataclass(frozen=True)
class Violation:
    path: str
    kind: ViolationKind
    message: str

    def to_dict(self) -> dict[str, str]:
        return {"path": self.path, "kind": self.kind.value, "message": self.message}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def merged(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.violations + other.violations)

    def to_dict(self) -> dict[str, Any]:
        return {
            "valid": self.valid,
            "violations": [v.to_dict() for v in self.violations],
        }


def validate_payload(schema: ComponentSchema, payload: ToolCallPayload) -> ValidationReport:
    """Structurally validate a payload against a schema.

    Reports every violation found; never stops at the first. The caller
    must already have matched the payload to this schema — a
    component_id or version mismatch is a programming error here, not a
    report entry.
    """
    if payload.component_id != schema.component_id:
        raise ValueError(
            f"payload targets {payload.component_id!r}, schema is {schema.component_id!r}"
        )
    if payload.schema_version != schema.version:
        raise ValueError(
            f"payload pins version {payload.schema_version!r}, schema is {schema.version!r}"
        )
    violations: list[Violation] = []
    _validate_record(schema.fields, payload.values, "", violations)
    return ValidationReport(tuple(violations))


def _join(prefix: str, name: str) -> str:
    return f"{prefix}.{name}" if prefix else name


def _validate_record(
    specs: tuple[FieldSpec, ...],
    values: dict[str, Any],
    prefix: str,
    out: list[Violation],
) -> None:
    declared = {spec.name for spec in specs}
    for name in values:
        if name not in declared:
            out.append(
                Violation(
                    _join(prefix, str(name)),
                    ViolationKind.UNKNOWN_FIELD,
                    "field is not declared by the schema",
                )
            )
    for spec in specs:
        path = _join(prefix, spec.name)
        if spec.name not in values:
            if spec.required:
                out.append(
                    Violation(path, ViolationKind.MISSING_REQUIRED, "required field is missing")
                )
            continue
        _validate_value(spec.kind, spec.constraints, values[spec.name], path, out)


def _validate_value(
    ftype: FieldType,
    constraints: Constraints,
    value: Any,
    path: str,
    out: list[Violation],
) -> None:
    kind = ftype.kind
    if kind is FieldKind.TEXT:
        if not isinstance(value, str):
            out.append(_mismatch(path, "text", value))
            return
        if constraints.max_length is not None and len(value) > constraints.max_length:
            out.append(
                Violation(
                    path,
                    ViolationKind.CONSTRAINT_VIOLATION,
                    f"length {len(value)} exceeds max_length {constraints.max_length}",
                )
            )
    elif kind is FieldKind.INTEGER:
        if isinstance(value, bool) or not isinstance(value, int):
            out.append(_mismatch(path, "integer", value))
            return
        _check_range(constraints, value, path, out)
    elif kind is FieldKind.REAL:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            out.append(_mismatch(path, "real", value))
            return
        _check_range(constraints, value, path, out)
    elif kind is FieldKind.BOOLEAN:
        if not isinstance(value, bool):
            out.append(_mismatch(path, "boolean", value))
    elif kind is FieldKind.ENUM:
        if not isinstance(value, str):
            out.append(_mismatch(path, "enum", value))
            return
        if value not in ftype.enum_values:
            permitted = ", ".join(ftype.enum_values)
            out.append(
                Violation(
                    path,
                    ViolationKind.CONSTRAINT_VIOLATION,
                    f"value {value!r} is not one of: {permitted}",
                )
            )
    elif kind is FieldKind.LIST:
        if not isinstance(value, list):
            out.append(_mismatch(path, "list", value))
            return
        if constraints.max_count is not None and len(value) > constraints.max_count:
            out.append(
                Violation(
                    path,
                    ViolationKind.CONSTRAINT_VIOLATION,
                    f"count {len(value)} exceeds max_count {constraints.max_count}",
                )
            )
        assert ftype.element is not None
        for i, item in enumerate(value):
            _validate_value(ftype.element, Constraints(), item, f"{path}[{i}]", out)
    elif kind is FieldKind.RECORD:
        if not isinstance(value, dict):
            out.append(_mismatch(path, "record", value))
            return
        _validate_record(ftype.record_fields, value, path, out)


def _mismatch(path: str, expected: str, value: Any) -> Violation:
    return Violation(
        path,
        ViolationKind.TYPE_MISMATCH,
        f"expected {expected}, got {type(value).__name__}",
    )


def _check_range(constraints: Constraints, value: float, path: str, out: list[Violation]) -> None:
    if constraints.min_value is not None and value < constraints.min_value:
        out.append(
            Violation(
                path,
                ViolationKind.CONSTRAINT_VIOLATION,
                f"value {value} is below min {constraints.min_value}",
            )
        )
    if constraints.max_value is not None and value > constraints.max_value:
        out.append(
            Violation(
                path,
                ViolationKind.CONSTRAINT_VIOLATION,
                f"value {value} is above max {constraints.max_value}",
            )
        )


def enforce_clarity(schema: ComponentSchema, payload: ToolCallPayload) -> ValidationReport:
    """Check the clarity requirements a structurally valid payload must meet.

    A required clarity value that is absent, out of range, blank, or an
    empty list is a clarity_violation. Runs after validate_payload, so
    type errors here only arise for payloads that skipped it.
    """
    out: list[Violation] = []
    values = payload.values
    c = schema.clarity
    if c.requires_confidence:
        v = values.get("confidence")
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            out.append(_clarity("confidence", "a confidence value in [0, 1] is required"))
        elif not 0 <= v <= 1:
            out.append(_clarity("confidence", f"confidence {v} is outside [0, 1]"))
    if c.requires_rationale:
        v = values.get("rationale")
        if not isinstance(v, str) or not v.strip():
            out.append(_clarity("rationale", "a non-empty rationale is required"))
    if c.requires_sources:
        v = values.get("sources")
        if not isinstance(v, list) or not v:
            out.append(_clarity("sources", "at least one source is required"))
    return ValidationReport(tuple(out))


def _clarity(path: str, message: str) -> Violation:
    return Violation(path, ViolationKind.CLARITY_VIOLATION, message)


# --- schema document serialization ------------------------------------------

_TOP_KEYS = {"component_id", "version", "kind", "block_kind", "fields", "clarity_requirements"}
_FIELD_KEYS = {"name", "kind", "required", "constraints", "values", "element", "fields"}
_CONSTRAINT_KEYS = {"min", "max", "max_length", "max_count"}
_CLARITY_KEYS = {"requires_confidence", "requires_rationale", "requires_sources"}


def parse_schema(source: str) -> ComponentSchema:
    """Parse a JSON schema document; syntax errors carry line/column."""
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return schema_from_dict(data)


def schema_from_dict(data: Any) -> ComponentSchema:
    if not isinstance(data, dict):
        raise SchemaError("schema document must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise SchemaError(f"unknown schema keys: {', '.join(sorted(unknown))}")
    for key in ("component_id", "version", "kind", "block_kind", "fields"):
        if key not in data:
            raise SchemaError(f"schema document missing {key!r}")
    try:
        kind = ComponentKind(data["kind"])
    except ValueError:
        raise SchemaError(f"unknown component kind {data['kind']!r}") from None
    try:
        block_kind = BlockKind(data["block_kind"])
    except ValueError:
        raise SchemaError(f"unknown block kind {data['block_kind']!r}") from None
    clarity_data = data.get("clarity_requirements", {})
    if not isinstance(clarity_data, dict) or set(clarity_data) - _CLARITY_KEYS:
        raise SchemaError("malformed clarity_requirements")
    clarity = ClarityRequirements(
        requires_confidence=bool(clarity_data.get("requires_confidence", False)),
        requires_rationale=bool(clarity_data.get("requires_rationale", False)),
        requires_sources=bool(clarity_data.get("requires_sources", False)),
    )
    if not isinstance(data["fields"], list):
        raise SchemaError("fields must be an array")
    fields = tuple(_field_from_dict(f) for f in data["fields"])
    return ComponentSchema(
        component_id=str(data["component_id"]),
        version=str(data["version"]),
        kind=kind,
        block_kind=block_kind,
        fields=fields,
        clarity=clarity,
    )


def _field_from_dict(data: Any) -> FieldSpec:
    if not isinstance(data, dict):
        raise SchemaError("field entry must be an object")
    unknown = set(data) - _FIELD_KEYS
    if unknown:
        raise SchemaError(f"unknown field keys: {', '.join(sorted(unknown))}")
    if "name" not in data or "kind" not in data:
        raise SchemaError("field entry needs 'name' and 'kind'")
    name = str(data["name"])
    ftype = _type_from_parts(data["kind"], data.get("values"), data.get("element"), data.get("fields"), name)
    constraints = _constraints_from_dict(data.get("constraints"), name)
    return FieldSpec(
        name=name,
        kind=ftype,
        required=bool(data.get("required", False)),
        constraints=constraints,
    )


def _type_from_parts(kind_raw: Any, values: Any, element: Any, fields: Any, where: str) -> FieldType:
    try:
        kind = FieldKind(kind_raw)
    except (ValueError, TypeError):
        raise SchemaError(f"unknown field kind {kind_raw!r} at {where}") from None
    if kind is FieldKind.ENUM:
        if not isinstance(values, list):
            raise SchemaError(f"enum field {where} needs a 'values' array")
        return FieldType(kind, enum_values=tuple(str(v) for v in values))
    if values is not None:
        raise SchemaError(f"{where}: 'values' applies to enum fields only")
    if kind is FieldKind.LIST:
        if element is None:
            raise SchemaError(f"list field {where} needs an 'element' type")
        return FieldType(kind, element=_element_from_dict(element, where))
    if element is not None:
        raise SchemaError(f"{where}: 'element' applies to list fields only")
    if kind is FieldKind.RECORD:
        if not isinstance(fields, list):
            raise SchemaError(f"record field {where} needs a 'fields' array")
        return FieldType(kind, record_fields=tuple(_field_from_dict(f) for f in fields))
    if fields is not None:
        raise SchemaError(f"{where}: 'fields' applies to record fields only")
    return FieldType(kind)


def _element_from_dict(data: Any, where: str) -> FieldType:
    # An element type is either a bare kind name or an object carrying
    # the parameterized form, e.g. {"kind": "enum", "values": [...]}.
    if isinstance(data, str):
        return _type_from_parts(data, None, None, None, f"{where}[]")
    if isinstance(data, dict):
        unknown = set(data) - {"kind", "values", "element", "fields"}
        if unknown:
            raise SchemaError(f"unknown element keys at {where}: {', '.join(sorted(unknown))}")
        return _type_from_parts(
            data.get("kind"), data.get("values"), data.get("element"), data.get("fields"), f"{where}[]"
        )
    raise SchemaError(f"malformed element type at {where}")


def _constraints_from_dict(data: Any, where: str) -> Constraints:
    if data is None:
        return Constraints()
    if not isinstance(data, dict):
        raise SchemaError(f"malformed constraints at {where}")
    unknown = set(data) - _CONSTRAINT_KEYS
    if unknown:
        raise SchemaError(f"unknown constraint keys at {where}: {', '.join(sorted(unknown))}")
    def _num(key: str) -> float | None:
        v = data.get(key)
        if v is None:
            return None
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise SchemaError(f"constraint {key} at {where} must be a number")
        return v
    def _count(key: str) -> int | None:
        v = data.get(key)
        if v is None:
            return None
        if isinstance(v, bool) or not isinstance(v, int):
            raise SchemaError(f"constraint {key} at {where} must be an integer")
        return v
    return Constraints(
        min_value=_num("min"),
        max_value=_num("max"),
        max_length=_count("max_length"),
        max_count=_count("max_count"),
    )


def serialize_schema(schema: ComponentSchema) -> str:
    """Canonical JSON for a schema; parse_schema round-trips it."""
    return json.dumps(schema_to_dict(schema), indent=2) + "\n"


def schema_to_dict(schema: ComponentSchema) -> dict[str, Any]:
    return {
        "component_id": schema.component_id,
        "version": schema.version,
        "kind": schema.kind.value,
        "block_kind": schema.block_kind.value,
        "clarity_requirements": {
            "requires_confidence": schema.clarity.requires_confidence,
            "requires_rationale": schema.clarity.requires_rationale,
            "requires_sources": schema.clarity.requires_sources,
        },
        "fields": [_field_to_dict(f) for f in schema.fields],
    }


def _field_to_dict(spec: FieldSpec) -> dict[str, Any]:
    out: dict[str, Any] = {"name": spec.name, "kind": spec.kind.kind.value}
    if spec.kind.kind is FieldKind.ENUM:
        out["values"] = list(spec.kind.enum_values)
    elif spec.kind.kind is FieldKind.LIST:
        assert spec.kind.element is not None
        out["element"] = _element_to_dict(spec.kind.element)
    elif spec.kind.kind is FieldKind.RECORD:
        out["fields"] = [_field_to_dict(f) for f in spec.kind.record_fields]
    out["required"] = spec.required
    c = spec.constraints
    if not c.is_empty():
        constraints: dict[str, Any] = {}
        if c.min_value is not None:
            constraints["min"] = c.min_value
        if c.max_value is not None:
            constraints["max"] = c.max_value
        if c.max_length is not None:
            constraints["max_length"] = c.max_length
        if c.max_count is not None:
            constraints["max_count"] = c.max_count
        out["constraints"] = constraints
    return out


def _element_to_dict(ftype: FieldType) -> Any:
    if ftype.kind is FieldKind.ENUM:
        return {"kind": "enum", "values": list(ftype.enum_values)}
    if ftype.kind is FieldKind.LIST:
        assert ftype.element is not None
        return {"kind": "list", "element": _element_to_dict(ftype.element)}
    if ftype.kind is FieldKind.RECORD:
        return {"kind": "record", "fields": [_field_to_dict(f) for f in ftype.record_fields]}
    return ftype.kind.value


# --- agent instruction files --------------------------------------------------

@dataclass(frozen=True)
class AgentInstruction:
    """Natural-language guidance paired with a component's schema."""

    component_id: str
    guidance: str = ""
    output_constraints: tuple[str, ...] = ()
    examples: tuple[str, ...] = ()


_HEADER_RE = re.compile(r"^# component:\s*(\S+)\s*$")


def parse_instruction_file(source: str) -> AgentInstruction:
    """Parse an instruction file.

    Layout: a ``# component: <id>`` header line, optional ``## constraints``
    and ``## examples`` sections whose ``- `` bullets become entries, and
    all other prose collected verbatim as guidance.
    """
    lines = source.splitlines()
    if not lines:
        raise InstructionError("instruction file is empty")
    m = _HEADER_RE.match(lines[0])
    if not m:
        raise InstructionError("first line must be '# component: <component_id>'")
    component_id = m.group(1)
    if not COMPONENT_ID_RE.match(component_id):
        raise InstructionError(f"invalid component_id {component_id!r} in header")
    guidance_lines: list[str] = []
    constraints: list[str] = []
    examples: list[str] = []
    sink: list[str] | None = None  # None while collecting guidance
    for line in lines[1:]:
        stripped = line.strip()
        if stripped == "## constraints":
            sink = constraints
            continue
        if stripped == "## examples":
            sink = examples
            continue
        if sink is not None:
            if stripped.startswith("- "):
                sink.append(stripped[2:].strip())
                continue
            if not stripped:
                continue
            sink = None  # prose after a section returns to guidance
        guidance_lines.append(line)
    guidance = "\n".join(guidance_lines).strip()
    return AgentInstruction(
        component_id=component_id,
        guidance=guidance,
        output_constraints=tuple(constraints),
        examples=tuple(examples),
    )


def serialize_instruction(instruction: AgentInstruction) -> str:
    """Canonical instruction-file text; parse_instruction_file round-trips it."""
    parts = [f"# component: {instruction.component_id}"]
    if instruction.guidance:
        parts.append("")
        parts.append(instruction.guidance)
    if instruction.output_constraints:
        parts.append("")
        parts.append("## constraints")
        parts.extend(f"- {c}" for c in instruction.output_constraints)
    if instruction.examples:
        parts.append("")
        parts.append("## examples")
        parts.extend(f"- {e}" for e in instruction.examples)
    return "\n".join(parts) + "\n"
