/**
 * Wire protocol types and guards.
 *
 * The server streams newline-delimited JSON on POST /stream and accepts
 * verbs and tool calls on POST /message. Every streamed message carries
 * the session id and a gap-free per-session sequence number; acks and
 * protocol errors come back as direct responses.
 */

export type Verdict = "allow" | "deny" | "require_approval";

export type BlockStatus = "proposed" | "applied" | "approved" | "denied" | "reverted";

export type BlockKind =
  | "permission_gate"
  | "rationale_display"
  | "recoverable_change"
  | "co_edit_proposal"
  | "trace_entry"
  | "generic";

export interface Decision {
  verdict: Verdict;
  reason: string;
}

export interface Violation {
  path: string;
  kind: string;
  message: string;
}

export interface ValidationReport {
  valid: boolean;
  violations: Violation[];
}

export interface SurfacedBlock {
  block_id: string;
  block_kind: BlockKind;
  status: BlockStatus;
  component_id: string;
  schema_version: string;
  agent_id: string;
  correlation_id: string | null;
  values: Record<string, unknown>;
  decision: Decision;
  covers: string[];
  linked_action: string | null;
  report: ValidationReport | null;
}

export interface TraceEntry {
  seq_no: number;
  timestamp: number;
  actor: string;
  summary: string;
  caused_by: number | null;
  chain_hash: string;
}

export interface ScopeState {
  allowed_block_kinds: string[];
  modifiable_targets: string[];
  forbidden_targets: string[];
  approval_required_targets: string[];
  autonomy_level: string;
}

export interface InitiativeState {
  current_holder: string;
  pending_agent_requests: number;
  handoffs: unknown[];
}

export interface ComplianceState {
  mode: string;
  compliant: boolean;
  missing: string[];
  satisfied: string[];
}

export interface Snapshot {
  session_id: string;
  scenario: string;
  mode: string;
  domain_state: Record<string, string>;
  scope: ScopeState;
  initiative: InitiativeState;
  blocks: SurfacedBlock[];
  trace: TraceEntry[];
  can_undo: boolean;
  can_redo: boolean;
  compliance: ComplianceState;
}

interface Envelope {
  session_id: string;
  seq: number;
}

export type ServerMessage = Envelope &
  (
    | { kind: "state_snapshot"; snapshot: Snapshot }
    | { kind: "block_proposed"; block: SurfacedBlock }
    | { kind: "block_updated"; block: SurfacedBlock }
    | { kind: "trace_appended"; entry: TraceEntry }
    | { kind: "mode_changed"; mode: string; cause: string }
    | { kind: "compliance_warning"; mode: string; missing: string[]; satisfied: string[] }
  );

export interface Ack {
  kind: "ack";
  session_id: string;
  seq: number;
  error?: string;
}

export interface ProtocolFailure {
  kind: "protocol_error";
  error: string;
}

export const SERVER_STREAM_KINDS = new Set([
  "state_snapshot",
  "block_proposed",
  "block_updated",
  "trace_appended",
  "mode_changed",
  "compliance_warning",
]);

export class ProtocolError extends Error {}

/** Parse and check one streamed line's envelope; bodies are trusted beyond it. */
export function parseServerMessage(line: string): ServerMessage {
  let data: unknown;
  try {
    data = JSON.parse(line);
  } catch {
    throw new ProtocolError(`unparseable stream line: ${line.slice(0, 80)}`);
  }
  if (typeof data !== "object" || data === null || Array.isArray(data)) {
    throw new ProtocolError("stream line is not an object");
  }
  const message = data as Record<string, unknown>;
  if (typeof message.kind !== "string" || !SERVER_STREAM_KINDS.has(message.kind)) {
    throw new ProtocolError(`unknown stream message kind ${JSON.stringify(message.kind)}`);
  }
  if (typeof message.session_id !== "string" || typeof message.seq !== "number") {
    throw new ProtocolError(`${message.kind} message lacks session_id/seq`);
  }
  return message as unknown as ServerMessage;
}

export function verbMessage(sessionId: string, verb: Record<string, unknown>): string {
  return JSON.stringify({ kind: "human_verb", session_id: sessionId, verb });
}

export function toolCallMessage(sessionId: string, payload: Record<string, unknown>): string {
  return JSON.stringify({ kind: "tool_call", session_id: sessionId, payload });
}
