/** Shared fixtures: minimal wire objects with per-test overrides. */

import type {
  ServerMessage,
  Snapshot,
  SurfacedBlock,
  TraceEntry,
} from "../src/protocol.js";

export function makeBlock(overrides: Partial<SurfacedBlock> = {}): SurfacedBlock {
  return {
    block_id: "blk-0001",
    block_kind: "rationale_display",
    status: "proposed",
    component_id: "confidence-card",
    schema_version: "1.0.0",
    agent_id: "agent:planner",
    correlation_id: null,
    values: {},
    decision: { verdict: "allow", reason: "" },
    covers: [],
    linked_action: null,
    report: null,
    ...overrides,
  };
}

export function makeEntry(seqNo: number, overrides: Partial<TraceEntry> = {}): TraceEntry {
  return {
    seq_no: seqNo,
    timestamp: 1_700_000_000 + seqNo,
    actor: "system",
    summary: `entry ${seqNo}`,
    caused_by: null,
    chain_hash: "f".repeat(64),
    ...overrides,
  };
}

export function makeSnapshot(overrides: Partial<Snapshot> = {}): Snapshot {
  return {
    session_id: "ses-0001",
    scenario: "travel",
    mode: "inception",
    domain_state: { "itinerary.hotel": "unbooked" },
    scope: {
      allowed_block_kinds: ["recoverable_change", "rationale_display"],
      modifiable_targets: ["itinerary.hotel"],
      forbidden_targets: [],
      approval_required_targets: ["itinerary.hotel"],
      autonomy_level: "act_autonomously",
    },
    initiative: { current_holder: "human", pending_agent_requests: 0, handoffs: [] },
    blocks: [],
    trace: [],
    can_undo: false,
    can_redo: false,
    compliance: { mode: "inception", compliant: true, missing: [], satisfied: [] },
    ...overrides,
  };
}

type Body<T> = T extends unknown ? Omit<T, "session_id" | "seq"> : never;

/** Wrap a message body in the streamed envelope. */
export function wire(
  seq: number,
  body: Body<ServerMessage>,
  sessionId = "ses-0001",
): ServerMessage {
  return { session_id: sessionId, seq, ...body } as ServerMessage;
}
