/**
 * Client-side session state, derived entirely from server messages.
 *
 * The store never invents state: every field traces back to a streamed
 * message, and a state_snapshot rebuilds the whole view, so reconnecting
 * clients converge no matter what they missed. Messages are applied in
 * sequence-number order; early arrivals wait in a buffer until the gap
 * closes, duplicates and other sessions' messages are dropped.
 */

import type {
  BlockStatus,
  ComplianceState,
  InitiativeState,
  ScopeState,
  ServerMessage,
  Snapshot,
  SurfacedBlock,
  TraceEntry,
} from "./protocol.js";

export type Connection = "connecting" | "live" | "closed";

export interface ComplianceWarning {
  mode: string;
  missing: string[];
  satisfied: string[];
}

const STATUS_ORDER: readonly BlockStatus[] = [
  "proposed",
  "applied",
  "approved",
  "reverted",
  "denied",
];

export class SessionStore {
  connection: Connection = "connecting";
  sessionId: string | null = null;
  scenario = "";
  mode = "inception";
  domainState: Record<string, string> = {};
  scope: ScopeState | null = null;
  initiative: InitiativeState | null = null;
  compliance: ComplianceState | null = null;
  canUndo = false;
  canRedo = false;
  blocks: SurfacedBlock[] = [];
  trace: TraceEntry[] = [];
  warning: ComplianceWarning | null = null;
  /** Blocks optimistically held pending between send_verb and the server echo. */
  readonly pendingBlocks = new Set<string>();

  private nextSeq = 1;
  private buffered = new Map<number, ServerMessage>();
  private listeners: Array<() => void> = [];

  /** seq of the newest message applied so far (0 before the first). */
  get processedSeq(): number {
    return this.nextSeq - 1;
  }

  onChange(listener: () => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  setConnection(connection: Connection): void {
    this.connection = connection;
    this.emit();
  }

  apply(message: ServerMessage): void {
    if (this.sessionId === null) {
      this.sessionId = message.session_id;
    } else if (message.session_id !== this.sessionId) {
      return; // someone else's session
    }
    if (message.seq < this.nextSeq) {
      return; // duplicate or replay
    }
    if (message.seq > this.nextSeq) {
      this.buffered.set(message.seq, message); // arrived early; hold for the gap
      return;
    }
    this.applyNow(message);
    this.nextSeq += 1;
    let waiting = this.buffered.get(this.nextSeq);
    while (waiting !== undefined) {
      this.buffered.delete(this.nextSeq);
      this.applyNow(waiting);
      this.nextSeq += 1;
      waiting = this.buffered.get(this.nextSeq);
    }
    this.emit();
  }

  markPending(blockId: string): void {
    this.pendingBlocks.add(blockId);
    this.emit();
  }

  clearPending(blockId: string): void {
    this.pendingBlocks.delete(blockId);
    this.emit();
  }

  isPending(blockId: string): boolean {
    return this.pendingBlocks.has(blockId);
  }

  /** The status to render: the server's word, unless a verb is in flight. */
  displayStatus(block: SurfacedBlock): BlockStatus | "pending" {
    return this.pendingBlocks.has(block.block_id) ? "pending" : block.status;
  }

  block(blockId: string): SurfacedBlock | undefined {
    return this.blocks.find((b) => b.block_id === blockId);
  }

  /** Blocks grouped by status, original order kept inside each group. */
  grouped(): Array<{ status: BlockStatus; blocks: SurfacedBlock[] }> {
    return STATUS_ORDER.map((status) => ({
      status,
      blocks: this.blocks.filter((b) => b.status === status),
    })).filter((group) => group.blocks.length > 0);
  }

  private applyNow(message: ServerMessage): void {
    switch (message.kind) {
      case "state_snapshot":
        this.rebuild(message.snapshot);
        break;
      case "block_proposed":
        this.upsert(message.block);
        break;
      case "block_updated":
        this.upsert(message.block);
        this.pendingBlocks.delete(message.block.block_id);
        break;
      case "trace_appended":
        this.trace.push(message.entry);
        break;
      case "mode_changed":
        this.mode = message.mode;
        break;
      case "compliance_warning":
        this.warning = {
          mode: message.mode,
          missing: message.missing,
          satisfied: message.satisfied,
        };
        break;
    }
  }

  private rebuild(snapshot: Snapshot): void {
    this.scenario = snapshot.scenario;
    this.mode = snapshot.mode;
    this.domainState = { ...snapshot.domain_state };
    this.scope = snapshot.scope;
    this.initiative = snapshot.initiative;
    this.compliance = snapshot.compliance;
    this.canUndo = snapshot.can_undo;
    this.canRedo = snapshot.can_redo;
    this.blocks = snapshot.blocks.slice();
    this.trace = snapshot.trace.slice();
    this.pendingBlocks.clear(); // the snapshot is the whole truth
  }

  private upsert(block: SurfacedBlock): void {
    const index = this.blocks.findIndex((b) => b.block_id === block.block_id);
    if (index >= 0) {
      this.blocks[index] = block; // supersede, never duplicate
    } else {
      this.blocks.push(block);
    }
  }

  private emit(): void {
    for (const listener of this.listeners) {
      listener();
    }
  }
}
