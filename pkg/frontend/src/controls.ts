/**
 * Which verbs a block offers, mandated by its status and decision.
 *
 * The server is the authority: a control appears only when the
 * corresponding verb would be accepted for the block in its current
 * state. Denied and approved blocks are settled — no controls. A block
 * with a verb in flight shows none until the server echoes.
 */

import type { SurfacedBlock } from "./protocol.js";

export type Control = "approve" | "deny" | "adjust" | "undo" | "redo";

export function controlsFor(block: SurfacedBlock, pending = false): Control[] {
  if (pending) {
    return [];
  }
  switch (block.status) {
    case "proposed":
      // approval gates and plain displays alike: decide or refine
      return ["approve", "deny", "adjust"];
    case "applied":
      // a live change can be taken back until it is approved
      return block.block_kind === "recoverable_change" ? ["undo"] : [];
    case "reverted":
      return block.block_kind === "recoverable_change" ? ["redo"] : [];
    case "approved":
    case "denied":
      return [];
  }
}

export interface BulkControls {
  undo: boolean;
  redo: boolean;
  revert_all: boolean;
  approve_all: boolean;
}

export function bulkControls(canUndo: boolean, canRedo: boolean): BulkControls {
  return {
    undo: canUndo,
    redo: canRedo,
    revert_all: canUndo,
    approve_all: canUndo, // something undoable means something approvable
  };
}
