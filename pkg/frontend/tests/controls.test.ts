import { describe, expect, it } from "vitest";

import { bulkControls, controlsFor } from "../src/controls.js";
import { makeBlock } from "./helpers.js";

describe("controlsFor", () => {
  it("offers approve, deny and adjust on any proposed block", () => {
    expect(controlsFor(makeBlock())).toEqual(["approve", "deny", "adjust"]);
    const gated = makeBlock({
      block_kind: "recoverable_change",
      decision: { verdict: "require_approval", reason: "target 'itinerary.hotel' requires approval" },
    });
    expect(controlsFor(gated)).toEqual(["approve", "deny", "adjust"]);
  });

  it("offers undo only on applied recoverable changes", () => {
    expect(controlsFor(makeBlock({ status: "applied", block_kind: "recoverable_change" }))).toEqual(["undo"]);
    expect(controlsFor(makeBlock({ status: "applied" }))).toEqual([]);
  });

  it("offers redo only on reverted recoverable changes", () => {
    expect(controlsFor(makeBlock({ status: "reverted", block_kind: "recoverable_change" }))).toEqual(["redo"]);
    expect(controlsFor(makeBlock({ status: "reverted", block_kind: "trace_entry" }))).toEqual([]);
  });

  it("settled blocks have no controls", () => {
    expect(controlsFor(makeBlock({ status: "approved" }))).toEqual([]);
    const denied = makeBlock({
      status: "denied",
      decision: { verdict: "deny", reason: "target 'vault.key' is forbidden" },
    });
    expect(controlsFor(denied)).toEqual([]);
  });

  it("a block with a verb in flight shows nothing", () => {
    expect(controlsFor(makeBlock(), true)).toEqual([]);
    expect(controlsFor(makeBlock({ status: "applied", block_kind: "recoverable_change" }), true)).toEqual([]);
  });
});

describe("bulkControls", () => {
  it("follows the undo and redo cursors", () => {
    expect(bulkControls(false, false)).toEqual({
      undo: false,
      redo: false,
      revert_all: false,
      approve_all: false,
    });
    expect(bulkControls(true, false)).toEqual({
      undo: true,
      redo: false,
      revert_all: true,
      approve_all: true,
    });
    expect(bulkControls(false, true)).toEqual({
      undo: false,
      redo: true,
      revert_all: false,
      approve_all: false,
    });
  });
});
