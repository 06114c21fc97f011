import { describe, expect, it } from "vitest";

import { blockHtml, blockView, complianceBanner, escapeHtml, timelineRows } from "../src/view.js";
import { makeBlock, makeEntry } from "./helpers.js";

describe("blockView", () => {
  it("renders a permission gate as a request with its justification", () => {
    const view = blockView(
      makeBlock({
        block_kind: "permission_gate",
        component_id: "scope-gate",
        decision: { verdict: "require_approval", reason: "target 'itinerary.hotel' requires approval" },
        values: {
          target: "itinerary.hotel",
          requested_action: "modify",
          justification: "the room block expires",
        },
      }),
    );
    expect(view.lines).toEqual([
      "wants to modify itinerary.hotel",
      "because: the room block expires",
    ]);
    expect(view.controls).toEqual(["approve", "deny", "adjust"]);
    expect(view.reason).toBe("target 'itinerary.hotel' requires approval");
    expect(view.title).toBe("scope-gate · agent:planner");
  });

  it("renders a rationale display with confidence, rationale and sources", () => {
    const view = blockView(
      makeBlock({
        values: {
          statement: "the museum is closed on mondays",
          confidence: 0.82,
          rationale: "the city site says so",
          sources: ["city-site", "guidebook"],
        },
      }),
    );
    expect(view.lines).toEqual([
      "confidence: 82%",
      "the museum is closed on mondays",
      "rationale: the city site says so",
      "sources:",
      "  - city-site",
      "  - guidebook",
    ]);
  });

  it("renders a recoverable change with its delta and linked action", () => {
    const view = blockView(
      makeBlock({
        block_kind: "recoverable_change",
        component_id: "state-change",
        status: "applied",
        linked_action: "act-0001",
        values: {
          target: "itinerary.hotel",
          description: "Book the hotel",
          new_value: "Budget Inn ($120/night x5)",
        },
      }),
    );
    expect(view.lines).toEqual([
      "Book the hotel",
      "itinerary.hotel → Budget Inn ($120/night x5)",
      "action act-0001",
    ]);
    expect(view.controls).toEqual(["undo"]);
  });

  it("opens a proposed co-edit proposal's fields for adjustment", () => {
    const block = makeBlock({
      block_kind: "co_edit_proposal",
      component_id: "proposal-composer",
      values: { topic: "dinner", proposal: "tapas", question: "does that work?" },
    });
    expect(blockView(block).lines).toEqual([
      "topic: dinner",
      "proposal: tapas",
      "question: does that work?",
    ]);
    expect(blockView(block).editableFields).toEqual(["topic", "proposal", "question"]);
    expect(blockView({ ...block, status: "approved" }).editableFields).toEqual([]);
  });

  it("renders a trace entry with its outcome and related entry", () => {
    const view = blockView(
      makeBlock({
        block_kind: "trace_entry",
        component_id: "trace-note",
        values: { summary: "hotel booked", outcome: "completed", related_seq: 4 },
      }),
    );
    expect(view.lines).toEqual(["hotel booked", "outcome: completed", "relates to entry 4"]);
  });

  it("renders generic blocks as key-value lines", () => {
    const view = blockView(
      makeBlock({
        block_kind: "generic",
        component_id: "status-banner",
        values: { message: "heads up", severity: "info" },
      }),
    );
    expect(view.lines).toEqual(["message: heads up", "severity: info"]);
  });

  it("keeps the denial reason visible on denied blocks", () => {
    const view = blockView(
      makeBlock({
        status: "denied",
        decision: { verdict: "deny", reason: "target 'vault.key' is forbidden" },
      }),
    );
    expect(view.controls).toEqual([]);
    expect(view.reason).toBe("target 'vault.key' is forbidden");
  });

  it("lists the validation report's violations", () => {
    const view = blockView(
      makeBlock({
        report: {
          valid: false,
          violations: [
            { path: "new_value", kind: "type_mismatch", message: "expected text, got integer" },
          ],
        },
      }),
    );
    expect(view.violations).toEqual(["new_value: expected text, got integer"]);
  });

  it("pending views show the pending status and no controls", () => {
    const view = blockView(makeBlock(), true);
    expect(view.status).toBe("pending");
    expect(view.controls).toEqual([]);
  });
});

describe("timelineRows", () => {
  it("indents each entry under its cause", () => {
    const rows = timelineRows([
      makeEntry(0),
      makeEntry(1, { caused_by: 0 }),
      makeEntry(2, { caused_by: 1 }),
      makeEntry(3, { caused_by: 0 }),
      makeEntry(4),
    ]);
    expect(rows.map((r) => r.depth)).toEqual([0, 1, 2, 1, 0]);
    expect(rows.map((r) => r.seqNo)).toEqual([0, 1, 2, 3, 4]);
  });

  it("formats timestamps as ISO instants", () => {
    const rows = timelineRows([makeEntry(0, { timestamp: 0 })]);
    expect(rows[0]?.time).toBe("1970-01-01T00:00:00.000Z");
  });
});

describe("complianceBanner", () => {
  it("names the unmet requirements", () => {
    expect(
      complianceBanner({
        mode: "execution",
        missing: ["progress", "rollback_controls"],
        satisfied: ["decision_logs"],
      }),
    ).toBe("mode execution still needs: progress, rollback_controls");
  });
});

describe("html rendering", () => {
  it("escapes markup wherever values appear", () => {
    expect(escapeHtml('<b>&"')).toBe("&lt;b&gt;&amp;&quot;");
    const html = blockHtml(
      blockView(
        makeBlock({
          values: { statement: "<script>alert(1)</script>", confidence: 0.5 },
        }),
      ),
    );
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });

  it("renders controls as data-verb buttons", () => {
    const html = blockHtml(blockView(makeBlock()));
    expect(html).toContain('<button data-verb="approve" data-block="blk-0001">approve</button>');
    expect(html).toContain('<button data-verb="deny" data-block="blk-0001">deny</button>');
  });

  it("renders the adjust editor for editable blocks", () => {
    const html = blockHtml(
      blockView(
        makeBlock({
          block_kind: "co_edit_proposal",
          component_id: "proposal-composer",
          values: { topic: "t", proposal: "p", question: "q" },
        }),
      ),
    );
    expect(html).toContain('<form class="adjust" data-block="blk-0001">');
    expect(html).toContain('<input name="topic">');
    expect(html).toContain(">submit adjustment</button>");
  });
});
