/**
 * View models and HTML rendering for surfaced blocks.
 *
 * Each block kind maps to one interface pattern: a permission gate shows
 * the requested scope with approve/deny, a rationale display pairs the
 * confidence value with its inline rationale and sources, a recoverable
 * change shows its plain-language description with undo/revert, a co-edit
 * proposal opens its fields for adjustment, and a trace entry becomes a
 * timeline row linked to its cause.
 */

import { controlsFor, type Control } from "./controls.js";
import type { SurfacedBlock, TraceEntry } from "./protocol.js";
import type { ComplianceWarning } from "./store.js";

export interface BlockView {
  blockId: string;
  kind: SurfacedBlock["block_kind"];
  title: string;
  status: string;
  lines: string[];
  /** Field names opened for editing (co-edit proposals only). */
  editableFields: string[];
  controls: Control[];
  reason: string | null;
  violations: string[];
}

function text(value: unknown): string {
  if (value === null || value === undefined) {
    return "";
  }
  return typeof value === "string" ? value : JSON.stringify(value);
}

function listLines(label: string, value: unknown): string[] {
  if (!Array.isArray(value) || value.length === 0) {
    return [];
  }
  return [`${label}:`, ...value.map((item) => `  - ${text(item)}`)];
}

function kindLines(block: SurfacedBlock): string[] {
  const v = block.values;
  switch (block.block_kind) {
    case "permission_gate":
      return [
        `wants to ${text(v.requested_action)} ${text(v.target)}`,
        ...(v.justification ? [`because: ${text(v.justification)}`] : []),
      ];
    case "rationale_display": {
      const lines: string[] = [];
      if (typeof v.confidence === "number") {
        lines.push(`confidence: ${Math.round(v.confidence * 100)}%`);
      }
      if (v.goal) lines.push(`goal: ${text(v.goal)}`);
      if (v.statement) lines.push(text(v.statement));
      if (v.rationale) lines.push(`rationale: ${text(v.rationale)}`);
      lines.push(...listLines("steps", v.steps));
      lines.push(...listLines("assumptions", v.assumptions));
      lines.push(...listLines("sources", v.sources));
      return lines;
    }
    case "recoverable_change":
      return [
        text(v.description),
        `${text(v.target)} → ${text(v.new_value)}`,
        ...(block.linked_action ? [`action ${block.linked_action}`] : []),
      ];
    case "co_edit_proposal":
      return [
        `topic: ${text(v.topic)}`,
        `proposal: ${text(v.proposal)}`,
        `question: ${text(v.question)}`,
      ];
    case "trace_entry":
      return [
        text(v.summary),
        `outcome: ${text(v.outcome)}`,
        ...(v.related_seq !== undefined ? [`relates to entry ${text(v.related_seq)}`] : []),
      ];
    case "generic":
      return Object.entries(v).map(([key, value]) => `${key}: ${text(value)}`);
  }
}

export function blockView(block: SurfacedBlock, pending = false): BlockView {
  const settledByDenial = block.status === "denied";
  return {
    blockId: block.block_id,
    kind: block.block_kind,
    title: `${block.component_id} · ${block.agent_id}`,
    status: pending ? "pending" : block.status,
    lines: kindLines(block),
    editableFields:
      block.block_kind === "co_edit_proposal" && block.status === "proposed"
        ? Object.keys(block.values)
        : [],
    controls: controlsFor(block, pending),
    reason:
      settledByDenial || block.decision.verdict !== "allow" ? block.decision.reason : null,
    violations: (block.report?.violations ?? []).map(
      (violation) => `${violation.path}: ${violation.message}`,
    ),
  };
}

export interface TimelineRow {
  seqNo: number;
  time: string;
  actor: string;
  summary: string;
  causedBy: number | null;
  depth: number;
}

/** Rows with causal depth, so the timeline can indent effect under cause. */
export function timelineRows(entries: TraceEntry[]): TimelineRow[] {
  const depths = new Map<number, number>();
  return entries.map((entry) => {
    const depth =
      entry.caused_by === null ? 0 : (depths.get(entry.caused_by) ?? 0) + 1;
    depths.set(entry.seq_no, depth);
    return {
      seqNo: entry.seq_no,
      time: new Date(entry.timestamp * 1000).toISOString(),
      actor: entry.actor,
      summary: entry.summary,
      causedBy: entry.caused_by,
      depth,
    };
  });
}

export function complianceBanner(warning: ComplianceWarning): string {
  return `mode ${warning.mode} still needs: ${warning.missing.join(", ")}`;
}

export function escapeHtml(value: string): string {
  return value
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function blockHtml(view: BlockView): string {
  const lines = view.lines
    .map((line) => `<div class="line">${escapeHtml(line)}</div>`)
    .join("");
  const controls = view.controls
    .map(
      (control) =>
        `<button data-verb="${control}" data-block="${escapeHtml(view.blockId)}">${control}</button>`,
    )
    .join("");
  const reason = view.reason
    ? `<div class="reason">${escapeHtml(view.reason)}</div>`
    : "";
  const violations = view.violations.length
    ? `<ul class="violations">${view.violations
        .map((violation) => `<li>${escapeHtml(violation)}</li>`)
        .join("")}</ul>`
    : "";
  const editor = view.editableFields.length
    ? `<form class="adjust" data-block="${escapeHtml(view.blockId)}">${view.editableFields
        .map(
          (field) =>
            `<label>${escapeHtml(field)}<input name="${escapeHtml(field)}"></label>`,
        )
        .join("")}<button type="submit">submit adjustment</button></form>`
    : "";
  return (
    `<article class="block ${view.kind} status-${view.status}" data-block="${escapeHtml(view.blockId)}">` +
    `<header><span class="title">${escapeHtml(view.title)}</span>` +
    `<span class="status">${escapeHtml(view.status)}</span></header>` +
    lines +
    reason +
    violations +
    editor +
    `<footer>${controls}</footer></article>`
  );
}
