/**
 * Browser entry point: one store, one client, one render pass per change.
 *
 * The page is rebuilt from the store on every change — the store is the
 * single source of truth, so there is no DOM state to drift. Button clicks
 * and form submits are delegated from the root, which survives re-renders.
 */

import { SessionClient } from "./client.js";
import { bulkControls } from "./controls.js";
import { SessionStore } from "./store.js";
import { blockHtml, blockView, complianceBanner, escapeHtml, timelineRows } from "./view.js";

const store = new SessionStore();
const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("server") ?? "";
const client = new SessionClient(baseUrl, store);

const app = document.getElementById("app");
if (app === null) {
  throw new Error("missing #app container");
}
const root: HTMLElement = app;

/** Blocks whose adjust editor is open; local UI state, not session state. */
const adjusting = new Set<string>();
let notice: string | null = null;

function render(): void {
  root.innerHTML = page();
}

function page(): string {
  const bulk = bulkControls(store.canUndo, store.canRedo);
  const bulkButtons = (Object.entries(bulk) as Array<[string, boolean]>)
    .map(
      ([verb, enabled]) =>
        `<button data-bulk="${verb}"${enabled ? "" : " disabled"}>${verb.replace("_", " ")}</button>`,
    )
    .join("");
  const stateRows = Object.entries(store.domainState)
    .map(
      ([key, value]) =>
        `<tr><td>${escapeHtml(key)}</td><td>${escapeHtml(value)}</td></tr>`,
    )
    .join("");
  const groups = store
    .grouped()
    .map((group) => {
      const cards = group.blocks
        .map((block) => {
          const view = blockView(block, store.isPending(block.block_id));
          if (adjusting.has(block.block_id) && block.status === "proposed") {
            view.editableFields = Object.keys(block.values);
          }
          return blockHtml(view);
        })
        .join("");
      return `<section class="group"><h2>${group.status}</h2>${cards}</section>`;
    })
    .join("");
  const timeline = timelineRows(store.trace)
    .map(
      (row) =>
        `<li style="margin-left:${row.depth}rem"><code>[${row.seqNo}]</code> ` +
        `${escapeHtml(row.actor)}: ${escapeHtml(row.summary)}</li>`,
    )
    .join("");
  return (
    `<header class="top">` +
    `<h1>${escapeHtml(store.scenario || "connecting…")}</h1>` +
    `<span class="mode">${escapeHtml(store.mode)}</span>` +
    `<span class="conn ${store.connection}">${store.connection}</span>` +
    (store.sessionId ? `<span class="session">${escapeHtml(store.sessionId)}</span>` : "") +
    `</header>` +
    (notice ? `<div class="notice">${escapeHtml(notice)}</div>` : "") +
    (store.warning
      ? `<div class="banner">${escapeHtml(complianceBanner(store.warning))}</div>`
      : "") +
    `<nav class="bulk">${bulkButtons}</nav>` +
    `<table class="state"><tbody>${stateRows}</tbody></table>` +
    `<main class="blocks">${groups}</main>` +
    `<ol class="timeline">${timeline}</ol>`
  );
}

async function send(verb: Record<string, unknown>): Promise<void> {
  try {
    const ack = await client.sendVerb(verb);
    notice = ack.error ?? null;
  } catch (error) {
    notice = error instanceof Error ? error.message : String(error);
  }
  render();
}

root.addEventListener("click", (event) => {
  const target = event.target;
  if (!(target instanceof HTMLButtonElement)) {
    return;
  }
  const bulk = target.dataset.bulk;
  if (bulk !== undefined) {
    void send({ kind: bulk });
    return;
  }
  const control = target.dataset.verb;
  const blockId = target.dataset.block;
  if (control === undefined || blockId === undefined) {
    return;
  }
  if (control === "adjust") {
    if (adjusting.has(blockId)) {
      adjusting.delete(blockId);
    } else {
      adjusting.add(blockId);
    }
    render();
    return;
  }
  const block = store.block(blockId);
  if (control === "undo" || control === "redo") {
    // Undo targets the linked action; the block comes along for the trace.
    void send({ kind: control, action_id: block?.linked_action, target_block: blockId });
    return;
  }
  void send({ kind: control, target_block: blockId });
});

root.addEventListener("submit", (event) => {
  const form = event.target;
  if (!(form instanceof HTMLFormElement) || !form.classList.contains("adjust")) {
    return;
  }
  event.preventDefault();
  const blockId = form.dataset.block;
  if (blockId === undefined) {
    return;
  }
  const edits: Record<string, unknown> = {};
  for (const element of Array.from(form.elements)) {
    if (!(element instanceof HTMLInputElement) || element.value.trim() === "") {
      continue; // blank inputs leave the field unchanged
    }
    try {
      edits[element.name] = JSON.parse(element.value);
    } catch {
      edits[element.name] = element.value; // bare text is a string edit
    }
  }
  adjusting.delete(blockId);
  void send({ kind: "adjust", target_block: blockId, field_edits: edits });
});

store.onChange(render);
render();
client.connect().catch((error: unknown) => {
  notice = error instanceof Error ? error.message : String(error);
  render();
});
