/**
 * HTTP client for the session wire protocol.
 *
 * connect() opens the NDJSON stream and pumps every line into the store;
 * it resolves once the first state_snapshot lands, so callers start with
 * a complete picture. Verbs are optimistic: the target block is marked
 * pending until the server echoes a block_updated or snapshot.
 */

import { parseServerMessage, toolCallMessage, verbMessage, type Ack } from "./protocol.js";
import type { SessionStore } from "./store.js";

export class WireError extends Error {}

export class SessionClient {
  private controller = new AbortController();
  private pumping: Promise<void> | null = null;

  constructor(
    private readonly baseUrl: string,
    readonly store: SessionStore,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  /** Open the stream; resolves after the first snapshot has been applied. */
  async connect(): Promise<void> {
    const response = await this.fetchImpl(`${this.baseUrl}/stream`, {
      method: "POST",
      body: JSON.stringify({ kind: "subscribe" }),
      signal: this.controller.signal,
    });
    if (!response.ok || response.body === null) {
      throw new WireError(`stream refused: HTTP ${response.status}`);
    }
    this.store.setConnection("live");
    const ready = this.waitFor(() => this.store.scenario !== "");
    this.pumping = this.pump(response.body).finally(() => {
      this.store.setConnection("closed");
    });
    this.pumping.catch(() => {}); // surfaced via connection state
    await ready;
  }

  disconnect(): void {
    this.controller.abort();
  }

  /** Resolves when the store satisfies the predicate (checked on every change). */
  waitFor(predicate: () => boolean, timeoutMs = 15000): Promise<void> {
    if (predicate()) {
      return Promise.resolve();
    }
    return new Promise((resolve, reject) => {
      const timer = setTimeout(() => {
        stop();
        reject(new WireError("timed out waiting for server state"));
      }, timeoutMs);
      const stop = this.store.onChange(() => {
        if (predicate()) {
          clearTimeout(timer);
          stop();
          resolve();
        }
      });
    });
  }

  async sendVerb(verb: Record<string, unknown>): Promise<Ack> {
    const target = typeof verb.target_block === "string" ? verb.target_block : null;
    if (target !== null) {
      this.store.markPending(target); // optimistic until the server echoes
    }
    try {
      const ack = await this.post(verbMessage(this.sessionId(), verb));
      if (ack.error !== undefined && target !== null) {
        this.store.clearPending(target); // rejected; nothing will echo
      }
      return ack;
    } catch (error) {
      if (target !== null) {
        this.store.clearPending(target);
      }
      throw error;
    }
  }

  async sendToolCall(payload: Record<string, unknown>): Promise<Ack> {
    return this.post(toolCallMessage(this.sessionId(), payload));
  }

  /** Send a verb, then wait until everything it caused has streamed back. */
  async sendVerbAndSettle(verb: Record<string, unknown>): Promise<Ack> {
    const ack = await this.sendVerb(verb);
    await this.waitFor(() => this.store.processedSeq >= ack.seq);
    return ack;
  }

  private sessionId(): string {
    const id = this.store.sessionId;
    if (id === null) {
      throw new WireError("not connected: no session id yet");
    }
    return id;
  }

  private async post(body: string): Promise<Ack> {
    const response = await this.fetchImpl(`${this.baseUrl}/message`, {
      method: "POST",
      body,
    });
    const data = (await response.json()) as Ack | { kind: string; error: string };
    if (data.kind !== "ack") {
      throw new WireError(`server rejected the message: ${"error" in data ? data.error : response.status}`);
    }
    return data as Ack;
  }

  private async pump(body: ReadableStream<Uint8Array>): Promise<void> {
    const reader = body.getReader();
    const decoder = new TextDecoder();
    let remainder = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) {
        break;
      }
      remainder += decoder.decode(value, { stream: true });
      const pieces = remainder.split("\n");
      remainder = pieces.pop() ?? "";
      for (const piece of pieces) {
        if (piece.trim() !== "") {
          this.store.apply(parseServerMessage(piece));
        }
      }
    }
  }
}
