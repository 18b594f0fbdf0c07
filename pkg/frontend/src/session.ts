/**
 * Client session core: transport-agnostic, server-authoritative.
 *
 * The session never mutates document state locally; the document body and
 * every log entry come from server messages. The transcript log is strictly
 * append-only and survives reconnects.
 */

import {
  ClientMessage,
  ProtocolError,
  ServerMessage,
  decodeLine,
  encodeLine,
} from "./protocol.js";

export interface TransportEvents {
  onOpen(): void;
  onLine(line: string): void;
  onClose(): void;
}

export interface Transport {
  send(line: string): void;
  close(): void;
}

export type TransportFactory = (events: TransportEvents) => Transport;

export type ConnectionStatus = "connecting" | "connected" | "disconnected" | "reconnecting";

export interface LogEntry {
  who: "user" | "system";
  kind: string; // "utterance" | response kinds | "reading" | "error" | "local-error"
  text: string;
  verbalized?: string;
  index?: number;
  total?: number;
}

export interface SessionHooks {
  onStatus?(status: ConnectionStatus, detail: string): void;
  onLog?(entry: LogEntry): void;
  onMessage?(message: ServerMessage): void;
  onDocument?(format: string, body: string): void;
}

export interface SessionOptions {
  /** initial reconnect delay; doubles per attempt up to 16x */
  backoffMs?: number;
  maxBackoffMs?: number;
}

export class ClientSession {
  private readonly factory: TransportFactory;
  private readonly hooks: SessionHooks;
  private readonly backoffMs: number;
  private readonly maxBackoffMs: number;
  private transport: Transport | null = null;
  private attempts = 0;
  private disposed = false;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;
  private readonly entries: LogEntry[] = [];

  status: ConnectionStatus = "disconnected";
  documentBody: string | null = null;
  documentFormat: string | null = null;

  constructor(factory: TransportFactory, hooks: SessionHooks = {}, options: SessionOptions = {}) {
    this.factory = factory;
    this.hooks = hooks;
    this.backoffMs = options.backoffMs ?? 500;
    this.maxBackoffMs = options.maxBackoffMs ?? 8000;
  }

  /** Read-only view of the transcript log. */
  get log(): readonly LogEntry[] {
    return this.entries;
  }

  connect(): void {
    if (this.disposed || this.transport !== null) return;
    this.setStatus(this.attempts === 0 ? "connecting" : "reconnecting",
      this.attempts === 0 ? "connecting" : `reconnect attempt ${this.attempts}`);
    this.transport = this.factory({
      onOpen: () => {
        this.attempts = 0;
        this.setStatus("connected", "connected");
      },
      onLine: (line) => this.handleLine(line),
      onClose: () => {
        this.transport = null;
        if (this.disposed) return;
        this.setStatus("disconnected", "connection lost");
        this.scheduleReconnect();
      },
    });
  }

  dispose(): void {
    this.disposed = true;
    if (this.reconnectTimer !== null) clearTimeout(this.reconnectTimer);
    this.transport?.close();
    this.transport = null;
  }

  /**
   * Send one utterance. Typed text and speech transcripts both land here,
   * so the two input paths produce identical wire traffic. Blank input
   * sends nothing.
   */
  submitUtterance(text: string): boolean {
    const trimmed = text.trim();
    if (!trimmed) return false;
    if (!this.send({ type: "utterance", text: trimmed })) return false;
    this.append({ who: "user", kind: "utterance", text: trimmed });
    return true;
  }

  /** The single-tap gesture. */
  interrupt(): boolean {
    return this.send({ type: "interrupt" });
  }

  requestExport(format: "markdown" | "plain"): boolean {
    return this.send({ type: "export", format });
  }

  private send(message: ClientMessage): boolean {
    if (this.status !== "connected" || this.transport === null) {
      this.append({ who: "system", kind: "local-error", text: "Not connected" });
      return false;
    }
    this.transport.send(encodeLine(message));
    return true;
  }

  private handleLine(line: string): void {
    let message: ServerMessage;
    try {
      message = decodeLine(line);
    } catch (err) {
      const detail = err instanceof ProtocolError ? err.message : String(err);
      this.append({ who: "system", kind: "local-error", text: `Bad server line: ${detail}` });
      return;
    }
    switch (message.type) {
      case "response":
        this.append({ who: "system", kind: message.kind, text: message.literal,
          verbalized: message.verbalized });
        break;
      case "reading":
        this.append({ who: "system", kind: "reading", text: message.literal,
          verbalized: message.verbalized, index: message.index, total: message.total });
        break;
      case "document":
        this.documentBody = message.body;
        this.documentFormat = message.format;
        this.hooks.onDocument?.(message.format, message.body);
        break;
      case "error":
        this.append({ who: "system", kind: "error", text: message.message });
        break;
    }
    this.hooks.onMessage?.(message);
  }

  private append(entry: LogEntry): void {
    this.entries.push(entry);
    this.hooks.onLog?.(entry);
  }

  private setStatus(status: ConnectionStatus, detail: string): void {
    this.status = status;
    this.hooks.onStatus?.(status, detail);
  }

  private scheduleReconnect(): void {
    this.attempts += 1;
    const delay = Math.min(this.backoffMs * 2 ** (this.attempts - 1), this.maxBackoffMs);
    this.reconnectTimer = setTimeout(() => {
      this.reconnectTimer = null;
      this.connect();
    }, delay);
  }
}
