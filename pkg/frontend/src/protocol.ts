/**
 * Typed wire messages: newline-delimited JSON, one object per line.
 * Mirrors the session server's protocol exactly; unknown fields are ignored.
 */

export type ClientMessage =
  | { type: "utterance"; text: string }
  | { type: "interrupt" }
  | { type: "export"; format: "markdown" | "plain" };

export interface ResponseMessage {
  type: "response";
  kind: string;
  literal: string;
  verbalized: string;
}

export interface ReadingMessage {
  type: "reading";
  index: number;
  total: number;
  literal: string;
  verbalized: string;
}

export interface DocumentMessage {
  type: "document";
  format: string;
  body: string;
}

export interface ErrorMessage {
  type: "error";
  code: string;
  message: string;
}

export type ServerMessage = ResponseMessage | ReadingMessage | DocumentMessage | ErrorMessage;

export class ProtocolError extends Error {}

export function encodeLine(message: ClientMessage): string {
  return JSON.stringify(message);
}

function str(value: unknown, field: string): string {
  if (typeof value !== "string") throw new ProtocolError(`bad field ${field}`);
  return value;
}

function num(value: unknown, field: string): number {
  if (typeof value !== "number") throw new ProtocolError(`bad field ${field}`);
  return value;
}

export function decodeLine(line: string): ServerMessage {
  let data: unknown;
  try {
    data = JSON.parse(line);
  } catch {
    throw new ProtocolError("not valid JSON");
  }
  if (typeof data !== "object" || data === null || Array.isArray(data)) {
    throw new ProtocolError("expected a JSON object");
  }
  const obj = data as Record<string, unknown>;
  switch (obj.type) {
    case "response":
      return {
        type: "response",
        kind: str(obj.kind, "kind"),
        literal: str(obj.literal, "literal"),
        verbalized: str(obj.verbalized, "verbalized"),
      };
    case "reading":
      return {
        type: "reading",
        index: num(obj.index, "index"),
        total: num(obj.total, "total"),
        literal: str(obj.literal, "literal"),
        verbalized: str(obj.verbalized, "verbalized"),
      };
    case "document":
      return { type: "document", format: str(obj.format, "format"), body: str(obj.body, "body") };
    case "error":
      return { type: "error", code: str(obj.code, "code"), message: str(obj.message, "message") };
    default:
      throw new ProtocolError(`unknown message type ${String(obj.type)}`);
  }
}
