/**
 * Browser transport: the NDJSON line protocol carried over a WebSocket,
 * one protocol line per WebSocket text message (see bridge.mjs).
 */

import { Transport, TransportEvents, TransportFactory } from "./session.js";

export function webSocketTransport(url: string): TransportFactory {
  return (events: TransportEvents): Transport => {
    const socket = new WebSocket(url);
    socket.addEventListener("open", () => events.onOpen());
    socket.addEventListener("message", (event) => {
      const data = typeof event.data === "string" ? event.data : "";
      for (const line of data.split("\n")) {
        if (line.trim()) events.onLine(line);
      }
    });
    socket.addEventListener("close", () => events.onClose());
    socket.addEventListener("error", () => {
      // the paired close event drives reconnection
    });
    return {
      send: (line) => socket.send(line),
      close: () => socket.close(),
    };
  };
}
