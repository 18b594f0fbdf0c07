/**
 * DOM layer: accessible live log, text entry with push-to-talk, spoken
 * readback, document view, and the full-viewport tap target that fires
 * the interrupt while reading is underway.
 *
 * Speech recognition and synthesis are progressive enhancements; the text
 * path is the contract. All state shown here originates from the server.
 */

import { ClientSession, ConnectionStatus, LogEntry, TransportFactory } from "./session.js";

export interface Ui {
  session: ClientSession;
  root: HTMLElement;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document, tag: K, attrs: Record<string, string> = {}, text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

export function buildUi(root: HTMLElement, factory: TransportFactory): Ui {
  const doc = root.ownerDocument;

  const status = el(doc, "p", { id: "status", role: "status", "aria-live": "polite" },
    "disconnected");

  const logHeading = el(doc, "h2", { id: "log-heading" }, "Conversation");
  const log = el(doc, "ol", {
    id: "log", role: "log", "aria-live": "polite", "aria-labelledby": "log-heading",
  });

  const form = el(doc, "form", { id: "utterance-form" });
  const label = el(doc, "label", { for: "utterance" }, "Say or type a command");
  const input = el(doc, "input", {
    id: "utterance", name: "utterance", type: "text", autocomplete: "off",
  });
  const send = el(doc, "button", { type: "submit" }, "Send");
  const talk = el(doc, "button", {
    type: "button", id: "talk",
    "aria-label": "Hold to talk, release to send",
  }, "Hold to talk");
  const speakToggleLabel = el(doc, "label", { for: "speak-toggle" }, "Speak responses aloud");
  const speakToggle = el(doc, "input", { id: "speak-toggle", type: "checkbox" });
  form.append(label, input, send, talk, speakToggleLabel, speakToggle);

  const docHeading = el(doc, "h2", { id: "document-heading" }, "Document");
  const docView = el(doc, "pre", {
    id: "document", tabindex: "0", "aria-labelledby": "document-heading",
  }, "");
  const exportButton = el(doc, "button", { type: "button", id: "export" },
    "Refresh document view");

  const tap = el(doc, "button", {
    type: "button", id: "tap-target", "aria-label": "Stop reading", hidden: "",
  }, "Reading aloud. Tap anywhere to stop.");
  tap.style.cssText =
    "position:fixed;inset:0;width:100vw;height:100vh;opacity:0.85;z-index:10;";

  root.append(status, logHeading, log, form, exportButton, docHeading, docView, tap);

  const session = new ClientSession(factory, {
    onStatus: (state: ConnectionStatus, detail: string) => {
      status.textContent = detail;
      status.dataset.state = state;
    },
    onLog: (entry: LogEntry) => {
      const item = el(doc, "li", { "data-kind": entry.kind });
      const prefix = entry.who === "user" ? "U: " : "S: ";
      const progress = entry.index !== undefined ? ` (${entry.index}/${entry.total})` : "";
      item.textContent = `${prefix}${entry.text}${progress}`;
      if (entry.kind === "error" || entry.kind === "local-error") {
        item.setAttribute("role", "alert");
      }
      log.appendChild(item);
      if (entry.who === "system" && speakToggle instanceof HTMLInputElement
          && speakToggle.checked) {
        speak(entry.verbalized ?? entry.text);
      }
      if (entry.kind === "reading") {
        const finished = entry.index !== undefined && entry.index === entry.total;
        tap.toggleAttribute("hidden", finished);
      } else if (entry.who === "system") {
        tap.toggleAttribute("hidden", true);
      }
    },
    onDocument: (_format: string, body: string) => {
      docView.textContent = body;
    },
  });

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    if (input instanceof HTMLInputElement && session.submitUtterance(input.value)) {
      input.value = "";
    }
  });

  exportButton.addEventListener("click", () => session.requestExport("markdown"));

  tap.addEventListener("click", () => {
    session.interrupt();
    tap.toggleAttribute("hidden", true);
  });

  wirePushToTalk(doc, talk, input as HTMLInputElement, session, status);

  function speak(text: string): void {
    const synth = (doc.defaultView as any)?.speechSynthesis;
    if (!synth) {
      status.textContent = "Speech synthesis unavailable; showing text only";
      return;
    }
    try {
      const Utterance = (doc.defaultView as any).SpeechSynthesisUtterance;
      synth.speak(new Utterance(text));
    } catch {
      // visual-only fallback already on screen
    }
  }

  session.connect();
  return { session, root };
}

function wirePushToTalk(
  doc: Document, talk: HTMLButtonElement, input: HTMLInputElement,
  session: ClientSession, status: HTMLElement,
): void {
  const win = doc.defaultView as any;
  const Recognition = win?.SpeechRecognition ?? win?.webkitSpeechRecognition;
  if (!Recognition) {
    talk.toggleAttribute("hidden", true);
    return;
  }
  let active: any = null;
  const start = () => {
    if (active) return;
    try {
      active = new Recognition();
    } catch {
      talk.toggleAttribute("hidden", true);
      return;
    }
    active.lang = "en-US";
    active.interimResults = true;
    active.onresult = (event: any) => {
      const transcript = Array.from(event.results)
        .map((r: any) => r[0]?.transcript ?? "")
        .join(" ")
        .trim();
      input.value = transcript; // visible for confirmation, sent on release
    };
    active.onerror = (event: any) => {
      status.textContent = event?.error === "not-allowed"
        ? "Microphone permission denied; type instead"
        : "Speech recognition error; type instead";
      active = null;
    };
    active.start();
  };
  const release = () => {
    if (!active) return;
    active.stop();
    active = null;
    // both input paths go through the same call, so the wire bytes match
    if (session.submitUtterance(input.value)) input.value = "";
  };
  talk.addEventListener("mousedown", start);
  talk.addEventListener("touchstart", start);
  talk.addEventListener("keydown", (e) => {
    if (e.key === " " || e.key === "Enter") start();
  });
  talk.addEventListener("mouseup", release);
  talk.addEventListener("touchend", release);
  talk.addEventListener("keyup", release);
}
