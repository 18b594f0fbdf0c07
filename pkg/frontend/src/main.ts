/** Browser entry point: server URL comes from the ?server= query parameter. */

import { buildUi } from "./ui.js";
import { webSocketTransport } from "./wstransport.js";

const params = new URLSearchParams(window.location.search);
const url = params.get("server") ?? "ws://127.0.0.1:8600";
const root = document.getElementById("app");
if (root) {
  buildUi(root, webSocketTransport(url));
}
