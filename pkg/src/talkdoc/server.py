"""Line-protocol session server: one connection, one session.

A reader thread parses incoming lines; interrupt messages act on the
session immediately (they bypass the utterance queue), everything else is
handled strictly in order by a worker thread. Reading chunks are written
one at a time with an optional delay so a live interrupt can land between
units.
"""

from __future__ import annotations

import queue
import socket
import threading
import time

from talkdoc import protocol
from talkdoc.controller import (
    SessionState,
    handle_utterance,
    interrupt,
    new_session,
    pump_reading,
)
from talkdoc.document import export_markdown, export_plain

DEFAULT_PORT = 8571


class Server:
    def __init__(self, host: str = "127.0.0.1", port: int = DEFAULT_PORT,
                 chunk_delay: float = 0.0):
        self.host = host
        self.port = port
        self.chunk_delay = chunk_delay
        self._sock: socket.socket | None = None
        self._stopping = threading.Event()
        self._threads: list[threading.Thread] = []

    def start(self) -> tuple[str, int]:
        """Bind and start accepting in the background; returns (host, port)."""
        sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        sock.bind((self.host, self.port))
        sock.listen()
        self._sock = sock
        self.host, self.port = sock.getsockname()
        accept = threading.Thread(target=self._accept_loop, daemon=True)
        accept.start()
        self._threads.append(accept)
        return self.host, self.port

    def serve_forever(self) -> None:
        self.start()
        try:
            while not self._stopping.is_set():
                time.sleep(0.2)
        except KeyboardInterrupt:
            pass
        finally:
            self.stop()

    def stop(self) -> None:
        self._stopping.set()
        if self._sock is not None:
            try:
                self._sock.close()
            except OSError:
                pass

    def _accept_loop(self) -> None:
        assert self._sock is not None
        while not self._stopping.is_set():
            try:
                conn, _addr = self._sock.accept()
            except OSError:
                return
            handler = threading.Thread(target=self._handle_connection, args=(conn,),
                                       daemon=True)
            handler.start()
            self._threads.append(handler)

    def _handle_connection(self, conn: socket.socket) -> None:
        session = new_session()
        write_lock = threading.Lock()
        work: queue.Queue = queue.Queue()

        def send(message: protocol.Message) -> None:
            line = (protocol.encode(message) + "\n").encode("utf-8")
            with write_lock:
                conn.sendall(line)

        worker = threading.Thread(
            target=self._worker_loop, args=(session, work, send), daemon=True)
        worker.start()
        try:
            reader = conn.makefile("rb")
            for raw in reader:
                line = raw.decode("utf-8", errors="replace").rstrip("\r\n")
                try:
                    message = protocol.decode(line)
                except protocol.ProtocolError as exc:
                    try:
                        send(protocol.ErrorMessage(exc.code, exc.message))
                    except OSError:
                        break
                    continue
                if isinstance(message, protocol.InterruptMessage):
                    if not interrupt(session):
                        try:
                            send(protocol.ErrorMessage("no_reading", "nothing is being read"))
                        except OSError:
                            break
                elif isinstance(message, (protocol.UtteranceMessage, protocol.ExportMessage)):
                    work.put(message)
                else:
                    try:
                        send(protocol.ErrorMessage("unexpected_type",
                                                   "server-to-client message received"))
                    except OSError:
                        break
        except OSError:
            pass
        finally:
            work.put(None)
            worker.join(timeout=5)
            try:
                conn.close()
            except OSError:
                pass

    def _worker_loop(self, session: SessionState, work: queue.Queue, send) -> None:
        while True:
            message = work.get()
            if message is None:
                return
            try:
                if isinstance(message, protocol.UtteranceMessage):
                    responses = handle_utterance(session, message.text, drain=False)
                    for r in responses:
                        send(protocol.ResponseMessage(r.kind, r.literal, r.verbalized))
                    if session.pending_export is not None:
                        fmt, body = session.pending_export
                        session.pending_export = None
                        send(protocol.DocumentMessage(fmt, body))
                    while True:
                        chunk = pump_reading(session)
                        if chunk is None:
                            break
                        send(protocol.ReadingMessage(chunk.index, chunk.total,
                                                     chunk.literal, chunk.verbalized))
                        if self.chunk_delay > 0:
                            time.sleep(self.chunk_delay)
                else:
                    fmt = message.format
                    if fmt == "markdown":
                        body = export_markdown(session.editor.document)
                    elif fmt == "plain":
                        body = export_plain(session.editor.document)
                    else:
                        send(protocol.ErrorMessage("bad_format", f"unknown format {fmt!r}"))
                        continue
                    send(protocol.DocumentMessage(fmt, body))
            except OSError:
                return
            except Exception as exc:  # never let one bad turn kill the connection
                try:
                    send(protocol.ErrorMessage("internal", str(exc)))
                except OSError:
                    return


def serve(host: str = "127.0.0.1", port: int = DEFAULT_PORT,
          chunk_delay: float = 0.0) -> None:
    Server(host, port, chunk_delay).serve_forever()
