"""Newline-delimited JSON wire protocol between the session server and clients.

One JSON object per line. Unknown fields are ignored; a bad line yields an
error reply and the connection stays up.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class ProtocolError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


@dataclass(frozen=True)
class UtteranceMessage:
    text: str


@dataclass(frozen=True)
class InterruptMessage:
    pass


@dataclass(frozen=True)
class ExportMessage:
    format: str


@dataclass(frozen=True)
class ResponseMessage:
    kind: str
    literal: str
    verbalized: str


@dataclass(frozen=True)
class ReadingMessage:
    index: int
    total: int
    literal: str
    verbalized: str


@dataclass(frozen=True)
class DocumentMessage:
    format: str
    body: str


@dataclass(frozen=True)
class ErrorMessage:
    code: str
    message: str


Message = (
    UtteranceMessage | InterruptMessage | ExportMessage | ResponseMessage
    | ReadingMessage | DocumentMessage | ErrorMessage
)

_TYPES = {
    UtteranceMessage: "utterance",
    InterruptMessage: "interrupt",
    ExportMessage: "export",
    ResponseMessage: "response",
    ReadingMessage: "reading",
    DocumentMessage: "document",
    ErrorMessage: "error",
}


def encode(message: Message) -> str:
    """Message to one JSON line (no trailing newline)."""
    payload: dict = {"type": _TYPES[type(message)]}
    payload.update(message.__dict__)
    return json.dumps(payload, ensure_ascii=False)


def _field(data: dict, name: str, kind: type) -> object:
    value = data.get(name)
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise ProtocolError("bad_message", f"missing or invalid field {name!r}")
    return value


def decode(line: str) -> Message:
    """One JSON line to a message. Raises ProtocolError for anything else."""
    try:
        data = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ProtocolError("bad_json", f"not valid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ProtocolError("bad_message", "expected a JSON object")
    msg_type = data.get("type")
    if msg_type == "utterance":
        return UtteranceMessage(text=_field(data, "text", str))
    if msg_type == "interrupt":
        return InterruptMessage()
    if msg_type == "export":
        return ExportMessage(format=_field(data, "format", str))
    if msg_type == "response":
        return ResponseMessage(kind=_field(data, "kind", str),
                               literal=_field(data, "literal", str),
                               verbalized=_field(data, "verbalized", str))
    if msg_type == "reading":
        return ReadingMessage(index=_field(data, "index", int),
                              total=_field(data, "total", int),
                              literal=_field(data, "literal", str),
                              verbalized=_field(data, "verbalized", str))
    if msg_type == "document":
        return DocumentMessage(format=_field(data, "format", str),
                               body=_field(data, "body", str))
    if msg_type == "error":
        return ErrorMessage(code=_field(data, "code", str),
                            message=_field(data, "message", str))
    raise ProtocolError("unknown_type", f"unknown message type {msg_type!r}")
