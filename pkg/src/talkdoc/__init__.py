"""Conversational document editing engine.

Turns spoken-utterance transcripts into structured document edits and
spoken-style readback. The engine is fully deterministic: the same
transcript sequence always produces the same responses and document.
"""

__version__ = "0.1.0"

from talkdoc.controller import SessionState, SystemResponse, handle_utterance, new_session
from talkdoc.document import Document, export_markdown, export_plain

__all__ = [
    "Document",
    "SessionState",
    "SystemResponse",
    "export_markdown",
    "export_plain",
    "handle_utterance",
    "new_session",
]
