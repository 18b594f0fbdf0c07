"""The conversational state machine: two modes, readback, read-aloud control.

Every utterance yields exactly one confirmation, readback or error
response. Reading aloud is delivered as discrete chunk responses pulled
through pump_reading, so the io layer decides pacing and an interrupt
(the single-tap gesture) lands cleanly between units.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from talkdoc import editing
from talkdoc.document import (
    Block,
    BlockKind,
    Document,
    Span,
    block_position,
    export_markdown,
    export_plain,
    render_literal,
    segment_sentences,
)
from talkdoc.editing import EditorState, EditOutcome, Focus
from talkdoc.intents import (
    COMMAND,
    DICTATION,
    Intent,
    IntentKind,
    NluContext,
    PatternTable,
    parse,
)
from talkdoc.normalize import tokenize, verbalize_literal
from talkdoc.normalize import utterance as make_utterance

CONFIRMATION = "confirmation"
READBACK = "readback"
READING = "reading"
ERROR = "error"


@dataclass
class SystemResponse:
    kind: str
    literal: str
    verbalized: str
    index: int | None = None  # reading chunks: 1-based position
    total: int | None = None

    @classmethod
    def of(cls, kind: str, literal: str, index: int | None = None,
           total: int | None = None) -> "SystemResponse":
        return cls(kind, literal, verbalize_literal(literal), index, total)


@dataclass
class ReadingUnit:
    span: Span
    text: str


@dataclass
class ReadingSession:
    units: list[ReadingUnit]
    index: int = 0
    paused: bool = False
    scope: str = "document"  # document | paragraph | sentence | headings
    scope_block: int | None = None  # block id for paragraph/sentence scopes
    delivered: Span | None = None  # span of the last unit actually delivered


@dataclass
class SessionState:
    editor: EditorState = field(default_factory=EditorState)
    mode: str = COMMAND
    post_readback: bool = False
    reading: ReadingSession | None = None
    last_readback: tuple[Span, str] | None = None
    interrupt_pending: bool = False
    interrupt_after: int | None = None  # deliver n more units, then pause
    pending_export: tuple[str, str] | None = None  # (format, body) for the io layer

    @property
    def document(self) -> Document:
        return self.editor.document

    @property
    def focus(self) -> Focus:
        return self.editor.focus


def new_session() -> SessionState:
    return SessionState()


# --- response templates -------------------------------------------------------

ERR_NOT_RECOGNIZED = "Command not recognized"
ERR_NOTHING_THERE = "Nothing there"
ERR_NOTHING_TO_UNDO = "Nothing to undo"
ERR_NOTHING_TO_CONTINUE = "Nothing to continue"
ERR_NOTHING_TO_REPEAT = "Nothing to repeat"
ERR_NOTHING_TO_STOP = "Nothing to stop"
ERR_NOTHING_TO_READ = "Nothing to read"
ERR_DOCUMENT_EMPTY = "Document is empty"
ERR_NO_HEADINGS = "No headings"

MSG_NOTHING_CHANGED = "Nothing changed"


def _could_not_find(what: str | None) -> str:
    return f"Could not find {what}" if what else "Could not find it"


def _title_literal(block: Block) -> str:
    return f"Document title “{render_literal(block.tokens)}”"


def _heading_literal(block: Block) -> str:
    return f"Heading {block.level} «{render_literal(block.tokens)}»"


def _outline_unit_text(block: Block) -> str:
    if block.kind is BlockKind.HEADING:
        return f"Heading {block.level} {render_literal(block.tokens)}"
    return render_literal(block.tokens)


def _fail_response(outcome: EditOutcome) -> SystemResponse:
    if outcome.reason == editing.NOT_FOUND:
        return SystemResponse.of(ERROR, _could_not_find(outcome.label))
    if outcome.reason == editing.NOTHING_TO_UNDO:
        return SystemResponse.of(ERROR, ERR_NOTHING_TO_UNDO)
    return SystemResponse.of(ERROR, ERR_NOTHING_THERE)


def _set_last_readback(session: SessionState, span: Span, literal: str) -> None:
    """Record what was read and put the focus at its end (the readback rule)."""
    session.last_readback = (span, literal)
    idx = block_position(session.document, span.block)
    if idx is not None:
        session.editor.focus = Focus(idx, span.end)


def _enclosing_unit(doc: Document, span: Span) -> tuple[Span, str] | None:
    """The smallest sentence/heading unit covering a changed span, rendered."""
    idx = block_position(doc, span.block)
    if idx is None:
        return None
    block = doc.blocks[idx]
    if block.kind is BlockKind.TITLE:
        return Span(block.id, 0, len(block.tokens)), _title_literal(block)
    if block.kind is BlockKind.HEADING:
        return Span(block.id, 0, len(block.tokens)), _heading_literal(block)
    sentences = segment_sentences(block)
    chosen = None
    for s in sentences:
        if s.start <= span.start and span.end <= s.end:
            chosen = s
            break
    if chosen is None and span.start == span.end:
        for s in sentences:
            if s.end == span.start:
                chosen = s
                break
    if chosen is None and sentences:
        covering = [s for s in sentences if s.end > span.start and s.start < span.end]
        if covering:
            chosen = Span(block.id, covering[0].start, covering[-1].end)
        else:
            chosen = sentences[-1]
    if chosen is None:
        return None
    return chosen, render_literal(block.tokens[chosen.start:chosen.end])


def _content_readback(session: SessionState, outcome: EditOutcome) -> SystemResponse:
    """Re-read the smallest unit containing an edit, per the confirmation rule."""
    if outcome.affected is None:
        literal = f"Deleted {outcome.label}" if outcome.label else MSG_NOTHING_CHANGED
        return SystemResponse.of(READBACK, literal)
    unit = _enclosing_unit(session.document, outcome.affected)
    if unit is None:
        return SystemResponse.of(READBACK, MSG_NOTHING_CHANGED)
    span, literal = unit
    _set_last_readback(session, span, literal)
    return SystemResponse.of(READBACK, literal)


# --- reading sessions ---------------------------------------------------------

def _block_units(block: Block) -> list[ReadingUnit]:
    if not block.tokens:
        return []
    if block.kind in (BlockKind.TITLE, BlockKind.HEADING):
        return [ReadingUnit(Span(block.id, 0, len(block.tokens)), _outline_unit_text(block))]
    return [
        ReadingUnit(span, render_literal(block.tokens[span.start:span.end]))
        for span in segment_sentences(block)
    ]


def _build_units(doc: Document, scope: str, scope_block: int | None) -> list[ReadingUnit]:
    if scope == "headings":
        return [
            unit for block in doc.blocks
            if block.kind in (BlockKind.TITLE, BlockKind.HEADING)
            for unit in _block_units(block)
        ]
    if scope == "document":
        return [unit for block in doc.blocks for unit in _block_units(block)]
    idx = block_position(doc, scope_block) if scope_block is not None else None
    if idx is None:
        return []
    return _block_units(doc.blocks[idx])


def pump_reading(session: SessionState) -> SystemResponse | None:
    """Deliver the next reading unit, or None when paused or done.

    A pending interrupt takes effect here, between units. Each delivered
    unit becomes the last readback and pulls the focus to its end.
    """
    reading = session.reading
    if reading is None or reading.paused:
        return None
    if session.interrupt_pending:
        session.interrupt_pending = False
        session.interrupt_after = None
        reading.paused = True
        return None
    if reading.index >= len(reading.units):
        session.reading = None
        return None
    unit = reading.units[reading.index]
    reading.index += 1
    reading.delivered = unit.span
    _set_last_readback(session, unit.span, unit.text)
    response = SystemResponse.of(READING, unit.text, index=reading.index,
                                 total=len(reading.units))
    if session.interrupt_after is not None:
        session.interrupt_after -= 1
        if session.interrupt_after <= 0:
            session.interrupt_after = None
            session.interrupt_pending = True
    if reading.index >= len(reading.units):
        session.reading = None
    return response


def drain_reading(session: SessionState) -> list[SystemResponse]:
    chunks = []
    while True:
        chunk = pump_reading(session)
        if chunk is None:
            return chunks
        chunks.append(chunk)


def interrupt(session: SessionState) -> bool:
    """The single-tap gesture: pause reading at the next unit boundary."""
    if session.reading is not None and not session.reading.paused:
        session.interrupt_pending = True
        return True
    return False


def _start_reading(session: SessionState, scope: str, scope_block: int | None,
                   confirmation: str, empty_error: str) -> list[SystemResponse]:
    units = _build_units(session.document, scope, scope_block)
    if not units:
        return [SystemResponse.of(ERROR, empty_error)]
    session.reading = ReadingSession(units=units, scope=scope, scope_block=scope_block)
    return [SystemResponse.of(CONFIRMATION, confirmation)]


def _resume_reading(session: SessionState) -> None:
    """Rebuild the remaining units from the live document and unpause.

    Edits made while paused (a comment, a fixed word) must not re-read
    what was already delivered, so resumption is positional: the first
    unit starting at or after the end of the last delivered one.
    """
    reading = session.reading
    assert reading is not None
    units = _build_units(session.document, reading.scope, reading.scope_block)
    resume = 0
    if reading.delivered is not None:
        span = reading.delivered
        last_pos = block_position(session.document, span.block)
        if last_pos is not None:
            for i, unit in enumerate(units):
                unit_pos = block_position(session.document, unit.span.block)
                if unit_pos is None:
                    continue
                if (unit_pos, unit.span.start) >= (last_pos, span.end):
                    resume = i
                    break
            else:
                resume = len(units)
        else:
            resume = min(reading.index, len(units))
    reading.units = units
    reading.index = resume
    reading.paused = False
    if resume >= len(units):
        session.reading = None


# --- the main loop ------------------------------------------------------------

def handle_utterance(session: SessionState, raw: str, *, drain: bool = True,
                     table: PatternTable | None = None) -> list[SystemResponse]:
    """Process one transcript and return the responses it provokes.

    With drain=True any started or resumed reading is delivered in full
    (minus armed interrupts); with drain=False the caller pumps chunks
    itself via pump_reading, which lets it pace them and honor interrupts.
    """
    utt = make_utterance(raw)
    ctx = NluContext(session.mode, session.post_readback)
    result = parse(utt, ctx, table)
    if result.intent is None:
        return [SystemResponse.of(ERROR, ERR_NOT_RECOGNIZED)]
    responses = _dispatch(session, result.intent)
    if drain:
        responses = responses + drain_reading(session)
    return responses


def _dispatch(session: SessionState, intent: Intent) -> list[SystemResponse]:
    kind = intent.kind
    slots = intent.slots
    editor = session.editor

    if kind is IntentKind.START_DICTATION:
        session.mode = DICTATION
        session.post_readback = False
        editor.focus.selection = None
        return [SystemResponse.of(CONFIRMATION, "Dictation mode started")]
    if kind is IntentKind.START_COMMAND_MODE:
        session.mode = COMMAND
        session.post_readback = False
        editor.focus.selection = None
        return [SystemResponse.of(CONFIRMATION, "Command mode started")]

    # Dictation keeps the post-readback window open; commands leave it as is.
    if kind is IntentKind.DICTATE:
        outcome = editing.append_dictation(editor, list(slots["tokens"]))
        if outcome.kind == editing.NOOP:
            response = SystemResponse.of(READBACK, MSG_NOTHING_CHANGED)
        else:
            block = session.document.blocks[outcome.focus.block]
            span = outcome.affected
            literal = render_literal(block.tokens[span.start:span.end])
            _set_last_readback(session, span, literal)
            response = SystemResponse.of(READBACK, literal)
        session.post_readback = True
        return [response]

    if kind is IntentKind.SET_TITLE or kind is IntentKind.ADD_HEADING:
        tokens = tokenize(slots.get("text", ""))
        if kind is IntentKind.SET_TITLE:
            outcome = editing.add_structure_block(editor, BlockKind.TITLE, tokens)
        else:
            outcome = editing.add_structure_block(editor, BlockKind.HEADING, tokens,
                                                  level=slots["level"])
        if outcome.kind == editing.FAILED:
            return [_fail_response(outcome)]
        block = session.document.blocks[outcome.focus.block]
        literal = _title_literal(block) if kind is IntentKind.SET_TITLE else _heading_literal(block)
        _set_last_readback(session, outcome.affected, literal)
        return [SystemResponse.of(CONFIRMATION, literal)]

    if kind is IntentKind.NEW_PARAGRAPH:
        outcome = editing.add_structure_block(editor, BlockKind.PARAGRAPH, [])
        if outcome.kind == editing.FAILED:
            return [_fail_response(outcome)]
        return [SystemResponse.of(CONFIRMATION, "New paragraph")]
    if kind is IntentKind.START_BULLET_LIST:
        editor.list_mode = BlockKind.BULLET_ITEM
        return [SystemResponse.of(CONFIRMATION, "Bullet list started")]
    if kind is IntentKind.START_ENUMERATION:
        editor.list_mode = BlockKind.ENUM_ITEM
        return [SystemResponse.of(CONFIRMATION, "Enumeration started")]
    if kind is IntentKind.END_LIST:
        editor.list_mode = None
        return [SystemResponse.of(CONFIRMATION, "List ended")]

    if kind is IntentKind.REPLACE_CONTENT:
        outcome = editing.replace_content(editor, slots["old"], slots["new"])
        return [_fail_response(outcome) if outcome.kind == editing.FAILED
                else _content_readback(session, outcome)]
    if kind is IntentKind.INSERT_CONTENT:
        outcome = editing.insert_content(editor, slots["new"], slots["relation"],
                                         slots["anchor"])
        return [_fail_response(outcome) if outcome.kind == editing.FAILED
                else _content_readback(session, outcome)]
    if kind is IntentKind.DELETE_CONTENT:
        outcome = editing.delete_content(editor, slots["target"])
        return [_fail_response(outcome) if outcome.kind == editing.FAILED
                else _content_readback(session, outcome)]
    if kind is IntentKind.MOVE_CONTENT:
        outcome = editing.move_content(editor, slots["target"], slots["relation"],
                                       slots["anchor"])
        return [_fail_response(outcome) if outcome.kind == editing.FAILED
                else _content_readback(session, outcome)]

    if kind in (IntentKind.DELETE_LAST_WORD, IntentKind.DELETE_WORD,
                IntentKind.DELETE_SENTENCE):
        unit = "sentence" if kind is IntentKind.DELETE_SENTENCE else "word"
        scope = "last" if kind is IntentKind.DELETE_LAST_WORD else "at_focus"
        outcome = editing.relative_edit(editor, unit, "delete", scope)
        return [_fail_response(outcome) if outcome.kind == editing.FAILED
                else _content_readback(session, outcome)]
    if kind in (IntentKind.SELECT_WORD, IntentKind.SELECT_SENTENCE):
        unit = "sentence" if kind is IntentKind.SELECT_SENTENCE else "word"
        outcome = editing.relative_edit(editor, unit, "select", "at_focus")
        if outcome.kind == editing.FAILED:
            return [_fail_response(outcome)]
        span = outcome.affected
        block = session.document.blocks[outcome.focus.block]
        literal = render_literal(block.tokens[span.start:span.end])
        _set_last_readback(session, span, literal)
        # Selecting must keep the selection the readback rule would drop.
        editor.focus.selection = editing.Selection(outcome.focus.block, span.start, span.end)
        return [SystemResponse.of(READBACK, literal)]

    if kind is IntentKind.NAV_START_PARAGRAPH or kind is IntentKind.NAV_END_PARAGRAPH:
        where = "start_paragraph" if kind is IntentKind.NAV_START_PARAGRAPH else "end_paragraph"
        outcome = editing.navigate(editor, where)
        if outcome.kind == editing.FAILED:
            return [_fail_response(outcome)]
        literal = "Start of paragraph" if where == "start_paragraph" else "End of paragraph"
        return [SystemResponse.of(CONFIRMATION, literal)]
    if kind is IntentKind.JUMP_TO_HEADING:
        session.reading = None  # jumping abandons any reading in progress
        outcome = editing.navigate(editor, "jump_heading", slots.get("text"))
        if outcome.kind == editing.FAILED:
            return [_fail_response(outcome)]
        return [SystemResponse.of(CONFIRMATION, f"Jumped to “{outcome.label}”")]

    if kind is IntentKind.READ_HEADINGS:
        return _start_reading(session, "headings", None, "Reading headings", ERR_NO_HEADINGS)
    if kind is IntentKind.READ_DOCUMENT:
        return _start_reading(session, "document", None, "Reading document",
                              ERR_DOCUMENT_EMPTY)
    if kind is IntentKind.READ_PARAGRAPH:
        block = editing._focus_block(editor)
        block_id = block.id if block is not None else None
        return _start_reading(session, "paragraph", block_id, "Reading paragraph",
                              ERR_NOTHING_TO_READ)
    if kind is IntentKind.READ_SENTENCE:
        found = editing.sentence_at(session.document, editor.focus.block,
                                    editor.focus.offset)
        if found is None:
            return [SystemResponse.of(ERROR, ERR_NOTHING_TO_READ)]
        block_idx, _, span = found
        block = session.document.blocks[block_idx]
        session.reading = ReadingSession(
            units=[ReadingUnit(span, render_literal(block.tokens[span.start:span.end]))],
            scope="sentence", scope_block=block.id)
        return [SystemResponse.of(CONFIRMATION, "Reading sentence")]

    if kind is IntentKind.STOP:
        if session.reading is None:
            return [SystemResponse.of(ERROR, ERR_NOTHING_TO_STOP)]
        session.reading.paused = True
        return [SystemResponse.of(CONFIRMATION, "Stopped")]
    if kind is IntentKind.GO_ON:
        if session.reading is None:
            return [SystemResponse.of(ERROR, ERR_NOTHING_TO_CONTINUE)]
        _resume_reading(session)
        return [SystemResponse.of(CONFIRMATION, "Continuing")]
    if kind is IntentKind.REPEAT_LAST_SENTENCE:
        if session.last_readback is None:
            return [SystemResponse.of(ERROR, ERR_NOTHING_TO_REPEAT)]
        span, literal = session.last_readback
        _set_last_readback(session, span, literal)
        return [SystemResponse.of(READBACK, literal)]

    if kind is IntentKind.INSERT_COMMENT:
        outcome = editing.insert_comment(editor, slots.get("text", ""))
        if outcome.kind == editing.FAILED:
            return [_fail_response(outcome)]
        return [SystemResponse.of(CONFIRMATION, f"Comment inserted: {outcome.label}")]
    if kind is IntentKind.UNDO:
        outcome = editing.undo_last(editor)
        if outcome.kind == editing.FAILED:
            return [_fail_response(outcome)]
        return [SystemResponse.of(CONFIRMATION, f"Undid {outcome.label}")]
    if kind is IntentKind.EXPORT:
        fmt = slots.get("format", "markdown")
        body = export_markdown(session.document) if fmt == "markdown" else export_plain(
            session.document)
        session.pending_export = (fmt, body)
        return [SystemResponse.of(CONFIRMATION, f"Exported as {fmt}")]

    raise AssertionError(f"Unhandled intent kind: {kind}")
