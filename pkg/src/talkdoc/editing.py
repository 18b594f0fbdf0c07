"""Applying edits to the document: content commands, cursor commands, undo.

All operations take an EditorState (document + focus + undo stack) and
return an EditOutcome describing what happened and which span a readback
should cover. Failed outcomes never touch the document; every mutation
pushes one snapshot, so one spoken command is always one undo step.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

from talkdoc.document import (
    SENTENCE_FINAL_MARKS,
    Block,
    BlockKind,
    Comment,
    Document,
    Punct,
    Span,
    Token,
    Word,
    block_position,
    find_content,
    make_block,
    next_comment_id,
    segment_sentences,
    words_text,
)
from talkdoc.normalize import apply_casing

# Outcome kinds.
CREATED = "created"
EDITED = "edited"
DELETED = "deleted"
NAVIGATED = "navigated"
NOOP = "noop"
FAILED = "failed"

# Failure reasons.
NOT_FOUND = "not_found"
NOTHING_THERE = "nothing_there"
NOTHING_TO_UNDO = "nothing_to_undo"
EMPTY_TEXT = "empty_text"

# Block kinds that take running text; dictation appends into these.
TEXT_KINDS = (BlockKind.PARAGRAPH, BlockKind.BULLET_ITEM, BlockKind.ENUM_ITEM)


@dataclass(frozen=True)
class Selection:
    block: int  # block index
    start: int
    end: int


@dataclass
class Focus:
    """The virtual cursor: a token offset in one block, plus an optional selection."""

    block: int = 0
    offset: int = 0
    selection: Selection | None = None


@dataclass
class UndoEntry:
    document: Document
    focus: Focus
    label: str


@dataclass
class EditOutcome:
    kind: str
    focus: Focus
    affected: Span | None = None
    reason: str | None = None
    label: str | None = None


@dataclass
class EditorState:
    document: Document = field(default_factory=Document)
    focus: Focus = field(default_factory=Focus)
    undo: list[UndoEntry] = field(default_factory=list)
    list_mode: BlockKind | None = None  # BULLET_ITEM or ENUM_ITEM while a list is open


def _snapshot(state: EditorState, label: str) -> None:
    state.undo.append(
        UndoEntry(copy.deepcopy(state.document), copy.deepcopy(state.focus), label)
    )


def _failed(state: EditorState, reason: str, label: str | None = None) -> EditOutcome:
    return EditOutcome(FAILED, state.focus, reason=reason, label=label)


def _cased_for_position(block: Block, at: int, tokens: list[Token]) -> list[Token]:
    """Case tokens for insertion at offset `at`: capitalized iff the spot
    begins a sentence (or the heading), title words always."""
    if block.kind is BlockKind.HEADING:
        start = at == 0
    elif block.kind is BlockKind.TITLE:
        start = True
    else:
        before = block.tokens[at - 1] if 0 < at <= len(block.tokens) else None
        start = at == 0 or (isinstance(before, Punct)
                            and before.mark in SENTENCE_FINAL_MARKS)
    return apply_casing(tokens, block.kind, sentence_start=start)


def _renumber_enums(doc: Document) -> None:
    counter = 1
    for block in doc.blocks:
        if block.kind is BlockKind.ENUM_ITEM:
            block.index = counter
            counter += 1
        else:
            counter = 1


def _focus_block(state: EditorState) -> Block | None:
    doc = state.document
    if 0 <= state.focus.block < len(doc.blocks):
        return doc.blocks[state.focus.block]
    return None


def _insert_block(state: EditorState, block: Block) -> int:
    """Insert after the focus block (at 0 for a title), return the new index."""
    doc = state.document
    if block.kind is BlockKind.TITLE:
        doc.blocks.insert(0, block)
        return 0
    if not doc.blocks:
        doc.blocks.append(block)
        return 0
    idx = min(state.focus.block, len(doc.blocks) - 1) + 1
    doc.blocks.insert(idx, block)
    return idx


def _drop_block_if_empty(state: EditorState, block_idx: int) -> bool:
    """Remove a block emptied by a deletion; its comments become orphans."""
    doc = state.document
    block = doc.blocks[block_idx]
    if block.tokens:
        return False
    del doc.blocks[block_idx]
    for comment in doc.comments:
        if comment.block == block.id:
            comment.orphaned = True
    _renumber_enums(doc)
    if doc.blocks:
        prev = max(block_idx - 1, 0)
        offset = len(doc.blocks[prev].tokens) if block_idx > 0 else 0
        state.focus = Focus(prev, offset)
    else:
        state.focus = Focus(0, 0)
    return True


def phrase_tokens(words: list[str]) -> list[Token]:
    return [Word(w) for w in words]


# --- structure and dictation -------------------------------------------------

_STRUCTURE_LABELS = {
    BlockKind.TITLE: "title",
    BlockKind.HEADING: "heading",
    BlockKind.PARAGRAPH: "paragraph",
    BlockKind.BULLET_ITEM: "list item",
    BlockKind.ENUM_ITEM: "list item",
}


def add_structure_block(state: EditorState, kind: BlockKind, tokens: list[Token],
                        level: int | None = None) -> EditOutcome:
    """Create a structure block. Titles and headings need text; a repeated
    title replaces the existing one in place."""
    doc = state.document
    if kind in (BlockKind.TITLE, BlockKind.HEADING):
        if not any(isinstance(t, Word) for t in tokens):
            return _failed(state, EMPTY_TEXT)
    label = _STRUCTURE_LABELS[kind]
    _snapshot(state, label)
    state.list_mode = None
    cased = apply_casing(tokens, kind)
    if kind is BlockKind.TITLE and doc.blocks and doc.blocks[0].kind is BlockKind.TITLE:
        block = doc.blocks[0]
        block.tokens = [t for t in cased if not (isinstance(t, Punct) and t.mark == ".")]
        idx = 0
    else:
        block = make_block(doc, kind, cased, level=level,
                           index=1 if kind is BlockKind.ENUM_ITEM else None)
        idx = _insert_block(state, block)
        _renumber_enums(doc)
    state.focus = Focus(idx, len(block.tokens))
    return EditOutcome(CREATED, state.focus, affected=Span(block.id, 0, len(block.tokens)),
                       label=label)


def append_dictation(state: EditorState, tokens: list[Token]) -> EditOutcome:
    """Add dictated tokens at the focus.

    In list mode every utterance becomes a fresh list item. Otherwise the
    tokens go into the paragraph or list item under the focus, opening a
    new paragraph right after the focus block when there is none.
    """
    if not tokens:
        return EditOutcome(NOOP, state.focus)
    doc = state.document
    if state.list_mode is not None:
        _snapshot(state, "list item")
        kind = state.list_mode
        block = make_block(doc, kind, apply_casing(tokens, kind),
                           index=1 if kind is BlockKind.ENUM_ITEM else None)
        idx = _insert_block(state, block)
        _renumber_enums(doc)
        state.focus = Focus(idx, len(block.tokens))
        return EditOutcome(CREATED, state.focus,
                           affected=Span(block.id, 0, len(block.tokens)), label="list item")
    _snapshot(state, "dictation")
    target = _focus_block(state)
    if target is None or target.kind not in TEXT_KINDS:
        block = make_block(doc, BlockKind.PARAGRAPH, [])
        idx = _insert_block(state, block)
        state.focus = Focus(idx, 0)
        target = block
    at = state.focus.offset
    target.tokens[at:at] = _cased_for_position(target, at, tokens)
    state.focus = Focus(state.focus.block, at + len(tokens))
    return EditOutcome(EDITED, state.focus, affected=Span(target.id, at, at + len(tokens)),
                       label="dictation")


# --- content-based commands ---------------------------------------------------

def replace_content(state: EditorState, old: list[str], new: list[str]) -> EditOutcome:
    match = find_content(state.document, old, at=(state.focus.block, state.focus.offset))
    if match is None:
        return _failed(state, NOT_FOUND, label=" ".join(old))
    _snapshot(state, "replace")
    block_idx = block_position(state.document, match.block)
    block = state.document.blocks[block_idx]
    block.tokens[match.start:match.end] = _cased_for_position(
        block, match.start, phrase_tokens(new))
    state.focus = Focus(block_idx, match.start + len(new))
    return EditOutcome(EDITED, state.focus,
                       affected=Span(block.id, match.start, match.start + len(new)),
                       label="replace")


def insert_content(state: EditorState, new: list[str], relation: str,
                   anchor: list[str]) -> EditOutcome:
    match = find_content(state.document, anchor, at=(state.focus.block, state.focus.offset))
    if match is None:
        return _failed(state, NOT_FOUND, label=" ".join(anchor))
    _snapshot(state, "insert")
    block_idx = block_position(state.document, match.block)
    block = state.document.blocks[block_idx]
    at = match.start if relation == "before" else match.end
    block.tokens[at:at] = _cased_for_position(block, at, phrase_tokens(new))
    state.focus = Focus(block_idx, at + len(new))
    return EditOutcome(EDITED, state.focus, affected=Span(block.id, at, at + len(new)),
                       label="insert")


def _delete_span(state: EditorState, block_idx: int, start: int, end: int) -> EditOutcome:
    """Remove tokens [start, end) of a block; drops the block if emptied."""
    block = state.document.blocks[block_idx]
    removed = words_text(block.tokens[start:end])
    del block.tokens[start:end]
    if _drop_block_if_empty(state, block_idx):
        return EditOutcome(DELETED, state.focus, label=removed)
    state.focus = Focus(block_idx, min(start, len(block.tokens)))
    return EditOutcome(DELETED, state.focus, affected=Span(block.id, start, start),
                       label=removed)


def delete_content(state: EditorState, target: list[str]) -> EditOutcome:
    match = find_content(state.document, target, at=(state.focus.block, state.focus.offset))
    if match is None:
        return _failed(state, NOT_FOUND, label=" ".join(target))
    _snapshot(state, "delete")
    block_idx = block_position(state.document, match.block)
    return _delete_span(state, block_idx, match.start, match.end)


def move_content(state: EditorState, target: list[str], relation: str,
                 anchor: list[str]) -> EditOutcome:
    """Delete the target and insert it at the anchor, as one undo step."""
    match = find_content(state.document, target, at=(state.focus.block, state.focus.offset))
    if match is None:
        return _failed(state, NOT_FOUND, label=" ".join(target))
    _snapshot(state, "move")
    block_idx = block_position(state.document, match.block)
    block = state.document.blocks[block_idx]
    moved = block.tokens[match.start:match.end]
    del block.tokens[match.start:match.end]
    dropped = _drop_block_if_empty(state, block_idx)
    if not dropped:
        state.focus = Focus(block_idx, min(match.start, len(block.tokens)))
    dest = find_content(state.document, anchor, at=(state.focus.block, state.focus.offset))
    if dest is None:
        entry = state.undo.pop()
        state.document = entry.document
        state.focus = entry.focus
        return _failed(state, NOT_FOUND, label=" ".join(anchor))
    dest_idx = block_position(state.document, dest.block)
    dest_block = state.document.blocks[dest_idx]
    at = dest.start if relation == "before" else dest.end
    dest_block.tokens[at:at] = _cased_for_position(dest_block, at, moved)
    state.focus = Focus(dest_idx, at + len(moved))
    return EditOutcome(EDITED, state.focus,
                       affected=Span(dest_block.id, at, at + len(moved)), label="move")


# --- cursor-based commands ----------------------------------------------------

def sentence_at(doc: Document, block_idx: int, offset: int) -> tuple[int, int, Span] | None:
    """The sentence at a position: the one ending exactly there wins (the
    unit just read back), else the one containing the position, else the
    nearest earlier sentence, walking back through blocks.
    Returns (block index, sentence index, span)."""
    if not (0 <= block_idx < len(doc.blocks)):
        block_idx = len(doc.blocks) - 1
        offset = None  # type: ignore[assignment]
    for idx in range(block_idx, -1, -1):
        spans = segment_sentences(doc.blocks[idx])
        if not spans:
            continue
        if idx != block_idx or offset is None:
            return idx, len(spans) - 1, spans[-1]
        for si, span in enumerate(spans):
            if span.end == offset:
                return idx, si, span
        for si, span in enumerate(spans):
            if span.start <= offset < span.end:
                return idx, si, span
        if offset >= spans[-1].end:
            return idx, len(spans) - 1, spans[-1]
    return None


def _word_before(doc: Document, block_idx: int, offset: int) -> tuple[int, int] | None:
    """Nearest word token ending at or before the position, across blocks."""
    for idx in range(min(block_idx, len(doc.blocks) - 1), -1, -1):
        tokens = doc.blocks[idx].tokens
        start = min(offset, len(tokens)) if idx == block_idx else len(tokens)
        for i in range(start - 1, -1, -1):
            if isinstance(tokens[i], Word):
                return idx, i
    return None


def relative_edit(state: EditorState, unit: str, action: str, scope: str) -> EditOutcome:
    """Cursor-relative delete/select of a word or sentence.

    scope "last" means the unit ending at or right before the focus;
    "at_focus" the unit under it. A delete with an active selection
    removes the selection instead.
    """
    doc = state.document
    focus = state.focus
    if action == "delete" and focus.selection is not None:
        sel = focus.selection
        _snapshot(state, "delete")
        return _delete_span(state, sel.block, sel.start, sel.end)
    if not doc.blocks:
        return _failed(state, NOTHING_THERE)

    if unit == "word":
        if scope == "last":
            hit = _word_before(doc, focus.block, focus.offset)
        else:
            block = _focus_block(state)
            hit = None
            if block is not None and focus.offset < len(block.tokens) and isinstance(
                    block.tokens[focus.offset], Word):
                hit = (focus.block, focus.offset)
            else:
                hit = _word_before(doc, focus.block, focus.offset)
        if hit is None:
            return _failed(state, NOTHING_THERE)
        block_idx, i = hit
        start, end = i, i + 1
    else:
        found = sentence_at(doc, focus.block, focus.offset)
        if found is None:
            return _failed(state, NOTHING_THERE)
        block_idx, _, span = found
        start, end = span.start, span.end

    block = doc.blocks[block_idx]
    if action == "select":
        state.focus = Focus(block_idx, end, Selection(block_idx, start, end))
        return EditOutcome(NAVIGATED, state.focus, affected=Span(block.id, start, end),
                           label="selection")
    _snapshot(state, "delete")
    state.focus = Focus(block_idx, start)
    return _delete_span(state, block_idx, start, end)


def navigate(state: EditorState, where: str, heading: str | None = None) -> EditOutcome:
    """Move the focus: paragraph start/end, or jump past a named heading."""
    doc = state.document
    if where == "jump_heading":
        needle = (heading or "").lower()
        for idx, block in enumerate(doc.blocks):
            if block.kind not in (BlockKind.TITLE, BlockKind.HEADING):
                continue
            text = words_text(block.tokens)
            if needle and needle in text.lower():
                if idx + 1 < len(doc.blocks):
                    state.focus = Focus(idx + 1, 0)
                else:
                    state.focus = Focus(idx, len(block.tokens))
                return EditOutcome(NAVIGATED, state.focus,
                                   affected=Span(block.id, 0, len(block.tokens)), label=text)
        return _failed(state, NOT_FOUND, label=heading)
    block = _focus_block(state)
    if block is None or block.kind not in TEXT_KINDS:
        return _failed(state, NOTHING_THERE)
    offset = 0 if where == "start_paragraph" else len(block.tokens)
    state.focus = Focus(state.focus.block, offset)
    return EditOutcome(NAVIGATED, state.focus)


def undo_last(state: EditorState) -> EditOutcome:
    """Restore the snapshot taken before the most recent mutation."""
    if not state.undo:
        return _failed(state, NOTHING_TO_UNDO)
    entry = state.undo.pop()
    state.document = entry.document
    state.focus = entry.focus
    return EditOutcome(EDITED, state.focus, label=entry.label)


def insert_comment(state: EditorState, text: str) -> EditOutcome:
    """Anchor a comment at the sentence containing (or just before) the focus."""
    doc = state.document
    if not doc.blocks:
        return _failed(state, NOTHING_THERE)
    found = sentence_at(doc, state.focus.block, state.focus.offset)
    if found is None:
        return _failed(state, NOTHING_THERE)
    block_idx, sentence_idx, span = found
    _snapshot(state, "comment")
    doc.comments.append(
        Comment(id=next_comment_id(doc), block=doc.blocks[block_idx].id,
                sentence=sentence_idx, text=text)
    )
    return EditOutcome(CREATED, state.focus, affected=span, label=text)
