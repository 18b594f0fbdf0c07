"""Structured document model: blocks of word and punctuation tokens.

A document is an ordered list of blocks (title, headings, paragraphs,
list items) whose content is a flat token sequence, plus comments
anchored to sentences. Everything here is plain value data with pure
functions over it; no hidden state, safe to snapshot and compare.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

PUNCT_MARKS = (",", ".", "?", "!", ";", ":")
SENTENCE_FINAL_MARKS = (".", "?", "!")

PERSISTENCE_VERSION = 1


@dataclass(frozen=True)
class Word:
    """A word token. Never empty, never contains whitespace or a punctuation mark."""

    text: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("Word text must be non-empty")
        if any(c.isspace() for c in self.text):
            raise ValueError(f"Word text may not contain whitespace: {self.text!r}")
        if any(c in PUNCT_MARKS for c in self.text):
            raise ValueError(f"Word text may not contain punctuation marks: {self.text!r}")


@dataclass(frozen=True)
class Punct:
    """A punctuation token: one of , . ? ! ; :"""

    mark: str

    def __post_init__(self) -> None:
        if self.mark not in PUNCT_MARKS:
            raise ValueError(f"Unknown punctuation mark: {self.mark!r}")


Token = Word | Punct


class BlockKind(Enum):
    TITLE = "title"
    HEADING = "heading"
    PARAGRAPH = "paragraph"
    BULLET_ITEM = "bullet"
    ENUM_ITEM = "enum"


# Kinds whose content is a single unit (no sentence splitting) and whose
# creation strips '.' marks.
_SINGLE_UNIT_KINDS = (BlockKind.TITLE, BlockKind.HEADING)


@dataclass
class Block:
    id: int
    kind: BlockKind
    tokens: list[Token] = field(default_factory=list)
    level: int | None = None  # headings only, 1..3
    index: int | None = None  # enum items only, 1-based within a run

    def __post_init__(self) -> None:
        if self.kind is BlockKind.HEADING:
            if self.level not in (1, 2, 3):
                raise ValueError(f"Heading level must be 1..3, got {self.level}")
        elif self.level is not None:
            raise ValueError(f"{self.kind.value} block may not carry a level")
        if self.kind is BlockKind.ENUM_ITEM:
            if self.index is None or self.index < 1:
                raise ValueError(f"Enum item index must be positive, got {self.index}")
        elif self.index is not None:
            raise ValueError(f"{self.kind.value} block may not carry an index")


@dataclass
class Comment:
    """A note anchored to (block id, sentence index). Orphaned when its block is deleted."""

    id: int
    block: int
    sentence: int
    text: str
    orphaned: bool = False


@dataclass
class Document:
    blocks: list[Block] = field(default_factory=list)
    comments: list[Comment] = field(default_factory=list)


@dataclass(frozen=True)
class Span:
    """A token span [start, end) within the block with the given id."""

    block: int
    start: int
    end: int


def make_block(doc: Document, kind: BlockKind, tokens: list[Token], *, level: int | None = None,
               index: int | None = None) -> Block:
    """Build a block with a fresh id. Title/heading blocks drop '.' marks."""
    if kind in _SINGLE_UNIT_KINDS:
        tokens = [t for t in tokens if not (isinstance(t, Punct) and t.mark == ".")]
    return Block(id=next_block_id(doc), kind=kind, tokens=list(tokens), level=level, index=index)


def next_block_id(doc: Document) -> int:
    return max((b.id for b in doc.blocks), default=-1) + 1


def next_comment_id(doc: Document) -> int:
    return max((c.id for c in doc.comments), default=-1) + 1


def block_position(doc: Document, block_id: int) -> int | None:
    """Index of the block with the given id in document order, or None."""
    for i, block in enumerate(doc.blocks):
        if block.id == block_id:
            return i
    return None


def validate_document(doc: Document) -> None:
    """Raise ValueError if a structural invariant is broken. Used by tests and fuzzing."""
    ids = [b.id for b in doc.blocks]
    if len(ids) != len(set(ids)):
        raise ValueError("block ids are not unique")
    for i, block in enumerate(doc.blocks):
        if block.kind is BlockKind.TITLE and i != 0:
            raise ValueError("title block must be at position 0")
    if sum(1 for b in doc.blocks if b.kind is BlockKind.TITLE) > 1:
        raise ValueError("more than one title block")
    for block in doc.blocks:
        if block.kind in _SINGLE_UNIT_KINDS:
            if any(isinstance(t, Punct) and t.mark == "." for t in block.tokens):
                raise ValueError(f"block {block.id} ({block.kind.value}) contains a '.' mark")
    # Enum runs restart at 1 and count up by 1.
    expected = 1
    for block in doc.blocks:
        if block.kind is BlockKind.ENUM_ITEM:
            if block.index != expected:
                raise ValueError(f"enum item {block.id} has index {block.index}, expected {expected}")
            expected += 1
        else:
            expected = 1
    id_set = set(ids)
    for comment in doc.comments:
        if not comment.orphaned and comment.block not in id_set:
            raise ValueError(f"comment {comment.id} anchors to missing block {comment.block}")


def segment_sentences(block: Block) -> list[Span]:
    """Split a block's tokens into sentence spans.

    A span ends right after a '.', '?' or '!' mark, or at block end.
    Title, heading and list blocks are one unit regardless of content.
    The spans partition the tokens: no gaps, no overlaps.
    """
    if not block.tokens:
        return []
    if block.kind is not BlockKind.PARAGRAPH:
        return [Span(block.id, 0, len(block.tokens))]
    spans = []
    start = 0
    for i, token in enumerate(block.tokens):
        if isinstance(token, Punct) and token.mark in SENTENCE_FINAL_MARKS:
            spans.append(Span(block.id, start, i + 1))
            start = i + 1
    if start < len(block.tokens):
        spans.append(Span(block.id, start, len(block.tokens)))
    return spans


def heading_outline(doc: Document) -> list[tuple[int, str]]:
    """(level, text) for every title/heading block in order; title is level 0."""
    outline = []
    for block in doc.blocks:
        if block.kind is BlockKind.TITLE:
            outline.append((0, words_text(block.tokens)))
        elif block.kind is BlockKind.HEADING:
            outline.append((block.level, words_text(block.tokens)))
    return outline


def words_text(tokens: list[Token]) -> str:
    """Space-joined word texts, punctuation skipped."""
    return " ".join(t.text for t in tokens if isinstance(t, Word))


def render_literal(tokens: list[Token]) -> str:
    """Tokens as display text: words space-separated, marks attached to the left."""
    parts: list[str] = []
    for token in tokens:
        if isinstance(token, Punct):
            parts.append(token.mark)
        else:
            if parts:
                parts.append(" ")
            parts.append(token.text)
    return "".join(parts)


def find_content(doc: Document, phrase: list[str], at: tuple[int, int]) -> Span | None:
    """Locate a word phrase in the document, nearest to the position `at`.

    `at` is (block index, token offset). Matching is case-insensitive on
    word text and token-aligned: the phrase words must appear consecutively
    with no punctuation in between (marks around the match do not matter).
    Matches never cross block boundaries. Matches at or before `at` win
    over matches after it; within each side the nearest wins, measured in
    tokens inside the block and then in whole blocks.
    """
    if not phrase:
        raise ValueError("phrase must be non-empty")
    needle = [w.lower() for w in phrase]
    at_block, at_offset = at
    best: tuple[tuple[int, int, int], Span] | None = None
    for block_idx, block in enumerate(doc.blocks):
        tokens = block.tokens
        for start in range(len(tokens) - len(needle) + 1):
            window = tokens[start:start + len(needle)]
            if not all(isinstance(t, Word) and t.text.lower() == w for t, w in zip(window, needle)):
                continue
            end = start + len(needle)
            if block_idx == at_block:
                before = start < at_offset
                if end <= at_offset:
                    tok_dist = at_offset - end
                elif start >= at_offset:
                    tok_dist = start - at_offset
                else:
                    tok_dist = 0  # the match straddles the position
                key = (0 if before else 1, 0, tok_dist)
            else:
                before = block_idx < at_block
                # Rank matches inside a non-focus block by how close they
                # sit to the focus side of that block.
                tok_dist = len(tokens) - end if before else start
                key = (0 if before else 1, abs(block_idx - at_block), tok_dist)
            if best is None or key < best[0]:
                best = (key, Span(block.id, start, end))
    return best[1] if best else None


def _comment_lines(doc: Document, block: Block, wrap: bool) -> list[str]:
    lines = []
    for comment in doc.comments:
        if comment.orphaned or comment.block != block.id:
            continue
        if wrap:
            lines.append(f"<!-- comment: {comment.text} -->")
        else:
            lines.append(f"[comment: {comment.text}]")
    return lines


def _export(doc: Document, markers: bool) -> str:
    chunks = []
    for block in doc.blocks:
        body = render_literal(block.tokens)
        if markers:
            if block.kind is BlockKind.TITLE:
                line = f"# {body}"
            elif block.kind is BlockKind.HEADING:
                line = f"{'#' * (block.level + 1)} {body}"
            elif block.kind is BlockKind.BULLET_ITEM:
                line = f"- {body}"
            elif block.kind is BlockKind.ENUM_ITEM:
                line = f"{block.index}. {body}"
            else:
                line = body
        else:
            line = body
        chunks.append("\n".join([line] + _comment_lines(doc, block, wrap=markers)))
    if not chunks:
        return ""
    return "\n\n".join(chunks) + "\n"


def export_markdown(doc: Document) -> str:
    """Markdown text: '#'-prefixed headings, '- ' bullets, 'n. ' enum items,
    blocks separated by one blank line, comments as HTML comment lines."""
    return _export(doc, markers=True)


def export_plain(doc: Document) -> str:
    """Same layout as the Markdown export, without structural markers."""
    return _export(doc, markers=False)


# --- persistence -----------------------------------------------------------

def document_to_dict(doc: Document) -> dict:
    blocks = []
    for block in doc.blocks:
        item: dict = {"id": block.id, "kind": block.kind.value}
        if block.level is not None:
            item["level"] = block.level
        if block.index is not None:
            item["index"] = block.index
        item["tokens"] = [
            {"w": t.text} if isinstance(t, Word) else {"p": t.mark} for t in block.tokens
        ]
        blocks.append(item)
    comments = [
        {"id": c.id, "block": c.block, "sentence": c.sentence, "text": c.text,
         "orphaned": c.orphaned}
        for c in doc.comments
    ]
    return {"version": PERSISTENCE_VERSION, "blocks": blocks, "comments": comments}


def document_to_json(doc: Document) -> str:
    return json.dumps(document_to_dict(doc), ensure_ascii=False)


def document_from_dict(data: dict) -> Document:
    version = data.get("version")
    if version != PERSISTENCE_VERSION:
        raise ValueError(f"Unsupported document version: {version!r}")
    blocks = []
    for item in data.get("blocks", []):
        tokens: list[Token] = []
        for entry in item["tokens"]:
            if "w" in entry:
                tokens.append(Word(entry["w"]))
            else:
                tokens.append(Punct(entry["p"]))
        blocks.append(Block(id=item["id"], kind=BlockKind(item["kind"]), tokens=tokens,
                            level=item.get("level"), index=item.get("index")))
    comments = [
        Comment(id=c["id"], block=c["block"], sentence=c["sentence"], text=c["text"],
                orphaned=c.get("orphaned", False))
        for c in data.get("comments", [])
    ]
    return Document(blocks=blocks, comments=comments)


def document_from_json(text: str) -> Document:
    return document_from_dict(json.loads(text))


def save_document(doc: Document, path: str | Path) -> None:
    Path(path).write_text(document_to_json(doc) + "\n", encoding="utf-8")


def load_document(path: str | Path) -> Document:
    return document_from_json(Path(path).read_text(encoding="utf-8"))
