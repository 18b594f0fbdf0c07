"""Shared builders for tests: documents from readable specs, random states."""

from __future__ import annotations

import random

from talkdoc.document import Block, BlockKind, Document, Punct, Word, make_block
from talkdoc.editing import EditorState, Focus
from talkdoc.normalize import tokenize

SAMPLE_DICTATION = (
    "This new system should achieve protection against burglary comma both in "
    "the absence and presence of residents period"
)


def build_doc(*specs) -> Document:
    """specs: ("title", text) | ("heading", level, text) | ("para", text)
    | ("bullet", text) | ("enum", text). Text is tokenized, so spoken
    punctuation words and literal marks both work."""
    doc = Document()
    for spec in specs:
        kind = spec[0]
        if kind == "title":
            doc.blocks.append(make_block(doc, BlockKind.TITLE, tokenize(spec[1])))
        elif kind == "heading":
            doc.blocks.append(
                make_block(doc, BlockKind.HEADING, tokenize(spec[2]), level=spec[1]))
        elif kind == "para":
            doc.blocks.append(make_block(doc, BlockKind.PARAGRAPH, tokenize(spec[1])))
        elif kind == "bullet":
            doc.blocks.append(make_block(doc, BlockKind.BULLET_ITEM, tokenize(spec[1])))
        elif kind == "enum":
            doc.blocks.append(make_block(doc, BlockKind.ENUM_ITEM, tokenize(spec[1]), index=1))
        else:
            raise ValueError(kind)
    # fix enum runs
    counter = 1
    for block in doc.blocks:
        if block.kind is BlockKind.ENUM_ITEM:
            block.index = counter
            counter += 1
        else:
            counter = 1
    return doc


def anti_theft_doc() -> Document:
    return build_doc(
        ("title", "Anti Theft System"),
        ("heading", 1, "Introduction"),
        ("para", "This new control system should achieve protection against "
                 "burglary, both in the absence and presence of residents."),
    )


def editor_for(doc: Document, block: int | None = None, offset: int | None = None) -> EditorState:
    state = EditorState(document=doc)
    if doc.blocks:
        b = len(doc.blocks) - 1 if block is None else block
        o = len(doc.blocks[b].tokens) if offset is None else offset
        state.focus = Focus(b, o)
    return state


_WORDS = [
    "amber", "birch", "cedar", "delta", "ember", "fjord", "grove", "harbor",
    "inlet", "juniper", "kestrel", "larch", "meadow", "north", "osprey",
    "pine", "quartz", "river", "stone", "tundra",
]


def random_tokens(rng: random.Random, min_len: int = 1, max_len: int = 10) -> list:
    tokens = []
    for _ in range(rng.randint(min_len, max_len)):
        if tokens and rng.random() < 0.2 and not isinstance(tokens[-1], Punct):
            tokens.append(Punct(rng.choice([",", ".", "?", "!", ";", ":"])))
        else:
            word = rng.choice(_WORDS)
            if rng.random() < 0.2:
                word = word.capitalize()
            tokens.append(Word(word))
    return tokens


def random_document(rng: random.Random, max_blocks: int = 5) -> Document:
    doc = Document()
    n = rng.randint(0, max_blocks)
    for i in range(n):
        roll = rng.random()
        if i == 0 and roll < 0.3:
            doc.blocks.append(make_block(doc, BlockKind.TITLE, random_tokens(rng, 1, 4)))
        elif roll < 0.45:
            doc.blocks.append(make_block(doc, BlockKind.HEADING, random_tokens(rng, 1, 4),
                                         level=rng.randint(1, 3)))
        elif roll < 0.8:
            doc.blocks.append(make_block(doc, BlockKind.PARAGRAPH, random_tokens(rng, 0, 14)))
        elif roll < 0.9:
            doc.blocks.append(make_block(doc, BlockKind.BULLET_ITEM, random_tokens(rng, 1, 5)))
        else:
            doc.blocks.append(make_block(doc, BlockKind.ENUM_ITEM, random_tokens(rng, 1, 5),
                                         index=1))
    counter = 1
    for block in doc.blocks:
        if block.kind is BlockKind.ENUM_ITEM:
            block.index = counter
            counter += 1
        else:
            counter = 1
    return doc


def random_focus(rng: random.Random, doc: Document) -> Focus:
    if not doc.blocks:
        return Focus(0, 0)
    b = rng.randrange(len(doc.blocks))
    return Focus(b, rng.randint(0, len(doc.blocks[b].tokens)))
