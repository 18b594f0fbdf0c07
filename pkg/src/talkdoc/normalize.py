"""Transcript normalization: raw recognizer text to tokens and back.

Spoken punctuation words ("comma", "question mark", ...) become marks,
literal marks glued to words are split off, and token sequences can be
rendered back into speech-ready text where marks are spoken words again.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from talkdoc.document import (
    PUNCT_MARKS,
    SENTENCE_FINAL_MARKS,
    BlockKind,
    Punct,
    Token,
    Word,
)

# Spoken phrase -> mark. Order matters: the first phrase listed for a mark is
# the canonical spoken form used when verbalizing. Multi-word phrases are
# matched greedily before single words.
DEFAULT_KEYWORDS: dict[str, str] = {
    "comma": ",",
    "period": ".",
    "full stop": ".",
    "semicolon": ";",
    "colon": ":",
    "question mark": "?",
    "exclamation mark": "!",
}

# Marks that prosody replaces at the end of a spoken sentence.
SUPPRESSIBLE_FINAL = (".", "?")


@dataclass(frozen=True)
class Utterance:
    """A transcript as delivered by the recognizer, plus its token form."""

    raw: str
    tokens: tuple[Token, ...]


def utterance(raw: str, table: dict[str, str] | None = None) -> Utterance:
    return Utterance(raw, tuple(tokenize(raw, table)))


def load_keyword_table(path: str | Path) -> dict[str, str]:
    """Load a spoken-word table from a JSON file of {"phrase": "mark"}."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    table = {}
    for phrase, mark in data.items():
        if mark not in PUNCT_MARKS:
            raise ValueError(f"Keyword table maps {phrase!r} to unknown mark {mark!r}")
        table[phrase.lower()] = mark
    return table


def _spoken_forms(table: dict[str, str]) -> dict[str, str]:
    forms = {}
    for phrase, mark in table.items():
        forms.setdefault(mark, phrase)
    return forms


def _split_literal_marks(chunk: str) -> list[Token]:
    # "burglary," -> Word + Punct; "..." -> three Puncts.
    tokens: list[Token] = []
    buf = ""
    for ch in chunk:
        if ch in PUNCT_MARKS:
            if buf:
                tokens.append(Word(buf))
                buf = ""
            tokens.append(Punct(ch))
        else:
            buf += ch
    if buf:
        tokens.append(Word(buf))
    return tokens


def tokenize(raw: str, table: dict[str, str] | None = None) -> list[Token]:
    """Whitespace-split a transcript into tokens.

    Spoken punctuation phrases map to marks (multi-word phrases first,
    matched case-insensitively); literal marks stuck to words are split
    into their own tokens; everything else is a word, casing untouched.
    """
    table = DEFAULT_KEYWORDS if table is None else table
    multi = {p: m for p, m in table.items() if " " in p}
    single = {p: m for p, m in table.items() if " " not in p}
    max_len = max((len(p.split()) for p in multi), default=1)

    chunks = raw.split()
    tokens: list[Token] = []
    i = 0
    while i < len(chunks):
        matched = False
        for n in range(min(max_len, len(chunks) - i), 1, -1):
            phrase = " ".join(c.lower() for c in chunks[i:i + n])
            if phrase in multi:
                tokens.append(Punct(multi[phrase]))
                i += n
                matched = True
                break
        if matched:
            continue
        lower = chunks[i].lower()
        if lower in single:
            tokens.append(Punct(single[lower]))
        else:
            tokens.extend(_split_literal_marks(chunks[i]))
        i += 1
    return tokens


def verbalize(tokens: list[Token], suppress_final: bool, table: dict[str, str] | None = None) -> str:
    """Render tokens as speech-ready text.

    Words pass through; marks become their spoken phrases. With
    suppress_final, a trailing '.' or '?' is dropped entirely (prosody
    stands in for it); '!' is always spoken.
    """
    table = DEFAULT_KEYWORDS if table is None else table
    spoken = _spoken_forms(table)
    parts = []
    last = len(tokens) - 1
    for i, token in enumerate(tokens):
        if isinstance(token, Punct):
            if suppress_final and i == last and token.mark in SUPPRESSIBLE_FINAL:
                continue
            parts.append(spoken[token.mark])
        else:
            parts.append(token.text)
    return " ".join(parts)


def _capitalized(word: Word) -> Word:
    text = word.text
    if text[0].isupper():
        return word
    return Word(text[0].upper() + text[1:])


def apply_casing(tokens: list[Token], kind: BlockKind, *,
                 sentence_start: bool = True) -> list[Token]:
    """Uppercase first letters by block kind; never changes anything else.

    Title: every word. Heading: the first word. Paragraphs and list items:
    the first word of each sentence. Idempotent. `sentence_start` seeds the
    sentence state, for casing tokens spliced into the middle of a block.
    """
    out: list[Token] = []
    for token in tokens:
        if isinstance(token, Punct):
            if token.mark in SENTENCE_FINAL_MARKS:
                sentence_start = True
            out.append(token)
            continue
        if kind is BlockKind.TITLE:
            out.append(_capitalized(token))
        elif kind is BlockKind.HEADING:
            out.append(_capitalized(token) if sentence_start else token)
            sentence_start = False
        else:
            out.append(_capitalized(token) if sentence_start else token)
            sentence_start = False
    return out


_STRIP_CHARS = "«»“”\"'‘’"


def verbalize_literal(literal: str, table: dict[str, str] | None = None) -> str:
    """Speech-ready form of a display string: quote characters dropped,
    marks spoken, a final '.' or '?' left to prosody."""
    tokens = tokenize(literal, table)
    cleaned: list[Token] = []
    for token in tokens:
        if isinstance(token, Word):
            text = token.text.strip(_STRIP_CHARS)
            if text:
                cleaned.append(Word(text))
        else:
            cleaned.append(token)
    return verbalize(cleaned, suppress_final=True, table=table)
