"""Deterministic intent matching over normalized utterances.

A small keyword-template grammar stands in for a remote NLU service:
every command has one or more fixed templates with slot captures, gated
by the conversation context (mode and post-readback window). Matching is
pure and order-deterministic; the first matching template wins, so fixed
phrasings are listed above open-slot templates that would shadow them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from talkdoc.document import Punct, Token, Word, render_literal
from talkdoc.normalize import Utterance

COMMAND = "command"
DICTATION = "dictation"


class IntentKind(str, Enum):
    SET_TITLE = "set_title"
    ADD_HEADING = "add_heading"
    NEW_PARAGRAPH = "new_paragraph"
    START_BULLET_LIST = "start_bullet_list"
    START_ENUMERATION = "start_enumeration"
    END_LIST = "end_list"
    START_DICTATION = "start_dictation"
    START_COMMAND_MODE = "start_command_mode"
    REPLACE_CONTENT = "replace_content"
    INSERT_CONTENT = "insert_content"
    DELETE_CONTENT = "delete_content"
    MOVE_CONTENT = "move_content"
    DELETE_LAST_WORD = "delete_last_word"
    DELETE_WORD = "delete_word"
    DELETE_SENTENCE = "delete_sentence"
    SELECT_WORD = "select_word"
    SELECT_SENTENCE = "select_sentence"
    NAV_START_PARAGRAPH = "nav_start_paragraph"
    NAV_END_PARAGRAPH = "nav_end_paragraph"
    JUMP_TO_HEADING = "jump_to_heading"
    READ_SENTENCE = "read_sentence"
    READ_PARAGRAPH = "read_paragraph"
    READ_DOCUMENT = "read_document"
    READ_HEADINGS = "read_headings"
    REPEAT_LAST_SENTENCE = "repeat_last_sentence"
    STOP = "stop"
    GO_ON = "go_on"
    INSERT_COMMENT = "insert_comment"
    UNDO = "undo"
    EXPORT = "export"
    DICTATE = "dictate"


ALL_INTENTS = frozenset(IntentKind)

# Commands still recognized while plain dictation is running. Everything
# else spoken in that state is document text.
PLAIN_DICTATION_COMMANDS = frozenset(
    {IntentKind.START_COMMAND_MODE, IntentKind.STOP, IntentKind.UNDO, IntentKind.EXPORT}
)


@dataclass(frozen=True)
class NluContext:
    mode: str
    post_readback: bool = False

    def __post_init__(self) -> None:
        if self.mode not in (COMMAND, DICTATION):
            raise ValueError(f"Unknown mode: {self.mode!r}")
        if self.post_readback and self.mode != DICTATION:
            raise ValueError("post_readback is only valid in dictation mode")


@dataclass
class Intent:
    kind: IntentKind
    slots: dict = field(default_factory=dict)


@dataclass
class MatchResult:
    intent: Intent | None
    pattern: str | None


def active_intents(ctx: NluContext) -> frozenset[IntentKind]:
    """Intent kinds matchable in the given context."""
    if ctx.mode == COMMAND:
        return ALL_INTENTS - {IntentKind.DICTATE}
    if ctx.post_readback:
        return ALL_INTENTS
    return PLAIN_DICTATION_COMMANDS | {IntentKind.DICTATE}


# --- template grammar -------------------------------------------------------

# Slot types by slot name. "text" captures the rest of the utterance,
# "phrase" a word sequence bounded by the next keyword or a delimiter pair.
_SLOT_TYPES = {
    "text": "text",
    "old": "phrase",
    "new": "phrase",
    "target": "phrase",
    "anchor": "phrase",
    "level": "level",
    "relation": "relation",
    "format": "format",
}

_LEVEL_WORDS = {"one": 1, "1": 1, "two": 2, "2": 2, "three": 3, "3": 3}
_RELATION_WORDS = ("before", "after")
_FORMAT_WORDS = ("markdown", "plain")

# Opening delimiter -> closing delimiter for quoted slot values.
_DELIMITERS = {
    "«": "»",  # « »
    "“": "”",  # “ ”
    "‘": "’",  # ‘ ’
    '"': '"',
    "'": "'",
}

DEFAULT_GRAMMAR = """\
# One template per line: intent: keyword {slot} keyword ...
# First match wins, so fixed phrasings sit above open-slot templates.
set_title: title {text}
set_title: document title {text}
set_title: set title {text}
add_heading: heading {level} {text}
add_heading: add heading {level} {text}
new_paragraph: new paragraph
new_paragraph: next paragraph
start_bullet_list: start bullet list
start_bullet_list: bullet list
start_enumeration: start enumeration
start_enumeration: start numbered list
end_list: end list
end_list: end of list
start_dictation: dictation mode
start_dictation: start dictation
start_command_mode: command mode
start_command_mode: start command mode
start_command_mode: stop dictation
insert_comment: insert comment {text}
insert_comment: add comment {text}
replace_content: replace {old} with {new}
insert_content: insert {new} {relation} {anchor}
move_content: move {target} {relation} {anchor}
delete_last_word: delete last word
delete_word: delete word
delete_word: delete this word
delete_word: delete
delete_sentence: delete sentence
delete_sentence: delete this sentence
select_word: select word
select_word: select this word
select_sentence: select sentence
select_sentence: select this sentence
delete_content: delete {target}
nav_start_paragraph: start of paragraph
nav_start_paragraph: paragraph start
nav_end_paragraph: end of paragraph
nav_end_paragraph: paragraph end
jump_to_heading: jump to heading {text}
jump_to_heading: go to heading {text}
read_sentence: read sentence
read_sentence: read this sentence
read_sentence: read the sentence
read_paragraph: read paragraph
read_paragraph: read this paragraph
read_paragraph: read the paragraph
read_document: read document
read_document: read the document
read_document: read entire document
read_headings: read headings
read_headings: read the headings
read_headings: headings overview
repeat_last_sentence: repeat last sentence
repeat_last_sentence: repeat the last sentence
stop: stop
stop: stop reading
go_on: go on
go_on: continue
go_on: continue reading
undo: undo
undo: undo that
export: export as {format}
export: export {format}
export: export
"""


@dataclass(frozen=True)
class _Element:
    kind: str  # "lit" | "slot"
    value: str  # keyword text or slot name
    slot_type: str | None = None


@dataclass(frozen=True)
class Pattern:
    id: str
    intent: IntentKind
    template: str
    elements: tuple[_Element, ...]


class GrammarError(ValueError):
    pass


def _parse_template(intent: IntentKind, template: str, seq: int) -> Pattern:
    elements = []
    for part in template.split():
        if part.startswith("{") and part.endswith("}"):
            name = part[1:-1]
            slot_type = _SLOT_TYPES.get(name)
            if slot_type is None:
                raise GrammarError(f"Unknown slot {name!r} in template {template!r}")
            elements.append(_Element("slot", name, slot_type))
        else:
            elements.append(_Element("lit", part.lower()))
    if not elements:
        raise GrammarError(f"Empty template for {intent.value}")
    for i, el in enumerate(elements):
        if el.slot_type == "text" and i != len(elements) - 1:
            raise GrammarError(f"{{text}} must be the last element: {template!r}")
    return Pattern(f"{intent.value}#{seq}", intent, template, tuple(elements))


class PatternTable:
    """An ordered, immutable list of command templates.

    `reserved` holds every keyword used by any template; a bare phrase
    slot made up purely of reserved words is rejected, so fixed command
    phrases ("delete last word") never double as open-slot content.
    Delimited slots («last word») still reach such content.
    """

    def __init__(self, patterns: list[Pattern]):
        self.patterns = tuple(patterns)
        self.reserved = frozenset(
            el.value for p in patterns for el in p.elements if el.kind == "lit")

    @classmethod
    def from_grammar(cls, text: str) -> "PatternTable":
        patterns: list[Pattern] = []
        counts: dict[IntentKind, int] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if ":" not in line:
                raise GrammarError(f"line {lineno}: expected 'intent: template'")
            name, template = line.split(":", 1)
            try:
                intent = IntentKind(name.strip())
            except ValueError:
                raise GrammarError(f"line {lineno}: unknown intent {name.strip()!r}") from None
            if intent is IntentKind.DICTATE:
                raise GrammarError(f"line {lineno}: dictate is the fallback, not a template")
            seq = counts.get(intent, 0)
            counts[intent] = seq + 1
            patterns.append(_parse_template(intent, template.strip(), seq))
        return cls(patterns)

    def dump(self) -> str:
        return "\n".join(f"{p.intent.value}: {p.template}" for p in self.patterns) + "\n"


def load_grammar(path: str | Path) -> PatternTable:
    return PatternTable.from_grammar(Path(path).read_text(encoding="utf-8"))


DEFAULT_TABLE = PatternTable.from_grammar(DEFAULT_GRAMMAR)


# --- matching ---------------------------------------------------------------

def _skip_puncts(tokens: list[Token], pos: int) -> int:
    while pos < len(tokens) and isinstance(tokens[pos], Punct):
        pos += 1
    return pos


def _capture_delimited(tokens: list[Token], pos: int) -> tuple[list[str], int] | None:
    """Collect the words of a «...», “...”  or quote-delimited value."""
    first = tokens[pos]
    assert isinstance(first, Word)
    closer = _DELIMITERS.get(first.text[0])
    if closer is None:
        return None
    words: list[str] = []
    for j in range(pos, len(tokens)):
        token = tokens[j]
        if isinstance(token, Punct):
            continue
        text = token.text
        if j == pos:
            text = text[1:]
        closed = text.endswith(closer) and text != ""
        if closed:
            text = text[: -len(closer)]
        if text:
            words.append(text)
        if closed:
            return words, j + 1
    return None  # no closing delimiter


def _capture_bare(tokens: list[Token], pos: int, stop_words: tuple[str, ...] | None) -> tuple[list[str], int]:
    words: list[str] = []
    j = pos
    while j < len(tokens):
        token = tokens[j]
        if isinstance(token, Word):
            if stop_words and token.text.lower() in stop_words:
                break
            words.append(token.text)
        j += 1
    return words, j


def _stop_words_for(next_el: _Element | None) -> tuple[str, ...] | None:
    if next_el is None:
        return None
    if next_el.kind == "lit":
        return (next_el.value,)
    if next_el.slot_type == "relation":
        return _RELATION_WORDS
    return None


def _match_word(tokens: list[Token], pos: int, vocab) -> tuple[str, int] | None:
    pos = _skip_puncts(tokens, pos)
    if pos >= len(tokens):
        return None
    token = tokens[pos]
    if not isinstance(token, Word):
        return None
    word = token.text.lower()
    if vocab is not None and word not in vocab:
        return None
    return word, pos + 1


def match_template(pattern: Pattern, tokens: list[Token],
                   reserved: frozenset[str] = frozenset()) -> dict | None:
    """Match a template against the full token list; None if it does not fit.

    Keywords match words case-insensitively. Punctuation tokens between
    elements are transparent; inside slot values they are kept for text
    slots and dropped for phrase slots.
    """
    slots: dict = {}
    pos = 0
    elements = pattern.elements
    for idx, el in enumerate(elements):
        if el.kind == "lit":
            hit = _match_word(tokens, pos, (el.value,))
            if hit is None:
                return None
            pos = hit[1]
        elif el.slot_type == "level":
            hit = _match_word(tokens, pos, _LEVEL_WORDS)
            if hit is None:
                return None
            slots[el.value] = _LEVEL_WORDS[hit[0]]
            pos = hit[1]
        elif el.slot_type == "relation":
            hit = _match_word(tokens, pos, _RELATION_WORDS)
            if hit is None:
                return None
            slots[el.value] = hit[0]
            pos = hit[1]
        elif el.slot_type == "format":
            hit = _match_word(tokens, pos, _FORMAT_WORDS)
            if hit is None:
                return None
            slots[el.value] = hit[0]
            pos = hit[1]
        elif el.slot_type == "text":
            pos = _skip_puncts(tokens, pos)
            if pos >= len(tokens):
                return None
            if isinstance(tokens[pos], Word):
                delimited = _capture_delimited(tokens, pos)
            else:
                delimited = None
            if delimited is not None:
                words, pos = delimited
                if not words:
                    return None
                slots[el.value] = " ".join(words)
            else:
                slots[el.value] = render_literal(tokens[pos:])
                pos = len(tokens)
        elif el.slot_type == "phrase":
            pos = _skip_puncts(tokens, pos)
            if pos >= len(tokens) or not isinstance(tokens[pos], Word):
                return None
            delimited = _capture_delimited(tokens, pos)
            if delimited is not None:
                words, pos = delimited
            else:
                next_el = elements[idx + 1] if idx + 1 < len(elements) else None
                words, pos = _capture_bare(tokens, pos, _stop_words_for(next_el))
                if words and all(w.lower() in reserved for w in words):
                    return None
            if not words:
                return None
            slots[el.value] = words
    pos = _skip_puncts(tokens, pos)
    if pos != len(tokens):
        return None
    return slots


def parse(utterance: Utterance, ctx: NluContext, table: PatternTable | None = None) -> MatchResult:
    """Match an utterance to an intent, or fall back to dictation.

    A leading "please" is ignored for command matching. When no template
    fits and dictation is active, the whole utterance becomes document
    text; otherwise the result is a no-match.
    """
    table = DEFAULT_TABLE if table is None else table
    active = active_intents(ctx)
    tokens = list(utterance.tokens)
    cmd_tokens = tokens
    if tokens and isinstance(tokens[0], Word) and tokens[0].text.lower() == "please":
        cmd_tokens = tokens[1:]
    for pattern in table.patterns:
        if pattern.intent not in active:
            continue
        slots = match_template(pattern, cmd_tokens, table.reserved)
        if slots is not None:
            return MatchResult(Intent(pattern.intent, slots), pattern.id)
    if IntentKind.DICTATE in active:
        return MatchResult(Intent(IntentKind.DICTATE, {"tokens": tokens}), "dictate")
    return MatchResult(None, None)
