"""Golden-dialogue scripts: a line-oriented format and a replay runner.

Script syntax, one step per line:

    U: <utterance>          feed a user turn
    S: <literal>            expect the next response, byte-exact
    EXPORT <format>         expect the export body that follows, up to END
    ...body lines...
    END

Blank lines and '#' comments are ignored outside export bodies. Reading
chunks are pulled only as the script expects them, so a "U: Stop" after
two expected chunks pauses the reading exactly there, the way a listener
interrupts mid-delivery.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass
from pathlib import Path

from talkdoc.controller import handle_utterance, new_session, pump_reading
from talkdoc.document import export_markdown, export_plain

EXPORTERS = {"markdown": export_markdown, "plain": export_plain}


class ScriptError(Exception):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class UserTurn:
    lineno: int
    text: str


@dataclass(frozen=True)
class ExpectResponse:
    lineno: int
    literal: str


@dataclass(frozen=True)
class ExpectExport:
    lineno: int
    format: str
    body: str


Step = UserTurn | ExpectResponse | ExpectExport


def parse_script(text: str) -> list[Step]:
    steps: list[Step] = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i]
        lineno = i + 1
        i += 1
        if not line.strip() or line.startswith("#"):
            continue
        if line.startswith("U: "):
            steps.append(UserTurn(lineno, line[3:]))
        elif line.startswith("S: ") or line == "S:":
            steps.append(ExpectResponse(lineno, line[3:] if len(line) > 2 else ""))
        elif line.startswith("EXPORT "):
            fmt = line[len("EXPORT "):].strip()
            if fmt not in EXPORTERS:
                raise ScriptError(lineno, f"unknown export format {fmt!r}")
            body_lines = []
            while i < len(lines) and lines[i] != "END":
                body_lines.append(lines[i])
                i += 1
            if i >= len(lines):
                raise ScriptError(lineno, "EXPORT block missing END")
            i += 1  # consume END
            body = "\n".join(body_lines)
            if body:
                body += "\n"
            steps.append(ExpectExport(lineno, fmt, body))
        else:
            raise ScriptError(lineno, f"unrecognized step: {line!r}")
    _check_shape(steps)
    return steps


def _check_shape(steps: list[Step]) -> None:
    expecting = False
    for step in steps:
        if isinstance(step, UserTurn):
            if expecting:
                raise ScriptError(step.lineno, "user turn without an expected response before it")
            expecting = True
        elif isinstance(step, ExpectResponse):
            expecting = False
    if expecting:
        raise ScriptError(steps[-1].lineno, "script ends with an unanswered user turn")


@dataclass
class StepResult:
    lineno: int
    shown: str
    ok: bool
    diff: str = ""


@dataclass
class Report:
    path: str
    results: list[StepResult]

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def failures(self) -> int:
        return sum(1 for r in self.results if not r.ok)

    def render(self) -> str:
        lines = [f"script: {self.path}"]
        for r in self.results:
            lines.append(f"{'ok  ' if r.ok else 'FAIL'} {r.lineno:4d}  {r.shown}")
            if r.diff:
                lines.extend("      " + d for d in r.diff.splitlines())
        verdict = "PASS" if self.passed else f"FAIL ({self.failures} mismatches)"
        lines.append(f"{verdict}: {len(self.results)} steps")
        return "\n".join(lines) + "\n"


def _diff(expected: str, actual: str) -> str:
    return "\n".join(
        difflib.unified_diff(expected.splitlines(), actual.splitlines(),
                             fromfile="expected", tofile="actual", lineterm="")
    )


def run_script(path: str | Path) -> Report:
    """Replay a script against a fresh session and compare every expectation."""
    text = Path(path).read_text(encoding="utf-8")
    steps = parse_script(text)
    session = new_session()
    pending = []  # responses not yet matched against an S: step
    results = []
    for step in steps:
        if isinstance(step, UserTurn):
            pending.extend(handle_utterance(session, step.text, drain=False))
            session.pending_export = None
            results.append(StepResult(step.lineno, f"U: {step.text}", ok=True))
        elif isinstance(step, ExpectResponse):
            if not pending:
                chunk = pump_reading(session)
                if chunk is not None:
                    pending.append(chunk)
            if not pending:
                results.append(StepResult(step.lineno, f"S: {step.literal}", ok=False,
                                          diff=_diff(step.literal, "<no response>")))
                continue
            actual = pending.pop(0)
            ok = actual.literal == step.literal
            results.append(StepResult(step.lineno, f"S: {step.literal}", ok=ok,
                                      diff="" if ok else _diff(step.literal, actual.literal)))
        else:
            actual_body = EXPORTERS[step.format](session.editor.document)
            ok = actual_body == step.body
            results.append(StepResult(step.lineno, f"EXPORT {step.format}", ok=ok,
                                      diff="" if ok else _diff(step.body, actual_body)))
    return Report(str(path), results)
