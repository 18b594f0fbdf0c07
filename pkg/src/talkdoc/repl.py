"""Interactive loop: stdin lines are utterances, responses print as "S: ...".

Meta-commands start with a colon:
    :save <path>    write the document to a JSON file
    :load <path>    replace the document from a JSON file
    :tap [n]        arm the single-tap interrupt to fire after n more
                    reading units (default 1); bare :tap with no active
                    reading reports no_reading
    :quit           leave
"""

from __future__ import annotations

import sys

from talkdoc.controller import handle_utterance, interrupt, new_session
from talkdoc.document import load_document, save_document
from talkdoc.editing import Focus


def repl(stdin=None, stdout=None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    session = new_session()
    prompt = stdin.isatty() if hasattr(stdin, "isatty") else False

    def out(text: str) -> None:
        print(text, file=stdout)

    if prompt:
        out("talkdoc repl; :quit to leave")
    for line in stdin:
        line = line.rstrip("\n")
        if line == ":quit":
            break
        if line.startswith(":save "):
            path = line[len(":save "):].strip()
            try:
                save_document(session.editor.document, path)
                out(f"saved {path}")
            except OSError as exc:
                out(f"error: {exc}")
            continue
        if line.startswith(":load "):
            path = line[len(":load "):].strip()
            try:
                doc = load_document(path)
            except (OSError, ValueError) as exc:
                out(f"error: {exc}")
                continue
            session.editor.document = doc
            session.editor.undo.clear()
            last = len(doc.blocks) - 1
            if last >= 0:
                session.editor.focus = Focus(last, len(doc.blocks[last].tokens))
            else:
                session.editor.focus = Focus(0, 0)
            out(f"loaded {path}")
            continue
        if line == ":tap" or line.startswith(":tap "):
            arg = line[4:].strip()
            if arg:
                session.interrupt_after = max(int(arg), 1)
            elif not interrupt(session):
                out("error: no_reading")
            continue
        responses = handle_utterance(session, line, drain=True)
        for response in responses:
            out(f"S: {response.literal}")
        if session.pending_export is not None:
            _fmt, body = session.pending_export
            session.pending_export = None
            stdout.write(body)
    return 0
