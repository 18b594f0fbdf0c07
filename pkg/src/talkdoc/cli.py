"""Command line entry points: repl, run, serve, export.

Exit codes: 0 success, 1 golden-script mismatch, 2 usage or IO error.
"""

from __future__ import annotations

import argparse
import os
import sys

from talkdoc.document import export_markdown, export_plain, load_document
from talkdoc.repl import repl
from talkdoc.script import ScriptError, run_script
from talkdoc.server import DEFAULT_PORT, serve


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="talkdoc",
                                     description="Conversational document editing engine")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("repl", help="interactive session on stdin/stdout")

    run_p = sub.add_parser("run", help="replay a golden dialogue script")
    run_p.add_argument("script", help="path to a .dialog script")
    run_p.add_argument("--report", choices=["text"], default="text",
                       help="report format (text)")

    serve_p = sub.add_parser("serve", help="session server speaking the line protocol")
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--port", type=int,
                         default=int(os.environ.get("TALKDOC_PORT", DEFAULT_PORT)))
    serve_p.add_argument("--chunk-delay-ms", type=int, default=200,
                         help="pause between reading chunks, for live interrupts")

    export_p = sub.add_parser("export", help="export a saved document")
    export_p.add_argument("session", help="path to a saved document JSON file")
    export_p.add_argument("--format", choices=["markdown", "plain"], default="markdown")
    export_p.add_argument("--output", default="-", help="output file, '-' for stdout")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "repl":
        return repl()
    if args.command == "run":
        try:
            report = run_script(args.script)
        except (OSError, ScriptError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        sys.stdout.write(report.render())
        return 0 if report.passed else 1
    if args.command == "serve":
        try:
            serve(args.host, args.port, chunk_delay=args.chunk_delay_ms / 1000.0)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        return 0
    if args.command == "export":
        try:
            doc = load_document(args.session)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        body = export_markdown(doc) if args.format == "markdown" else export_plain(doc)
        if args.output == "-":
            sys.stdout.write(body)
        else:
            try:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(body)
            except OSError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 2
        return 0
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
