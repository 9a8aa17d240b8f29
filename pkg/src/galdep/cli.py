"""Command-line interface.

Exit codes: 0 ok, 1 usage, 2 parse error, 3 evaluation error,
4 property violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .engine import (
    Session, list_demos, load_manifest, open_demo, open_session, sidecar_data,
)
from .evaluator import EvalError, trace_to_text
from .paths import PathError, parse_selection_doc
from .primitives import registry_dump
from .surface.parser import ParseError
from .syntax import Env, Span
from .wire import WireError, decode_data_env, encode_val

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_EVAL = 3
EXIT_PROPERTY = 4


def _span_text(span: Span | None, source: str | None = None) -> str:
    if span is None:
        return ""
    if source is not None and span.file != "<prelude>":
        line = source.count("\n", 0, span.start) + 1
        col = span.start - (source.rfind("\n", 0, span.start) + 1) + 1
        return f" at {span.file}:{line}:{col}"
    return f" at {span.file}[{span.start}:{span.end}]"


def _open_from_args(args) -> Session:
    path = Path(args.file)
    if args.demo:
        return open_demo(args.file, lattice=args.colors)
    if path.suffix == ".json" or path.name.endswith(".manifest.json"):
        return load_manifest(path, lattice=args.colors)
    source = path.read_text()
    data = None
    if getattr(args, "data", None):
        data = decode_data_env(json.loads(Path(args.data).read_text()))
    else:
        data = sidecar_data(path)
    return open_session(source, file=path.name, data=data or Env(),
                        lattice=args.colors)


def _emit(args, payload: dict) -> None:
    print(json.dumps(payload, indent=None if args.compact else 2, sort_keys=True))


def cmd_eval(args) -> int:
    session = _open_from_args(args)
    view = session.view(args.view)
    out = {"value": encode_val(view.result, session.lattice)}
    _emit(args, out)
    if args.trace:
        print(trace_to_text(view.trace), file=sys.stderr)
    return EXIT_OK


def cmd_bwd(args) -> int:
    session = _open_from_args(args)
    doc = parse_selection_doc(args.select, session.lattice)
    res = session.bwd(doc, args.view)
    if args.json:
        _emit(args, {k: res[k] for k in ("env", "env_doc", "ambient", "highlights")})
    else:
        _emit(args, {"env_doc": res["env_doc"], "ambient": res["ambient"]})
        print(res["marked_source"])
    return EXIT_OK


def cmd_fwd(args) -> int:
    session = _open_from_args(args)
    doc = parse_selection_doc(args.select, session.lattice)
    ambient = None
    if args.ambient is not None:
        ambient = {"tt": session.lattice.top, "ff": session.lattice.bot}[args.ambient]
    if args.dual:
        res = session.fwd_dual(doc, args.view)
    else:
        res = session.fwd(doc, args.view, ambient=ambient)
    _emit(args, res)
    return EXIT_OK


def cmd_link(args) -> int:
    session = _open_from_args(args)
    doc = parse_selection_doc(args.select, session.lattice)
    res = session.link(doc, from_view=args.view, to_view=args.to)
    _emit(args, res)
    return EXIT_OK


def cmd_check(args) -> int:
    from .corpus import CorpusProgram, build_corpus
    from .surface import load_program
    from .syntax import Env as _Env

    programs = build_corpus()
    if args.corpus:
        for path in sorted(Path(args.corpus).glob("*.fld")):
            data = sidecar_data(path) or _Env()
            prog = load_program(path.read_text(), file=path.name)
            programs.append(CorpusProgram(path.stem, data, prog.core))
    from . import checks as checks_mod

    report = checks_mod.Report()
    report.suites.append(checks_mod.check_eval_galois(programs, args.max_positions))
    report.suites.append(checks_mod.check_match_galois())
    report.suites.append(checks_mod.check_lookup_galois())
    report.suites.append(checks_mod.check_close_defs_galois())
    report.suites.append(checks_mod.check_primitives())
    report.suites.append(checks_mod.check_dual_galois(programs, args.max_positions))
    report.suites.append(checks_mod.check_desugar_galois())
    report.suites.append(checks_mod.check_monotonicity(programs, args.monotonicity_pairs))
    report.suites.append(checks_mod.check_idempotent_composites(programs, args.max_positions))
    report.suites.append(checks_mod.check_shape_preservation(programs, args.max_positions))
    report.suites.append(checks_mod.check_hole_insensitivity(programs))
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_PROPERTY


def cmd_ops(args) -> int:
    _emit(args, {"primitives": registry_dump()})
    return EXIT_OK


def cmd_examples(args) -> int:
    _emit(args, {"examples": list_demos()})
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="galdep",
        description="Trace a program, then answer selection queries over the "
                    "trace: backward demand, forward availability, their "
                    "De Morgan duals, and output-to-output links.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_select=False):
        p.add_argument("file", help="program (.fld), manifest (.manifest.json) or demo name")
        p.add_argument("--demo", action="store_true", help="treat FILE as a bundled demo name")
        p.add_argument("--data", help="JSON file of named input values")
        p.add_argument("--view", help="view name for manifest sessions")
        p.add_argument("--colors", type=int, default=None,
                       help="use a k-bit selection lattice instead of the two-point one")
        p.add_argument("--compact", action="store_true", help="single-line JSON output")
        if with_select:
            p.add_argument("--select", required=True,
                           help="selection document (JSON; bare keys allowed)")

    p = sub.add_parser("eval", help="evaluate and print the result value")
    common(p)
    p.add_argument("--trace", action="store_true", help="dump the trace to stderr")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("bwd", help="backward demand of an output selection")
    common(p, with_select=True)
    p.add_argument("--json", action="store_true", help="machine output, no marked source")
    p.set_defaults(fn=cmd_bwd)

    p = sub.add_parser("fwd", help="forward availability of an input selection")
    common(p, with_select=True)
    p.add_argument("--ambient", choices=["tt", "ff"], default=None)
    p.add_argument("--dual", action="store_true",
                   help="complemented forward pass (outputs needing the selection)")
    p.set_defaults(fn=cmd_fwd)

    p = sub.add_parser("link", help="link a selection to another view over shared data")
    common(p, with_select=True)
    p.add_argument("--to", help="destination view (default: the other view)")
    p.set_defaults(fn=cmd_link)

    p = sub.add_parser("check", help="run every property suite")
    p.add_argument("--corpus", help="directory of extra .fld programs")
    p.add_argument("--max-positions", type=int, default=12)
    p.add_argument("--monotonicity-pairs", type=int, default=80)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("ops", help="dump the primitive registry")
    p.add_argument("--compact", action="store_true")
    p.set_defaults(fn=cmd_ops)

    p = sub.add_parser("examples", help="list bundled demos")
    p.add_argument("--compact", action="store_true")
    p.set_defaults(fn=cmd_examples)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.fn(args)
    except ParseError as e:
        print(f"parse error: {e.message}{_span_text(e.span)}", file=sys.stderr)
        return EXIT_PARSE
    except EvalError as e:
        print(f"evaluation error: {e.message}{_span_text(e.span)}", file=sys.stderr)
        return EXIT_EVAL
    except (PathError, WireError, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
