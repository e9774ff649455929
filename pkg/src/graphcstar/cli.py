"""``graphcstar`` command-line tool.

Exit codes: 0 success (for ``check-k``: Condition (K) holds), 1 the checked
property fails, 2 input or parse error, 3 precondition error.
"""

from __future__ import annotations

import argparse
import json
import pathlib
import sys

from . import report
from .completion import Subgraph, entrance_completion, limit_sequence
from .condition_k import check_condition_k
from .graph import Graph, GraphError, ParseError, PreconditionError, parse_graph

EXIT_OK, EXIT_FAILS, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read_graph(path: str | None) -> Graph:
    name = path or "<stdin>"
    try:
        text = sys.stdin.read() if path in (None, "-") else pathlib.Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{name}: {exc.strerror or exc}") from None
    except UnicodeDecodeError as exc:
        raise InputError(f"{name}: not UTF-8 text ({exc.reason})") from None
    try:
        return parse_graph(text)
    except ParseError as exc:
        raise InputError(f"{name}:{exc.lineno}: {exc.message}") from None
    except GraphError as exc:
        raise InputError(f"{name}: {exc}") from None


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(report.dumps(payload))
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    rep = report.analysis_report(_read_graph(args.input))
    _emit(args, rep, report.render_analysis(rep))
    return EXIT_OK


def cmd_check_k(args) -> int:
    g = _read_graph(args.input)
    rep = report.check_k_report(g)
    _emit(args, rep, report.render_check_k(rep))
    return EXIT_OK if rep["conditionK"]["holds"] else EXIT_FAILS


def cmd_ideals(args) -> int:
    rep = report.ideals_report(_read_graph(args.input))
    _emit(args, rep, report.render_ideals(rep))
    return EXIT_OK


def cmd_ndim(args) -> int:
    rep = report.ndim_report(_read_graph(args.input))
    _emit(args, rep, report.render_verdict(rep))
    return EXIT_OK


def cmd_series(args) -> int:
    rep = report.series_report(_read_graph(args.input))
    _emit(args, rep, report.render_series(rep))
    return EXIT_OK


def cmd_complete(args) -> int:
    host = _read_graph(args.host)
    sub = _read_graph(args.sub)
    try:
        f = Subgraph(sub, host)
    except GraphError as exc:
        raise PreconditionError(f"--sub is not a subgraph of --host: {exc}") from None
    done = entrance_completion(host, f)
    rep = report.subgraph_report(done)
    _emit(args, rep, done.graph.serialize())
    return EXIT_OK


def cmd_limit_seq(args) -> int:
    host = _read_graph(args.host)
    stages = limit_sequence(host)
    if args.out_dir:
        out = pathlib.Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        width = len(str(len(stages)))
        for i, st in enumerate(stages, 1):
            (out / f"stage_{i:0{width}d}.graph").write_text(st.graph.serialize(), encoding="utf-8")
    if args.format == "json":
        sys.stdout.write(json.dumps([st.graph.serialize() for st in stages], indent=2) + "\n")
    else:
        for i, st in enumerate(stages, 1):
            sys.stdout.write(f"# stage {i}\n{st.graph.serialize()}")
    return EXIT_OK


def cmd_ck_verify(args) -> int:
    g = _read_graph(args.input)
    rep = report.ck_report(g, dump=args.dump)
    _emit(args, rep, report.render_ck(rep))
    return EXIT_OK if rep["relations"]["ok"] else EXIT_FAILS


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")

    with_input = argparse.ArgumentParser(add_help=False, parents=[common])
    with_input.add_argument("--input", metavar="FILE", help="graph file (default: stdin)")

    parser = argparse.ArgumentParser(prog="graphcstar", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {report.__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, help_ in [
        ("analyze", cmd_analyze, "full analysis report"),
        ("check-k", cmd_check_k, "Condition (K) with witnesses"),
        ("ideals", cmd_ideals, "saturated hereditary sets, maximal chain, ideal structure"),
        ("ndim", cmd_ndim, "nuclear-dimension verdict with its rule chain"),
        ("series", cmd_series, "composition series along the maximal chain"),
    ]:
        p = sub.add_parser(name, parents=[with_input], help=help_)
        p.set_defaults(func=func)

    p = sub.add_parser("ck-verify", parents=[with_input], help="exact Cuntz-Krieger matrix check (acyclic graphs)")
    p.add_argument("--dump", action="store_true", help="include the matrices in JSON output")
    p.set_defaults(func=cmd_ck_verify)

    p = sub.add_parser("complete", parents=[common], help="(K)-entrance completion of a subgraph")
    p.add_argument("--host", metavar="FILE", required=True)
    p.add_argument("--sub", metavar="FILE", required=True)
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("limit-seq", parents=[common], help="increasing completions exhausting the host")
    p.add_argument("--host", metavar="FILE", required=True)
    p.add_argument("--out-dir", metavar="DIR", help="also write numbered stage files here")
    p.set_defaults(func=cmd_limit_seq)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
