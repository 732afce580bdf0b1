"""
Command-line interface for the stt-kernel typechecker.

Commands:
- typecheck: check .rzk / .rzk.md files, concatenated in argument order
- normalize: print the normal form of an expression in a loaded context
- tope:      decide a tope entailment query, with a countermodel on failure
- parse:     parse files and print them back (or dump their syntax trees)
- inventory: list the named objects of the bundled corpus with their types

Exit codes: 0 success, 1 check errors, 2 usage or IO errors.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional, Sequence

from rich.console import Console
from rich.markup import escape

from config import settings
from corpus.harness import export_inventory
from kernel.errors import InternalError, KernelError, SourceUnavailable, UsageError
from models.schemas import DeclarationStatus, Diagnostic, FileReport, RunReport
from pipeline import TypecheckOrchestrator
from syntax import dump_ast, parse_module, print_module
from topes import answer_query, parse_query

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERRORS = 1
EXIT_USAGE = 2


# === Output ===

class Reporter:
    """Renders results; human text via rich, or JSON lines under --machine."""

    def __init__(self, machine: bool = False, color: bool = True, timing: bool = True):
        self.machine = machine
        self.timing = timing
        self.console = Console(no_color=not color, highlight=False, soft_wrap=True, emoji=False)
        self.errors = Console(stderr=True, no_color=not color, highlight=False, soft_wrap=True, emoji=False)

    def line(self, text: str = "") -> None:
        self.console.print(text)

    def json(self, record: dict) -> None:
        print(json.dumps(record, ensure_ascii=False, sort_keys=True))

    def diagnostic(self, d: Diagnostic) -> None:
        if self.machine:
            print(d.model_dump_json())
            return
        style = "bold red" if d.is_error else "bold yellow"
        label = "error" if d.is_error else "warning"
        self.console.print(f"[{style}]{label}[{escape(d.code.value)}][/{style}]: {escape(d.message)}")
        if d.location is not None:
            loc = d.location
            self.console.print(f"  [blue]-->[/blue] {escape(loc.file)}:{loc.line}:{loc.column}")
        if d.expected is not None:
            self.console.print(f"  expected: {escape(d.expected)}")
        if d.actual is not None:
            self.console.print(f"  actual:   {escape(d.actual)}")

    def file_report(self, file: FileReport, diagnostics: Sequence[Diagnostic]) -> None:
        if not self.machine:
            self.console.print(f"[bold]Checking {escape(file.path)}[/bold]")
            total = len(file.declarations)
            for i, decl in enumerate(file.declarations, 1):
                mark = "[green]✓[/green]" if decl.status == DeclarationStatus.CHECKED else "[red]✗[/red]"
                self.console.print(f"[ {i} / {total} ] {mark} {escape(decl.name)}")
        for d in diagnostics:
            self.diagnostic(d)

    def summary(self, report: RunReport) -> None:
        if self.machine:
            record = {
                "summary": True,
                "checked": report.checked,
                "failed": report.failed,
                "errors": report.errors,
                "warnings": report.warnings,
            }
            if self.timing:
                record["wall_time_seconds"] = round(report.wall_time_seconds or 0.0, 3)
            self.json(record)
            return
        style = "green" if report.ok else "red"
        self.console.print(
            f"[{style}]Summary: {report.checked} checked, {report.failed} failed, "
            f"{report.errors} errors, {report.warnings} warnings[/{style}]"
        )
        if self.timing and report.wall_time_seconds is not None:
            self.console.print(f"[dim]Time: {report.wall_time_seconds:.2f}s[/dim]")

    def failure(self, error: KernelError) -> None:
        """Usage and IO problems go to stderr (stdout under --machine)."""
        d = error.to_diagnostic()
        if self.machine:
            print(d.model_dump_json())
        else:
            self.errors.print(f"[bold red]error[{escape(d.code.value)}][/bold red]: {escape(d.message)}")


def _group_by_file(report: RunReport) -> List[List[Diagnostic]]:
    """Diagnostics of each file, in report order; unlocated ones go with the last file."""
    paths = [f.path for f in report.files]
    groups: List[List[Diagnostic]] = [[] for _ in paths]
    if not groups:
        return groups
    for d in report.diagnostics:
        index = paths.index(d.location.file) if d.location and d.location.file in paths else len(paths) - 1
        groups[max(index, 0)].append(d)
    return groups


# === Commands ===

def cmd_typecheck(args: argparse.Namespace, out: Reporter) -> int:
    """Typecheck files in order; exit 0 iff there are no errors."""
    report, _ = TypecheckOrchestrator().typecheck_paths(args.paths)
    for file, diagnostics in zip(report.files, _group_by_file(report)):
        out.file_report(file, diagnostics)
    out.summary(report)
    return EXIT_OK if report.ok else EXIT_ERRORS


def cmd_normalize(args: argparse.Namespace, out: Reporter) -> int:
    """Normalize an expression in the context of the given files."""
    orchestrator = TypecheckOrchestrator()
    report, env = orchestrator.typecheck_paths(args.paths)
    if not report.ok:
        for d in report.diagnostics:
            out.diagnostic(d)
        return EXIT_ERRORS
    try:
        normal_form, type_ = orchestrator.normalize(args.expression, env)
    except KernelError as e:
        out.diagnostic(e.to_diagnostic())
        return EXIT_ERRORS
    if out.machine:
        out.json({"normal_form": normal_form, "type": type_})
    else:
        out.line(escape(normal_form))
        if args.show_type:
            out.line(f"[dim]: {escape(type_)}[/dim]")
    return EXIT_OK


def cmd_tope(args: argparse.Namespace, out: Reporter) -> int:
    """Decide `<cube-vars> | <hyps> |- <goal>`; both answers exit 0."""
    try:
        query = parse_query(args.query)
    except KernelError as e:
        out.failure(e)
        return EXIT_USAGE
    try:
        answer = answer_query(query, args.max_cube_vars)
    except KernelError as e:
        out.diagnostic(e.to_diagnostic())
        return EXIT_ERRORS
    countermodel = answer.countermodel.render() if answer.countermodel else None
    if out.machine:
        out.json({"entailed": answer.entailed, "countermodel": countermodel})
    elif answer.entailed:
        out.line("[green]ENTAILED[/green]")
    else:
        out.line("[red]NOT-ENTAILED[/red]")
        if countermodel is not None:
            out.line(f"countermodel: {escape(countermodel)}")
    return EXIT_OK


def cmd_parse(args: argparse.Namespace, out: Reporter) -> int:
    """Parse only; print each file back, or its structural dump."""
    sources = TypecheckOrchestrator().load_sources(args.paths)
    status = EXIT_OK
    for source in sources:
        try:
            module = parse_module(source.text, source.path)
        except KernelError as e:
            out.diagnostic(e.to_diagnostic())
            status = EXIT_ERRORS
            continue
        text = dump_ast(module) if args.dump_ast else print_module(module)
        sys.stdout.write(text)
    return status


def cmd_inventory(args: argparse.Namespace, out: Reporter) -> int:
    """Print `name : type  (file)` for every object of the corpus inventory."""
    try:
        items = export_inventory(args.manifest)
    except KernelError as e:
        out.diagnostic(e.to_diagnostic())
        return EXIT_ERRORS
    for item in items:
        if out.machine:
            out.json(item.model_dump())
        else:
            out.line(f"{escape(item.name)} : {escape(item.type)}  [dim]({escape(item.file)})[/dim]")
    return EXIT_OK


COMMANDS = {
    "typecheck": cmd_typecheck,
    "normalize": cmd_normalize,
    "tope": cmd_tope,
    "parse": cmd_parse,
    "inventory": cmd_inventory,
}


# === Entry point ===

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--machine", action="store_true",
                        help="Emit JSON lines on stdout instead of human-readable text")
    common.add_argument("--no-color", action="store_true", help="Disable ANSI styling (also: NO_COLOR)")
    common.add_argument("--no-timing", action="store_true", help="Omit the wall-time line")
    common.add_argument("--max-cube-vars", type=int, default=None, metavar="N",
                        help=f"Bound for the tope model oracle (default: {settings.max_cube_vars})")
    common.add_argument("--log-level", default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help=f"Log level for stderr (default: {settings.log_level})")

    parser = argparse.ArgumentParser(
        prog="stt",
        description="Typechecker for simplicial type theory with shapes, topes and extension types",
    )
    parser.add_argument("--version", action="version", version=f"{settings.app_name} {settings.app_version}")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    typecheck = subparsers.add_parser("typecheck", parents=[common], help="Typecheck source files")
    typecheck.add_argument("paths", nargs="+", help=".rzk or .rzk.md files, checked in this order")

    normalize = subparsers.add_parser("normalize", parents=[common], help="Normalize an expression")
    normalize.add_argument("expression", help="Expression to normalize")
    normalize.add_argument("paths", nargs="*", help="Files providing the context")
    normalize.add_argument("--show-type", action="store_true", help="Also print the normalized type")

    tope = subparsers.add_parser("tope", parents=[common], help="Decide a tope entailment")
    tope.add_argument("query", help="`<cube-vars> | <hyps> |- <goal>`")

    parse = subparsers.add_parser("parse", parents=[common], help="Parse files without checking them")
    parse.add_argument("paths", nargs="+", help=".rzk or .rzk.md files")
    parse.add_argument("--dump-ast", action="store_true", help="Print a structural dump instead of source")

    inventory = subparsers.add_parser("inventory", parents=[common], help="List the corpus inventory")
    inventory.add_argument("--manifest", default=None, help=f"Manifest file (default: {settings.manifest_path})")

    return parser


def _configure_logging(level: Optional[str]) -> None:
    level = level or ("DEBUG" if settings.debug else settings.log_level)
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main CLI entry point.

    Args:
        argv: Command line arguments (default: sys.argv[1:])

    Returns:
        Exit code (0 = success, 1 = check errors, 2 = usage/IO error)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help/--version and 2 for bad usage.
        return int(e.code or 0)

    if args.command is None:
        parser.print_help()
        return EXIT_USAGE

    _configure_logging(args.log_level)
    if args.max_cube_vars is not None:
        settings.max_cube_vars = args.max_cube_vars

    out = Reporter(
        machine=args.machine,
        color=settings.use_color and not args.no_color,
        timing=settings.timing and not args.no_timing,
    )
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, SourceUnavailable) as e:
        out.failure(e)
        return EXIT_USAGE
    except InternalError as e:
        logger.exception(f"Internal error in {args.command}: {e}")
        out.errors.print(f"[bold red]internal error[/bold red]: {escape(str(e))}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
