#!/usr/bin/env python3
"""
Command-line front end.

Commands:
    check <file>...              run named tasks on geometry files
    examples list                list the built-in catalog
    examples emit <name>         write a catalog geometry file
    identity <name> <file>       evaluate a raw identity residual
    tasks                        list the task registry

Exit codes: 0 all verdicts pass, 1 a task failed, 2 configuration or parse
error, 3 geometry error (degenerate data, violated precondition, sampling).

Author: weylcheck maintainers
Date: 2025
Version: 1.0.0
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .catalog import catalog, entry
from .config import RunSettings, load_config
from .declarations import GeometryDeclaration, load_declaration
from .errors import EXIT_TASK_FAILURE, WeylCheckError
from .reporting import VerdictReport, generate_markdown_report, render_json, render_table
from .tasks import IDENTITIES, TASKS, applicable_tasks, get_task, run_identity, run_tasks


logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weyl_check",
        description="Numerical verification of harmonic morphisms and twistorial maps between Weyl spaces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--env-file", help="Read run defaults from this .env file")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="Run tasks on geometry files")
    check.add_argument("files", nargs="+", help="Geometry files (TOML)")
    check.add_argument("--task", action="append", dest="tasks", metavar="NAME",
                       help="Task to run (repeatable); defaults to the file's [run] tasks")
    _add_run_options(check)
    check.add_argument("--orientation", type=int, choices=(1, -1), help="Override the domain orientation")
    check.add_argument("--markdown", metavar="FILE", help="Also write a markdown summary")

    examples = commands.add_parser("examples", help="Built-in catalog")
    example_commands = examples.add_subparsers(dest="examples_command", required=True)
    example_commands.add_parser("list", help="List catalog entries")
    emit = example_commands.add_parser("emit", help="Write a catalog geometry file")
    emit.add_argument("name", help="Catalog entry name")
    emit.add_argument("--output-dir", default=".", help="Directory to write <name>.toml into")

    identity = commands.add_parser("identity", help="Evaluate a raw identity residual")
    identity.add_argument("name", help=f"One of: {', '.join(IDENTITIES)}")
    identity.add_argument("file", help="Geometry file (TOML)")
    _add_run_options(identity)

    commands.add_parser("tasks", help="List registered tasks")
    return parser


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--points", type=int, help="Sample points per task")
    parser.add_argument("--seed", type=int, help="Halton offset")
    parser.add_argument("--tol", type=float, help="Relative tolerance")
    parser.add_argument("--workers", type=int, help="Point-level worker threads")
    parser.add_argument("--json", action="store_true", help="Emit a JSON report instead of a table")
    parser.add_argument("--details", action="store_true", help="Include per-point residuals in JSON")
    parser.add_argument("--output", metavar="FILE", help="Write the report to FILE instead of stdout")
    parser.add_argument("--log-level", type=str.upper, help="Logging level (DEBUG, INFO, ...)")


def _progress(message: str, json_mode: bool) -> None:
    print(message, file=sys.stderr if json_mode else sys.stdout)


def _settings_for(base: RunSettings, decl: GeometryDeclaration, args) -> RunSettings:
    """Built-in defaults < .env < the file's [run] table < command-line flags."""
    run = decl.run
    settings = base.with_overrides(points=run.get("points"), seed=run.get("seed"), tol=run.get("tol"),
                                   workers=run.get("workers"))
    return settings.with_overrides(points=args.points, seed=args.seed, tol=args.tol, workers=args.workers,
                                   orientation=getattr(args, "orientation", None), log_level=args.log_level)


def _emit(text: str, output: Optional[str], json_mode: bool) -> None:
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
        _progress(f"💾 Report written to {output}", json_mode)
    else:
        print(text)


def _render(reports: List[VerdictReport], source: str, args) -> str:
    if args.json:
        return render_json(reports, source, include_details=args.details)
    return render_table(reports)


def cmd_check(args, base: RunSettings) -> int:
    reports: List[VerdictReport] = []
    if args.tasks:
        for name in args.tasks:
            get_task(name)
    for path in args.files:
        decl = load_declaration(path, base.floor)
        settings = _settings_for(base, decl, args)
        if settings.orientation is not None:
            decl = decl.reoriented(settings.orientation)
        names = args.tasks or decl.tasks or applicable_tasks(decl)
        _progress(f"🔍 {decl.name}: {len(names)} task(s), {settings.points} points, tol {settings.tol:g}", args.json)
        for report in run_tasks(decl, names, settings, details=args.details):
            report.config["geometry"] = decl.name
            reports.append(report)

    source = ", ".join(args.files)
    _emit(_render(reports, source, args), args.output, args.json)
    if args.markdown:
        Path(args.markdown).write_text(generate_markdown_report(reports, source), encoding="utf-8")
        _progress(f"📝 Markdown summary written to {args.markdown}", args.json)

    failed = [r.task for r in reports if r.failed]
    if failed:
        _progress(f"❌ {len(failed)} task(s) failed: {', '.join(failed)}", args.json)
        return EXIT_TASK_FAILURE
    _progress(f"✅ All {len(reports)} task(s) consistent", args.json)
    return 0


def cmd_identity(args, base: RunSettings) -> int:
    decl = load_declaration(args.file, base.floor)
    settings = _settings_for(base, decl, args)
    report = run_identity(decl, args.name, settings, details=args.details)
    report.config["geometry"] = decl.name
    _emit(_render([report], args.file, args), args.output, args.json)
    if report.failed:
        _progress(f"❌ identity {args.name} does not vanish (max residual {report.max_residual:.3e})", args.json)
        return EXIT_TASK_FAILURE
    _progress(f"✅ identity {args.name} holds (max residual {report.max_residual:.3e})", args.json)
    return 0


def cmd_examples(args) -> int:
    if args.examples_command == "list":
        print("📚 Catalog geometries:")
        for e in catalog():
            print(f"  {e.name:<26} {len(e.expected):>2} task(s)  {e.note}")
        return 0
    found = entry(args.name)
    directory = Path(args.output_dir)
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / found.filename
    target.write_bytes(found.text.encode("utf-8"))
    print(f"✅ Wrote {target}")
    return 0


def cmd_tasks() -> int:
    print("🧰 Registered tasks:")
    for name, task in TASKS.items():
        print(f"  {name:<24} {task.description}")
    print("\n🧪 Identities (use with `identity <name> <file>`):")
    for name, identity in IDENTITIES.items():
        print(f"  {name:<24} {identity.description}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point.

    Returns:
        int: Process exit code.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    json_mode = getattr(args, "json", False)

    try:
        base = load_config(args.env_file)
        level = getattr(args, "log_level", None) or base.log_level
        base = base.with_overrides(log_level=level)
        logging.basicConfig(level=getattr(logging, base.log_level),
                            format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)

        if args.command == "check":
            return cmd_check(args, base)
        if args.command == "identity":
            return cmd_identity(args, base)
        if args.command == "examples":
            return cmd_examples(args)
        return cmd_tasks()
    except WeylCheckError as e:
        _progress(f"❌ {type(e).__name__}: {e}", json_mode)
        return e.exit_code
    except KeyboardInterrupt:
        _progress("⚠️  Interrupted", json_mode)
        return 130


if __name__ == "__main__":
    sys.exit(main())
