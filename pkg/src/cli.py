"""Command-line interface for orthoforms.

Every command writes exactly one JSON document to standard output. Diagnostics,
logs and the fuzz progress display go to standard error.

Exit codes: 0 when the checked property holds, 1 when it does not, 2 on invalid
input, 3 when an internal cross-check fails.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from rich.console import Console
from rich.markup import escape
from rich.progress import BarColumn, Progress, SpinnerColumn, TaskProgressColumn, TextColumn

from src import documents, reproductions
from src.app import FuzzApp
from src.config import CliDefaults, GenConfig
from src.errors import DocumentError, InvariantViolation, NotOrthogonal, NotOrthogonalityPreserving, OrthoformsError
from src.forms import (
    complexify_form,
    decompose,
    is_extension_orthogonal,
    is_orthogonal_form,
    orthogonality_oracle,
    phi2_eliminable,
    representation_space_dim,
)
from src.preservers import analyze, is_biorthogonality_preserving
from src.utils import ensure_dir, setup_logging

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_INVARIANT = 3


def build_parser(defaults: CliDefaults) -> argparse.ArgumentParser:
    """Creates the argument parser with one sub-command per operation.

    Args:
        defaults: Environment-derived defaults for seeds, trials and logging.

    Returns:
        The configured parser.
    """
    parser = argparse.ArgumentParser(prog="orthoforms", description="Orthogonal forms and preservers on C(K)^tau.")
    parser.add_argument("--float-input", action="store_true", help="Accept JSON numbers and rationalize them.")
    parser.add_argument("--tolerance", type=float, default=None, help="Rationalization tolerance (with --float-input).")
    parser.add_argument("--log-level", default=defaults.log_level, help="Logging level name.")
    commands = parser.add_subparsers(dest="command", required=True)

    check_form = commands.add_parser("check-form", help="Decide orthogonality of a form.")
    check_form.add_argument("form", type=Path)
    check_form.add_argument("--seed", type=int, default=defaults.seed)

    decompose_cmd = commands.add_parser("decompose", help="Write V(x,y) = phi1(xy) + phi2(xy*).")
    decompose_cmd.add_argument("form", type=Path)
    decompose_cmd.add_argument("--out", type=Path, default=None)

    complexify = commands.add_parser("complexify", help="Check orthogonality of the complex extension.")
    complexify.add_argument("form", type=Path)

    analyze_map = commands.add_parser("analyze-map", help="Recover the support map and weights of an OP map.")
    analyze_map.add_argument("map", type=Path)

    check_biop = commands.add_parser("check-biop", help="Decide bi-orthogonality preservation.")
    check_biop.add_argument("map", type=Path)

    reproduce = commands.add_parser("reproduce", help="Rebuild a worked example.")
    reproduce.add_argument("--example", required=True, choices=["complexification", "biop"])

    fuzz = commands.add_parser("fuzz", help="Run property suites.")
    fuzz.add_argument("--suite", default="all")
    fuzz.add_argument("--trials", type=int, default=defaults.trials)
    fuzz.add_argument("--seed", type=int, default=defaults.seed)
    fuzz.add_argument("--max-f", type=int, default=GenConfig.max_fixed)
    fuzz.add_argument("--max-cycles", type=int, default=GenConfig.max_cycles)
    fuzz.add_argument("--mutate", action="store_true", help="Inject a defect into every generated object.")
    return parser


def _pair(pair) -> Optional[list[dict]]:
    return None if pair is None else [documents.element_to_doc(x) for x in pair]


def cmd_check_form(args, reader: documents.DocumentReader, console: Console) -> tuple[dict, int]:
    V = reader.load(args.form, "form")
    orthogonal = is_orthogonal_form(V)
    pair = orthogonality_oracle(V, seed=args.seed)
    if orthogonal != (pair is None):
        raise InvariantViolation("Matrix criterion and oracle disagree")
    console.print(f"Form is {'orthogonal' if orthogonal else 'NOT orthogonal'}")
    return {"command": "check-form", "orthogonal": orthogonal, "counterexample": _pair(pair)}, (
        EXIT_TRUE if orthogonal else EXIT_FALSE
    )


def cmd_decompose(args, reader: documents.DocumentReader, console: Console) -> tuple[dict, int]:
    V = reader.load(args.form, "form")
    try:
        decomposition = decompose(V)
    except NotOrthogonal as e:
        console.print("Form is NOT orthogonal; no decomposition exists")
        return {"command": "decompose", "orthogonal": False, "counterexample": _pair(e.counterexample)}, EXIT_FALSE
    doc = {
        "command": "decompose",
        "orthogonal": True,
        **documents.decomposition_to_doc(decomposition),
        "representation_space_dim": representation_space_dim(V),
    }
    if args.out is not None:
        ensure_dir(args.out.parent)
        args.out.write_text(documents.dumps(doc), encoding="utf-8")
        logging.info(f"Decomposition written to {args.out}")
    return doc, EXIT_TRUE


def cmd_complexify(args, reader: documents.DocumentReader, console: Console) -> tuple[dict, int]:
    V = reader.load(args.form, "form")
    W = complexify_form(V)
    extension_orthogonal = is_extension_orthogonal(W)
    functional = phi2_eliminable(V)
    if extension_orthogonal != (functional is not None):
        raise InvariantViolation("Extension orthogonality disagrees with phi2-eliminability")
    console.print(f"Extension is {'orthogonal' if extension_orthogonal else 'NOT orthogonal'}")
    doc = {
        "command": "complexify",
        "extension_orthogonal": extension_orthogonal,
        "complex_form": documents.complex_form_to_doc(W),
        "phi2_eliminable": functional is not None,
        "functional": None if functional is None else documents.functional_to_doc(functional),
    }
    return doc, EXIT_TRUE if extension_orthogonal else EXIT_FALSE


def cmd_analyze_map(args, reader: documents.DocumentReader, console: Console) -> tuple[dict, int]:
    T = reader.load(args.map, "map")
    try:
        structure = analyze(T)
    except NotOrthogonalityPreserving as e:
        console.print("Map is NOT orthogonality preserving")
        return {"command": "analyze-map", "orthogonality_preserving": False, "witness": _pair(e.witness)}, EXIT_FALSE
    return {
        "command": "analyze-map",
        "orthogonality_preserving": True,
        "structure": documents.structure_to_doc(structure),
    }, EXIT_TRUE


def cmd_check_biop(args, reader: documents.DocumentReader, console: Console) -> tuple[dict, int]:
    T = reader.load(args.map, "map")
    decision = is_biorthogonality_preserving(T)
    if decision.holds:
        console.print("Map is bi-orthogonality preserving")
    else:
        console.print(f"Map is NOT bi-orthogonality preserving: {escape(decision.reason)}")
    doc = {
        "command": "check-biop",
        "biorthogonality_preserving": decision.holds,
        "reason": decision.reason,
        "certificate": None if decision.certificate is None else documents.certificate_to_doc(decision.certificate),
    }
    return doc, EXIT_TRUE if decision.holds else EXIT_FALSE


def cmd_reproduce(args, reader: documents.DocumentReader, console: Console) -> tuple[dict, int]:
    if args.example == "complexification":
        example = reproductions.complexification_example()
        console.print(f"Extended form at (chi_t1, chi_t2): {example.extension_value}; extension NOT orthogonal")
    else:
        example = reproductions.biop_example()
        console.print("OP linear bijection whose inverse is not OP")
    return example.to_doc(), EXIT_TRUE


def cmd_fuzz(args, reader: documents.DocumentReader, console: Console) -> tuple[dict, int]:
    cfg = GenConfig(
        seed=args.seed, max_fixed=args.max_f, max_cycles=args.max_cycles, trials=args.trials, mutate=args.mutate
    )
    app = FuzzApp(cfg, args.suite)
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        console=console,
    ) as progress:
        reports = app.run(progress)
    doc = reports[0].to_doc() if args.suite != "all" else FuzzApp.summary(reports)
    return doc, EXIT_TRUE if all(r.passed for r in reports) else EXIT_FALSE


COMMANDS: dict[str, Callable] = {
    "check-form": cmd_check_form,
    "decompose": cmd_decompose,
    "complexify": cmd_complexify,
    "analyze-map": cmd_analyze_map,
    "check-biop": cmd_check_biop,
    "reproduce": cmd_reproduce,
    "fuzz": cmd_fuzz,
}


def main_cli(argv: Optional[Sequence[str]] = None) -> int:
    """The main entry point of the command-line application.

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:].

    Returns:
        The process exit code.
    """
    console = Console(stderr=True)
    try:
        defaults = CliDefaults.from_env()
    except OrthoformsError as e:
        console.print(f"[red]Configuration error:[/red] {escape(str(e))}")
        return EXIT_INPUT
    parser = build_parser(defaults)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_TRUE

    level = getattr(logging, str(args.log_level).upper(), None)
    if not isinstance(level, int):
        console.print(f"[red]Unknown log level:[/red] {escape(str(args.log_level))}")
        return EXIT_INPUT
    setup_logging(level)
    if args.tolerance is not None and not args.float_input:
        console.print("[red]Input error:[/red] --tolerance requires --float-input")
        return EXIT_INPUT
    tolerance = args.tolerance if args.tolerance is not None else defaults.tolerance
    if tolerance <= 0:
        console.print("[red]Input error:[/red] --tolerance must be positive")
        return EXIT_INPUT
    reader = documents.DocumentReader(float_input=args.float_input, tolerance=tolerance)

    try:
        doc, code = COMMANDS[args.command](args, reader, console)
    except DocumentError as e:
        location = f" (line {e.line}, column {e.column})" if e.line is not None else ""
        logging.error(f"Invalid input document: {e}{location}")
        console.print(f"[red]Input error:[/red] {escape(str(e))}{location}")
        return EXIT_INPUT
    except OrthoformsError as e:
        logging.error(f"Invalid input: {e}")
        console.print(f"[red]Input error:[/red] {escape(str(e))}")
        return EXIT_INPUT
    except InvariantViolation as e:
        logging.error(f"Internal cross-check failed: {e}", exc_info=True)
        console.print(f"[red]Internal error:[/red] {escape(str(e))}")
        return EXIT_INVARIANT
    except Exception as e:
        logging.error(f"An unexpected error occurred: {e}", exc_info=True)
        console.print(f"[red]Internal error:[/red] {escape(type(e).__name__)}: {escape(str(e))}")
        return EXIT_INVARIANT

    sys.stdout.write(documents.dumps(doc))
    return code


if __name__ == "__main__":
    raise SystemExit(main_cli())
