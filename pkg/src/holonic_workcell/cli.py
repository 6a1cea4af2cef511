"""Command line entry points: run a scenario, serve the API, dump the ontology.

Exit codes: 0 on success, 2 on a scenario script error, 3 when the
post-run conformance check finds an invariant violation.
"""

from __future__ import annotations

import argparse
import sys

from .gateway import ScriptError, Workcell, export_trace, load_scenario, use_scaled_clock
from .ontology import build_case_study_ontology

EXIT_OK = 0
EXIT_SCRIPT_ERROR = 2
EXIT_INVARIANT_VIOLATION = 3


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        script = load_scenario(args.scenario)
    except ScriptError as error:
        print(f"script error: {error}", file=sys.stderr)
        return EXIT_SCRIPT_ERROR
    except OSError as error:
        print(f"cannot read scenario: {error}", file=sys.stderr)
        return EXIT_SCRIPT_ERROR
    workcell = Workcell()
    if args.scale is not None:
        use_scaled_clock(workcell, args.scale)
    trace = workcell.run_script(script)
    if args.trace_out:
        export_trace(trace, args.trace_out)
    else:
        sys.stdout.write(trace.render())
    for rejection in workcell.rejections:
        print(f"rejected at t={rejection['at']}: {rejection['error']}", file=sys.stderr)
    problems = workcell.conformance_problems()
    if problems:
        for problem in problems:
            print(f"invariant violation: {problem}", file=sys.stderr)
        return EXIT_INVARIANT_VIOLATION
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    from .server import BindFailure, serve

    try:
        serve(
            bind=args.bind,
            scale=args.scale,
            deterministic=args.deterministic,
            ui_dir=args.ui_dir,
        )
    except BindFailure as error:
        print(f"cannot serve: {error}", file=sys.stderr)
        return 1
    return EXIT_OK


def _cmd_dump_ontology(_: argparse.Namespace) -> int:
    sys.stdout.write(build_case_study_ontology().dump())
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="workcell", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run a scenario file and emit its trace")
    run.add_argument("scenario", help="scenario file (AT <ms> <directive> ... lines)")
    run.add_argument("--trace-out", help="write the trace here instead of stdout")
    timing = run.add_mutually_exclusive_group()
    timing.add_argument(
        "--deterministic",
        action="store_true",
        help="virtual time, no pacing (the default)",
    )
    timing.add_argument(
        "--scale",
        type=float,
        default=None,
        help="pace against the wall clock at SCALE virtual ms per real ms",
    )
    run.set_defaults(handler=_cmd_run)

    serve = commands.add_parser("serve", help="expose the service API over a live cell")
    serve.add_argument("--bind", default="127.0.0.1:8000", help="host:port to listen on")
    serve.add_argument(
        "--scale", type=float, default=1.0, help="virtual ms per real ms (default 1.0)"
    )
    serve.add_argument(
        "--deterministic",
        action="store_true",
        help="advance virtual time per directive instead of pacing",
    )
    serve.add_argument("--ui-dir", default=None, help="also serve this directory at /")
    serve.set_defaults(handler=_cmd_serve)

    dump = commands.add_parser("dump-ontology", help="print the schema registry listing")
    dump.set_defaults(handler=_cmd_dump_ontology)

    args = parser.parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    raise SystemExit(main())
