"""Command line entry point: ``jamnet run <spec|preset>`` and ``jamnet list``."""

import argparse
import sys

from .errors import SpecError
from .experiments import emit, load_spec, preset_names, run_experiment

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARTIAL = 2


def build_parser():
    parser = argparse.ArgumentParser(prog="jamnet", description="Jamming experiments on cellular networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment spec file or bundled preset")
    run.add_argument("spec", help="path to an INI spec or a preset name (see `jamnet list`)")
    run.add_argument("--out", help="write results here instead of stdout")
    run.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    run.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    run.add_argument("--seed", type=int, help="base seed; per-row seeds derive from it")
    run.add_argument("--engine", choices=("analytic", "mc", "both"))
    run.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                     help="override a spec value (repeatable)")
    run.add_argument("--timing", action="store_true", help="record wall_ms per row")

    sub.add_parser("list", help="list bundled presets")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "list":
        print("\n".join(preset_names()))
        return EXIT_OK

    try:
        spec = load_spec(args.spec, args.set, args.trials, args.seed, args.engine)
    except (SpecError, ValueError) as exc:
        print(f"jamnet: invalid spec: {exc}", file=sys.stderr)
        return EXIT_INVALID

    rows = run_experiment(spec, timing=args.timing)
    try:
        text = emit(rows, args.format, args.out)
    except OSError as exc:
        print(f"jamnet: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.out is None:
        sys.stdout.write(text)
    failed = [r for r in rows if not r.ok()]
    for r in failed:
        print(f"jamnet: row {r.sweep!r} failed: {';'.join(r.flags)}", file=sys.stderr)
    return EXIT_PARTIAL if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
