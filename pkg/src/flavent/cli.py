"""Command-line front end.

    flavent sweep    --flavor e --xmin 1 --xmax 1e12 --points 600 > sweep_e.csv
    flavent prob     --flavor mu --format json
    flavent measures --cross-validate --out measures.csv
    flavent params   --config my_params.json

Exit codes: 0 success, 1 config error, 2 cross-validation failure, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .measures import CrossValidationError
from .scan import (
    MEASURE_COLUMNS,
    PROB_COLUMNS,
    SweepConfig,
    format_csv,
    format_json,
    load_config,
    run_sweep,
)

EXIT_OK, EXIT_CONFIG, EXIT_CROSSCHECK, EXIT_IO = 0, 1, 2, 3

SUBCOMMAND_COLUMNS = {"sweep": None, "prob": PROB_COLUMNS, "measures": MEASURE_COLUMNS}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON parameter/sweep config")
    common.add_argument("--flavor", help="source flavor: e, mu or tau")
    common.add_argument("--xmin", type=float, help="first distance in meters")
    common.add_argument("--xmax", type=float, help="last distance in meters")
    common.add_argument("--points", type=int, help="number of grid points")
    common.add_argument("--grid", choices=("log", "linear"))
    common.add_argument("--delta", type=float, help="CP-violating phase in radians")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--cross-validate", action="store_true", default=None,
                        help="recheck closed forms against the general algorithms")
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")

    parser = argparse.ArgumentParser(
        prog="flavent",
        description="Flavor entanglement of wave-packet neutrino oscillations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common], help="probabilities and entanglement measures")
    sub.add_parser("prob", parents=[common], help="transition probabilities only")
    sub.add_parser("measures", parents=[common], help="entanglement measures only")
    sub.add_parser("params", parents=[common], help="print the resolved parameter set")
    return parser


def resolve_config(args: argparse.Namespace) -> SweepConfig:
    config = load_config(args.config) if args.config else SweepConfig()
    changes = {}
    for attr, name in (("source_flavor", "flavor"), ("x_min", "xmin"), ("x_max", "xmax"),
                       ("points", "points"), ("grid", "grid"), ("cross_validate", "cross_validate")):
        value = getattr(args, name)
        if value is not None:
            changes[attr] = value
    if args.delta is not None:
        changes["params"] = config.params.replace(delta_cp=args.delta)
    return replace(config, **changes) if changes else config


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
    except (ValueError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "params":
        doc = config.to_dict()
        doc["energy_ev"] = config.params.energy
        doc["sigma_p_ev"] = config.params.sigma_p
        doc["sigma_x_m"] = config.params.sigma_x
        text = json.dumps(doc, indent=1) + "\n"
    else:
        try:
            result = run_sweep(config)
        except CrossValidationError as exc:
            print(f"cross-validation failed: {exc}", file=sys.stderr)
            return EXIT_CROSSCHECK
        columns = SUBCOMMAND_COLUMNS[args.command]
        fmt = format_json if args.format == "json" else format_csv
        text = fmt(result, columns)

    try:
        _emit(text, args.out)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
