"""Command-line entry point.

    qttt <command> --config <file> [--seed N] [--out DIR]

Commands: train, tournament, qi-fixed, qi-sweep, serve, emit-plots.
The config file is JSON (see harness docs); --seed and --out override its
seed and out_dir fields. emit-plots may be pointed at a results directory
with --out alone.
"""

from __future__ import annotations

import argparse
import sys

from .engines import CorruptCheckpoint, InvalidSpec, SpecMismatch
from .harness import COMMANDS, ConfigError, MissingData, load_config, run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qttt",
                                     description="tic-tac-toe engine benchmark")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        p = sub.add_parser(command)
        p.add_argument("--config", required=command != "emit-plots",
                       help="JSON run configuration (or a previous manifest)")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--out", default=None, help="override config out_dir")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else {}
        stated = config.get("command")
        if stated is not None and stated != args.command:
            raise ConfigError(
                f"config is for {stated!r} but {args.command!r} was invoked")
        config["command"] = args.command
        out = run(config, seed=args.seed, out_dir=args.out)
        print(out)
        return 0
    except (ConfigError, MissingData, InvalidSpec, SpecMismatch,
            CorruptCheckpoint) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
