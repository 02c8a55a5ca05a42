"""Command-line runner: one subcommand per experiment kind.

    uscrabi <subcommand> --config experiment.cfg [--out result.csv] [--threads N]

Subcommands map onto experiment kinds: spectrum -> spectrum_sweep,
anticross -> anticrossing, effcoupling -> effective_coupling, and dynamics,
calibrate, ghz map onto themselves.  The config's [experiment] kind, when
present, must agree with the subcommand.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace as dc_replace
from pathlib import Path

from .experiments import ConfigError, parse_config, run

_SUBCOMMAND_KIND = {
    "spectrum": "spectrum_sweep",
    "anticross": "anticrossing",
    "effcoupling": "effective_coupling",
    "dynamics": "dynamics",
    "calibrate": "calibrate",
    "ghz": "ghz",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uscrabi",
        description="Ultrastrong-coupling multi-qubit Rabi model experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, kind in _SUBCOMMAND_KIND.items():
        p = sub.add_parser(name, help=f"run a {kind} experiment")
        p.add_argument("--config", required=True, help="config file path")
        p.add_argument("--out", default=None, help="override the CSV output path")
        p.add_argument("--threads", type=int, default=1, help="parallel sweep workers")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    expected_kind = _SUBCOMMAND_KIND[args.command]
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    try:
        spec = parse_config(text)
        if spec.kind != expected_kind:
            raise ConfigError(
                f"config kind {spec.kind!r} does not match subcommand "
                f"{args.command!r} (expected {expected_kind!r})"
            )
        if args.out is not None:
            spec = dc_replace(spec, output_path=args.out)
        out = run(spec, n_workers=max(1, args.threads))
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
