"""``ncqm run <suite>``: run verification suites and write a JSON-lines report.

Exit codes: 0 every check passed, 1 some check failed, 2 configuration error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import SUITES, ConfigError, parse_config
from .suites import run_suite

# flag destination -> config key
_FLAG_KEYS = {"m": "m", "theta": "theta", "lam": "lambda", "alpha": "alpha", "beta": "beta",
              "gamma": "gamma", "grid_n": "grid_n", "grid_l": "grid_l", "phase_n": "phase_n",
              "phase_l": "phase_l", "seed": "seed", "out": "out", "dump_states": "dump_states"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ncqm", description="Numerical checks of noncommutative quantum mechanics.")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a verification suite")
    run.add_argument("suite", help=f"one of: {', '.join(SUITES)}")
    run.add_argument("--config", help="plain-text file of 'key = value' lines")
    for name in ("m", "theta", "alpha", "beta", "gamma"):
        run.add_argument(f"--{name}", type=float)
    run.add_argument("--lambda", dest="lam", type=float)
    run.add_argument("--grid-n", type=int)
    run.add_argument("--grid-l", type=float)
    run.add_argument("--phase-n", type=int)
    run.add_argument("--phase-l", type=float)
    run.add_argument("--seed", type=int)
    run.add_argument("--fast", action="store_true", default=None,
                     help="FFT fast path, compared against the stored direct baseline")
    run.add_argument("--out", help="report path (default: stdout)")
    run.add_argument("--dump-states", help="directory for binary GridFunction dumps")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    flags = {key: getattr(args, dest) for dest, key in _FLAG_KEYS.items()}
    flags["fast"] = args.fast
    flags["suite"] = args.suite
    try:
        cfg = parse_config(args.config, flags)
    except ConfigError as e:
        print(f"ncqm: config error: {e}", file=sys.stderr)
        return 2
    report = run_suite(cfg.suite, cfg)
    text = report.to_jsonl()
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    failed = [r.id for r in report.records if not r.passed]
    print(f"ncqm: {len(report.records) - len(failed)}/{len(report.records)} checks passed"
          + (f"; failed: {', '.join(failed)}" if failed else ""), file=sys.stderr)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
