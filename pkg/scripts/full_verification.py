#!/usr/bin/env python3
"""Run the cross-module invariant battery and exit with its status.

Equivalent to ``prodperc verify``; kept as a script so a plain checkout
can be validated with one command.  Exit code 0 means every suite ran
with zero counterexamples.
"""

import argparse
import sys

from prodperc.experiments import (ConfigError, ExperimentConfig,
                                  emit_report, render_report, verify_all)


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", dest="fmt", choices=("csv", "json"),
                        default="csv")
    parser.add_argument("--out", help="report path; omitted prints to stdout")
    parser.add_argument("--fault-injection", dest="fault_injection",
                        choices=("matching",),
                        help="test hook: corrupt one module to prove the "
                             "battery catches it")
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    try:
        config = ExperimentConfig.from_dict({
            "kind": "verify_all", "seed": args.seed,
            **({"fault_injection": args.fault_injection}
               if args.fault_injection else {})})
        status, summary = verify_all(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        emit_report(summary, args.out, args.fmt)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(render_report(summary, args.fmt))
    return status


if __name__ == "__main__":
    raise SystemExit(main())
