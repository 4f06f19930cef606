"""Command-line front end.

Exit codes: 0 all checks pass, 1 at least one check failed, 2 configuration
error.  Reports go to stdout or --report, as canonical JSON or as text.
"""

from __future__ import annotations

import argparse
import json
import sys

from .experiments import ConfigError, run_experiment
from .reports import ExperimentReport, ReportMismatchError, diff_reports

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2


def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("--report", metavar="PATH", help="write the report to this file")
    sub.add_argument("--format", choices=("json", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="closurelab",
        description="Exact verification experiments: Fermat cubic tower, "
        "characteristic-p closures, Hesse doubling, p-adic approximation.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("tower-verify", help="exact identity checks for tower levels")
    sp.add_argument("--max-level", type=int, default=3)
    _add_common(sp)

    sp = subs.add_parser("tower-colon", help="low-valuation colon certificates and z^2 membership")
    sp.add_argument("--max-level", type=int, default=3)
    sp.add_argument("--full-colon-max-level", type=int, default=2)
    sp.add_argument("--z2-max-level", type=int, default=2)
    _add_common(sp)

    sp = subs.add_parser("tower-trace", help="group-average retraction properties")
    sp.add_argument("--pairs", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    _add_common(sp)

    sp = subs.add_parser("charp", help="Frobenius and tight closure tests")
    sp.add_argument("--p", type=int, default=0, help="prime, or 0 for the default matrix")
    sp.add_argument("--e-max", type=int, default=2)
    sp.add_argument("--deg-bound", type=int, default=3)
    _add_common(sp)

    sp = subs.add_parser("isogeny", help="Hesse doubling lift and membership mod p^n")
    sp.add_argument("--check", choices=("all",), default="all")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--n", type=int, default=2)
    _add_common(sp)

    sp = subs.add_parser("padic", help="successive approximation on the truncated model")
    sp.add_argument("--p", type=int, default=5)
    sp.add_argument("--precision", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=5)
    sp.add_argument("--input", metavar="PATH", help="JSON document with alpha and an oracle script")
    _add_common(sp)

    sp = subs.add_parser("all", help="run every experiment with defaults")
    sp.add_argument("--seed", type=int, default=0)
    _add_common(sp)

    sp = subs.add_parser("diff", help="structural diff of two report files")
    sp.add_argument("left")
    sp.add_argument("right")

    return parser


_CONFIG_KEYS = {
    "tower-verify": ("max_level",),
    "tower-colon": ("max_level", "full_colon_max_level", "z2_max_level"),
    "tower-trace": ("pairs", "seed"),
    "charp": ("p", "e_max", "deg_bound"),
    "isogeny": ("check", "p", "n"),
    "padic": ("p", "precision", "seed", "samples", "input"),
    "all": ("seed",),
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "diff":
        try:
            with open(args.left, encoding="utf-8") as fh:
                left = ExperimentReport.from_dict(json.load(fh))
            with open(args.right, encoding="utf-8") as fh:
                right = ExperimentReport.from_dict(json.load(fh))
            diffs = diff_reports(left, right)
        except (OSError, KeyError, json.JSONDecodeError, ReportMismatchError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG_ERROR
        print(json.dumps(diffs, indent=2, sort_keys=True))
        return EXIT_PASS if not diffs else EXIT_CHECK_FAILED

    config = {}
    for key in _CONFIG_KEYS[args.command]:
        value = getattr(args, key, None)
        if value is not None:
            config[key] = value
    try:
        report = run_experiment(args.command, config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    body = report.to_json() + "\n" if args.format == "json" else report.to_text()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    return EXIT_PASS if report.passed else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
