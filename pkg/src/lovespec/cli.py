"""Command-line entry point: lovespec forward|spectrum|reconstruct|roundtrip.

Exit codes: 0 = success (round trips within tolerance), 2 = a tolerance check
failed, 1 = configuration or computation error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import LoveSpecError
from .pipeline import JobConfig, run


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lovespec",
        description="Forward/inverse spectral solver for Love-wave media")
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode, text in (
        ("forward", "profile -> potential and spectral data per frequency"),
        ("spectrum", "potential -> spectral data"),
        ("reconstruct", "spectral data -> potential (and shear modulus)"),
        ("roundtrip", "forward, then inverse, then an error report"),
    ):
        p = sub.add_parser(mode, help=text)
        p.add_argument("--config", required=True, help="JSON job configuration")
        p.add_argument("--out", default="out", help="output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        import os

        from . import jsonio

        doc = jsonio.load(args.config)
        doc_mode = doc.pop("mode", None)
        if doc_mode is not None and doc_mode != args.mode:
            print(f"error: config mode '{doc_mode}' conflicts with subcommand "
                  f"'{args.mode}'", file=sys.stderr)
            return 1
        doc["mode"] = args.mode
        cfg = JobConfig.from_dict(doc, base_dir=os.path.dirname(
            os.path.abspath(args.config)))
    except LoveSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        report = run(cfg, args.out)
    except LoveSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if cfg.mode == "roundtrip" and not report.get("passed", False):
        print("roundtrip finished outside tolerance", file=sys.stderr)
        return 2
    print(f"{cfg.mode} finished; artifacts in {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
