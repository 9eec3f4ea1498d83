"""meshloop-analyze: render corpus statistics from an evaluation export."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .report import corpus_report, render_text, write_report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meshloop-analyze",
        description="Statistics over an exported JSONL corpus of "
                    "evaluation sequences",
    )
    parser.add_argument("--input", required=True,
                        help="JSONL export (one sequence per line)")
    parser.add_argument("--out", required=True,
                        help="output directory for report.txt/report.csv/"
                             "rating_hist.csv")
    parser.add_argument("--alpha", type=float, default=0.05,
                        help="significance level for trend calls")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    path = Path(args.input)
    if not path.exists():
        print(f"no such input: {path}", file=sys.stderr)
        return 2
    try:
        stats = corpus_report(path, alpha=args.alpha)
    except ValueError as exc:  # schema-version mismatch or corrupt line
        print(f"could not read corpus: {exc}", file=sys.stderr)
        return 2
    write_report(stats, args.out, alpha=args.alpha)
    sys.stdout.write(render_text(stats, alpha=args.alpha))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
