"""Rerun the benchmark table and print expected vs obtained verdicts and rates.

    python scripts/repro_table.py            # single-client and round-robin rows
    python scripts/repro_table.py --all      # every row, including the slow ones
"""
import argparse
import sys

from lassynt.cli import main


def run():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--all", action="store_true", help="also run the multi-client rows")
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--timeout", type=float, default=600.0)
    args = ap.parse_args()
    argv = ["repro-table", "--timeout", str(args.timeout)]
    if not args.all:
        argv.append("--small")
    if args.json:
        argv += ["--format", "json"]
    return main(argv)


if __name__ == "__main__":
    sys.exit(run())
