#!/usr/bin/env python3
"""Regenerate all figure data CSVs into a target directory.

Runs the three `degreenet figure` subcommands with pinned seeds so the
output is reproducible byte-for-byte.
"""

import argparse
import sys

from degreenet.cli import main as degreenet_main

FIGURE_ARGS = {
    1: [],
    2: ["--master-seed", "20240501", "--replicates", "500"],
    3: [],
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="figures", help="output directory")
    parser.add_argument("--figure", type=int, choices=(1, 2, 3),
                        help="render a single figure (default: all)")
    args = parser.parse_args()
    figures = [args.figure] if args.figure else [1, 2, 3]
    for fig in figures:
        rc = degreenet_main(["figure", "--figure", str(fig),
                             "--out", args.out, *FIGURE_ARGS[fig]])
        if rc != 0:
            print(f"figure {fig} failed with exit code {rc}", file=sys.stderr)
            return rc
        print(f"figure {fig}: wrote CSVs to {args.out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
