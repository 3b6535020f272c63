#!/usr/bin/env python3
"""Born-rule Monte Carlo battery over every model; writes born.csv."""

import sys

from onticlab.cli import main

if __name__ == "__main__":
    seed = sys.argv[1] if len(sys.argv) > 1 else "7"
    sys.exit(main(["born-test", "--seed", seed, "--out", "born.csv"]))
