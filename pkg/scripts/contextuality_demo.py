#!/usr/bin/env python3
"""Print a few contextuality witnesses of the dispersion-free Bell model."""

import sys

import numpy as np

from onticlab.bell_model import MeasurementContext, contextuality_witness, weights
from onticlab.hilbert import random_state


def main(N=3, trials=5, seed=1):
    rng = np.random.default_rng(seed)
    ctx = MeasurementContext.computational(N)
    cyclic = list(range(1, N)) + [0]
    for _ in range(trials):
        chi = random_state(N, rng)
        w = contextuality_witness(chi, ctx, cyclic)
        probs = np.round(weights(chi, ctx), 3)
        if w is None:
            print(f"weights {probs}: no witness on the lambda grid")
        else:
            print(f"weights {probs}: lambda={w.lam:.4f} fires |{w.outcome_original + 1}> "
                  f"in order {list(range(N))} but |{w.outcome_permuted + 1}> in order {cyclic}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:]))
