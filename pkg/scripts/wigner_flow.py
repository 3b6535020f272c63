#!/usr/bin/env python3
"""Evolve Gaussian Wigner samples under a harmonic oscillator and compare moments."""

import numpy as np

from onticlab import phase_space as ps

g = ps.GaussianStateParams(q0=1.0, p0=0.0, a=0.5, b=0.3)
rng = np.random.default_rng(0)
F = ps.flow_map(ps.QuadraticHamiltonian.harmonic(), 0.7)
z = F(ps.sample(g, rng, 200_000).as_array())
target = ps.evolve_params(g, F)
print("sample mean ", z.mean(axis=0), " exact", target.mean)
print("sample cov\n", np.cov(z, rowvar=False), "\nexact cov\n", target.covariance())
