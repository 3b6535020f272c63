"""Common contract shared by every ontological model in the package.

A model maps a preparation (a quantum state, or Gaussian parameters for the
phase-space model) to a density over ontic states, transports ontic states
under an evolution, and assigns event probabilities to ontic states.

Ontic states are handled in batches: ``sample`` returns ``n`` states at once
and the other methods are vectorized over that batch.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any

import numpy as np

# density above this counts as "inside the support"
SUPPORT_THRESHOLD = 1e-12


class OntologicalModel(ABC):
    #: short identifier used in reports, e.g. ``"qubit-df"``
    name: str = ""
    #: Hilbert space dimension, ``None`` for infinite-dimensional systems
    N: int | None = None
    #: number of continuous ontic variables
    ontic_dim: int = 0
    #: measurement kernel only takes the values 0 and 1
    dispersion_free: bool = True
    #: ontic space only covers a restricted family of states and measurements
    restricted_manifold: bool = False

    @abstractmethod
    def sample(self, prep: Any, n: int, rng: np.random.Generator) -> Any:
        """Draw ``n`` ontic states from the preparation density."""

    @abstractmethod
    def density_or_support(self, x: Any, prep: Any) -> np.ndarray:
        """Density at each ontic state; delta-supported models return a 0/1
        support indicator instead."""

    @abstractmethod
    def evolve(self, x: Any, U: Any) -> Any:
        """Transport ontic states under the evolution ``U``."""

    @abstractmethod
    def transform(self, prep: Any, U: Any) -> Any:
        """The preparation after the quantum evolution ``U``."""

    @abstractmethod
    def compose(self, U2: Any, U1: Any) -> Any:
        """The evolution that applies ``U1`` and then ``U2``."""

    @abstractmethod
    def event_probability(self, x: Any, event: Any, context: Any = None) -> np.ndarray:
        """Probability in [0, 1] that ``event`` fires, for each ontic state."""

    @abstractmethod
    def exact_probability(self, prep: Any, event: Any) -> float:
        """Quantum-mechanical probability of ``event`` for the preparation."""

    def ontic_distance(self, x1: Any, x2: Any) -> float:
        """Largest coordinate difference between two batches of ontic states."""
        return float(np.max(np.abs(np.asarray(x1) - np.asarray(x2))))

    def __repr__(self):
        return f"{type(self).__name__}(name={self.name!r}, N={self.N})"
