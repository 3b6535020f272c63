"""Machine checks of the axioms every ontological model must satisfy.

The checks are generic over :class:`~onticlab.model.OntologicalModel`:

* Born rule: the ontic average of the event kernel reproduces |<phi|psi>|^2.
* Disjointness: samples prepared by psi lie outside the support of any
  orthogonal psi_perp.
* Flow: evolving samples of psi by U lands them inside the support of U psi.
* Composition and exclusivity.

A Husimi-Q pseudo-model of a qubit is included as a negative control: its
functions are positive and normalized but orthogonal states overlap.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .hilbert import DimensionError, QuantumState, UnitaryOp, bloch_vector, inner
from .model import SUPPORT_THRESHOLD, OntologicalModel
from .sphere import integrate, orthonormal_frame, sphere_grid

Z_THRESHOLD = 4.0
ORTHOGONAL_TOL = 1e-10


def _generator(rng) -> tuple[np.random.Generator, int | None]:
    if isinstance(rng, np.random.Generator):
        return rng, None
    return np.random.default_rng(rng), int(rng)


@dataclass(frozen=True)
class BornTestReport:
    estimate: float
    exact: float
    n: int
    z_score: float
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return abs(self.z_score) < Z_THRESHOLD


@dataclass(frozen=True)
class SupportOverlapReport:
    """For disjointness checks ``overlap_count`` counts samples inside the
    foreign support; for flow checks it counts samples that left the evolved
    support."""

    n_samples: int
    overlap_count: int
    max_foreign_density: float

    def __post_init__(self):
        if self.overlap_count > self.n_samples:
            raise ValueError("overlap_count cannot exceed n_samples")


def z_score(values: np.ndarray, exact: float) -> tuple[float, float]:
    """Sample mean of ``values`` and its z-score against ``exact``.

    Zero sample variance yields z = 0 when the mean matches to 1e-12 and an
    infinite z otherwise.
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    mean = float(values.mean())
    var = float(values.var(ddof=1)) if n > 1 else 0.0
    diff = mean - exact
    if var == 0.0:
        if abs(diff) <= 1e-12:
            return mean, 0.0
        return mean, math.copysign(math.inf, diff)
    return mean, diff / math.sqrt(var / n)


def check_born_rule(model: OntologicalModel, psi, phi, n: int, rng, context=None,
                    draw_outcomes: bool = False) -> BornTestReport:
    """Monte Carlo estimate of P(phi) from ``n`` ontic samples of ``psi``.

    With ``draw_outcomes`` each kernel value is turned into a 0/1 outcome with
    one extra uniform, which is how a non-dispersion-free model produces
    single-shot data.
    """
    if n < 1000:
        raise ValueError("Born checks need n >= 1000 samples")
    gen, seed = _generator(rng)
    x = model.sample(psi, n, gen)
    p = model.event_probability(x, phi, context=context)
    if draw_outcomes:
        p = (gen.random(p.size) < p).astype(float)
    exact = model.exact_probability(psi, phi)
    est, z = z_score(p, exact)
    return BornTestReport(est, exact, n, z, seed)


def _require_orthogonal(psi: QuantumState, psi_perp: QuantumState) -> None:
    if abs(inner(psi, psi_perp)) > ORTHOGONAL_TOL:
        raise ValueError("states are not orthogonal")


def check_property3(model: OntologicalModel, psi: QuantumState, psi_perp: QuantumState,
                    n: int, rng) -> SupportOverlapReport:
    """Count samples of rho(.|psi) that fall inside the support of rho(.|psi_perp)."""
    _require_orthogonal(psi, psi_perp)
    gen, _ = _generator(rng)
    x = model.sample(psi, n, gen)
    foreign = model.density_or_support(x, psi_perp)
    overlap = int(np.count_nonzero(foreign > SUPPORT_THRESHOLD))
    return SupportOverlapReport(n, overlap, float(np.max(foreign, initial=0.0)))


def check_property1_flow(model: OntologicalModel, psi, U, n: int, rng) -> SupportOverlapReport:
    """Count evolved samples of psi that land outside the support of U psi."""
    gen, _ = _generator(rng)
    x = model.evolve(model.sample(psi, n, gen), U)
    dens = model.density_or_support(x, model.transform(psi, U))
    outside = dens <= SUPPORT_THRESHOLD
    worst = float(np.max(dens[outside], initial=0.0))
    return SupportOverlapReport(n, int(np.count_nonzero(outside)), worst)


def check_composition(model: OntologicalModel, psi, U1, U2, n: int, rng) -> float:
    """Largest deviation between evolving by U1 then U2 and by their product."""
    gen, _ = _generator(rng)
    x = model.sample(psi, n, gen)
    stepwise = model.evolve(model.evolve(x, U1), U2)
    direct = model.evolve(x, model.compose(U2, U1))
    return model.ontic_distance(stepwise, direct)


def check_exclusivity(model: OntologicalModel, psi: QuantumState, context, n: int, rng) -> int:
    """Number of sampled ontic states whose outcome probabilities over the
    complete ``context`` do not sum to one (0/1 valued for dispersion-free
    models)."""
    gen, _ = _generator(rng)
    x = model.sample(psi, n, gen)
    probs = np.stack([model.event_probability(x, phi, context=context) for phi in context.basis])
    bad = np.abs(probs.sum(axis=0) - 1.0) > 1e-12
    if model.dispersion_free:
        bad |= ~np.all((probs == 0.0) | (probs == 1.0), axis=0)
    return int(np.count_nonzero(bad))


# --- Husimi-Q negative control -------------------------------------------------


def husimi_q(v, psi: QuantumState) -> np.ndarray | float:
    """Spin-coherent-state Q function (1 + v.w(psi)) / (4 pi) on the sphere."""
    out = (1.0 + np.asarray(v, float) @ bloch_vector(psi)) / (4.0 * np.pi)
    return float(out) if np.ndim(out) == 0 else out


class HusimiQubitModel(OntologicalModel):
    """Q(v|psi) as a would-be preparation density. Positive and normalized,
    but not ontological: only ``sample`` and the density are meaningful, so the
    kernel methods raise."""

    name = "husimi-q"
    N = 2
    ontic_dim = 2
    dispersion_free = False

    def sample(self, prep: QuantumState, n: int, rng: np.random.Generator) -> np.ndarray:
        # cos of the angle to w has pdf (1 + c)/2 on [-1, 1]; invert its CDF
        c = 2.0 * np.sqrt(rng.random(n)) - 1.0
        phi = 2.0 * np.pi * rng.random(n)
        s = np.sqrt(np.clip(1.0 - c**2, 0.0, None))
        local = np.stack([s * np.cos(phi), s * np.sin(phi), c], axis=-1)
        return local @ orthonormal_frame(bloch_vector(prep))

    def density_or_support(self, x, prep: QuantumState) -> np.ndarray:
        return np.atleast_1d(husimi_q(x, prep))

    def evolve(self, x, U: UnitaryOp):
        raise NotImplementedError("the Q function is not given an ontic dynamics")

    def transform(self, prep, U):
        raise NotImplementedError

    def compose(self, U2, U1):
        raise NotImplementedError

    def event_probability(self, x, event, context=None):
        raise NotImplementedError("the Q function has no measurement kernel")

    def exact_probability(self, prep, event):
        raise NotImplementedError


def q_function_counterexample(psi: QuantumState, psi_perp: QuantumState) -> SupportOverlapReport:
    """Deterministic overlap census of Q(.|psi) and Q(.|psi_perp) on the
    spherical quadrature grid: every node with Q(v|psi) above the support
    threshold counts as a sample, and overlaps are nodes where Q(v|psi_perp) is
    above it too."""
    if psi.N != 2 or psi_perp.N != 2:
        raise DimensionError("the Q-function control is defined for qubits")
    _require_orthogonal(psi, psi_perp)
    points, _ = sphere_grid(bloch_vector(psi))
    own = husimi_q(points, psi)
    foreign = husimi_q(points, psi_perp)
    in_own = own > SUPPORT_THRESHOLD
    overlap = in_own & (foreign > SUPPORT_THRESHOLD)
    return SupportOverlapReport(int(in_own.sum()), int(overlap.sum()),
                                float(np.max(foreign[in_own], initial=0.0)))


def husimi_normalization(psi: QuantumState) -> float:
    return integrate(lambda v: husimi_q(v, psi))


# --- dimension audit -------------------------------------------------------------


def min_ontic_dimension(N: int) -> int:
    """Smallest number of continuous ontic variables for an N-level system."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    return 2 * N - 2


@dataclass(frozen=True)
class DimensionAudit:
    model: str
    N: int | None
    ontic_dim: int
    bound: int | None
    satisfies: bool
    note: str = ""


def audit_dimension(model: OntologicalModel) -> DimensionAudit:
    """Compare a model's declared continuous dimension with 2N - 2.

    Models on a restricted manifold (a subset of states and measurements of an
    infinite-dimensional system) have no bound to compare against; they are
    reported, not flagged.
    """
    if model.restricted_manifold or model.N is None:
        return DimensionAudit(model.name, model.N, model.ontic_dim, None, True,
                              "restricted-manifold exception")
    bound = min_ontic_dimension(model.N)
    ok = model.ontic_dim >= bound
    return DimensionAudit(model.name, model.N, model.ontic_dim, bound, ok,
                          "" if ok else "fewer continuous variables than 2N-2")


def report_dict(check: str, model: str, report: BornTestReport | SupportOverlapReport,
                passed: bool, seed: int | None = None) -> dict:
    """Serializable record with keys check, model, n, estimate, exact, z_score,
    overlap_count, seed, pass."""
    if isinstance(report, BornTestReport):
        d = asdict(report)
        return {"check": check, "model": model, "n": d["n"], "estimate": d["estimate"],
                "exact": d["exact"], "z_score": d["z_score"], "overlap_count": None,
                "seed": d["seed"] if seed is None else seed, "pass": bool(passed)}
    return {"check": check, "model": model, "n": report.n_samples, "estimate": None,
            "exact": None, "z_score": None, "overlap_count": report.overlap_count,
            "seed": seed, "pass": bool(passed)}
