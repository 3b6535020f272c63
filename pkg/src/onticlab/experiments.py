"""Seeded experiment batteries behind the command line.

Every battery item draws its inputs and samples from its own stream, derived
from the master seed and the item's (check, model, index) label, so adding or
removing items never shifts the randomness of the others.
"""

from __future__ import annotations

import os
import zlib
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import stats

from . import bell_model, phase_space
from .bell_model import BellModel, MeasurementContext, contextuality_witness
from .hilbert import QuantumState, random_state, random_unitary
from .model import OntologicalModel
from .phase_space import (
    GaussianStateParams,
    QuadraticHamiltonian,
    QuadratureEvent,
    WignerGaussianModel,
    flow_map,
)
from .properties import (
    audit_dimension,
    check_born_rule,
    check_composition,
    check_exclusivity,
    check_property1_flow,
    check_property3,
    q_function_counterexample,
)
from .qubit_model import B_DISPERSION_FREE, B_LINEAR, QubitModel
from .report import ReportRow, sort_rows

EXPERIMENTS = ("born-test", "contextuality-demo", "property-suite", "wigner-demo", "dimension-audit")
MODELS = ("qubit-df", "qubit-b0", "bell-df", "bell-ndf", "wigner-gaussian")
FORMATS = ("csv", "json")

COMPATIBLE = {
    "born-test": MODELS,
    "property-suite": MODELS,
    "dimension-audit": MODELS,
    "contextuality-demo": ("bell-df",),
    "wigner-demo": ("wigner-gaussian",),
}
STATISTICAL = ("born-test", "property-suite", "wigner-demo")
DEFAULT_SAMPLES = {"born-test": 100_000, "property-suite": 10_000, "wigner-demo": 100_000}
DEFAULT_BELL_N = 3
SEED_ENV = "ONTICLAB_SEED"

BORN_PAIRS = 20
DISJOINT_PAIRS = 50
FLOW_TRIALS = 20
WITNESS_TRIALS = 100
WITNESS_MIN_WEIGHT = 0.05
WITNESS_REQUIRED = 99
KS_ALPHA = 0.01
KS_THETAS = (0.0, np.pi / 4, np.pi / 2)
KS_PARAM_SETS = 5


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    model: str | None = None
    N: int | None = None
    samples: int | None = None
    seed: int = 0
    output_path: str | None = None
    format: str = "csv"

    def validated(self) -> ExperimentConfig:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        if self.model is not None and self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; choose from {', '.join(MODELS)}")
        if self.model is not None and self.model not in COMPATIBLE[self.experiment]:
            raise ConfigError(f"model {self.model!r} cannot run experiment {self.experiment!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        if self.N is not None and self.N < 2:
            raise ConfigError("N must be >= 2")
        if self.model in ("qubit-df", "qubit-b0") and self.N not in (None, 2):
            raise ConfigError("qubit models require N = 2")
        if self.experiment == "contextuality-demo" and self.N is not None and self.N < 3:
            raise ConfigError("contextuality needs N >= 3")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        cfg = self
        if cfg.samples is None and cfg.experiment in DEFAULT_SAMPLES:
            cfg = replace(cfg, samples=DEFAULT_SAMPLES[cfg.experiment])
        if cfg.experiment in STATISTICAL and cfg.samples < 1000:
            raise ConfigError("statistical experiments need samples >= 1000")
        return cfg


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def derive_seed(master: int, check: str, model: str, index: int) -> int:
    """63-bit seed for one battery item, keyed by its label rather than its
    position in the battery."""
    label = zlib.crc32(f"{check}/{model}".encode())
    ss = np.random.SeedSequence(entropy=master, spawn_key=(label, index))
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


def build_model(name: str, N: int | None = None) -> OntologicalModel:
    if name == "qubit-df":
        return QubitModel(B_DISPERSION_FREE)
    if name == "qubit-b0":
        return QubitModel(B_LINEAR)
    if name == "bell-df":
        return BellModel(N or DEFAULT_BELL_N, dispersion_free=True)
    if name == "bell-ndf":
        return BellModel(N or DEFAULT_BELL_N, dispersion_free=False)
    if name == "wigner-gaussian":
        return WignerGaussianModel()
    raise ConfigError(f"unknown model {name!r}")


def random_orthogonal_pair(N: int, rng) -> tuple[QuantumState, QuantumState]:
    psi = random_state(N, rng)
    z = random_state(N, rng).amplitudes
    z = z - np.vdot(psi.amplitudes, z) * psi.amplitudes
    return psi, QuantumState.from_vector(z)


def random_gaussian(rng: np.random.Generator) -> GaussianStateParams:
    return GaussianStateParams(
        q0=float(rng.uniform(-2, 2)),
        p0=float(rng.uniform(-2, 2)),
        a=float(rng.uniform(0.3, 3.0)),
        b=float(rng.uniform(-1, 1)),
    )


def random_quadratic_hamiltonian(rng: np.random.Generator) -> QuadraticHamiltonian:
    M = rng.normal(size=(2, 2))
    return QuadraticHamiltonian(0.5 * (M + M.T), rng.normal(size=2))


def _preparation(model: OntologicalModel, rng):
    if isinstance(model, WignerGaussianModel):
        return random_gaussian(rng)
    return random_state(model.N, rng)


def _evolution(model: OntologicalModel, rng):
    if isinstance(model, WignerGaussianModel):
        return flow_map(random_quadratic_hamiltonian(rng), float(rng.uniform(-2, 2)))
    return random_unitary(model.N, rng)


def _models(cfg: ExperimentConfig) -> list[str]:
    return [cfg.model] if cfg.model else list(COMPATIBLE[cfg.experiment])


# --- batteries -------------------------------------------------------------------


def born_battery(cfg: ExperimentConfig) -> list[ReportRow]:
    rows = []
    for name in _models(cfg):
        model = build_model(name, cfg.N)
        for i in range(BORN_PAIRS):
            seed = derive_seed(cfg.seed, "born", name, i)
            rng = np.random.default_rng(seed)
            context = None
            if name == "bell-df":
                psi = random_state(model.N, rng)
                context = MeasurementContext.from_unitary(random_unitary(model.N, rng))
                event = context.basis[int(rng.integers(model.N))]
            elif name == "wigner-gaussian":
                psi = random_gaussian(rng)
                theta = KS_THETAS[i % len(KS_THETAS)]
                mu, sigma = phase_space.quadrature_moments(psi, theta)
                event = QuadratureEvent(theta, mu + sigma * float(rng.uniform(-1.5, 1.5)))
            else:
                psi = random_state(model.N, rng)
                event = random_state(model.N, rng)
            rep = check_born_rule(model, psi, event, cfg.samples, rng, context=context,
                                  draw_outcomes=not model.dispersion_free)
            rows.append(ReportRow("born", name, model.N, rep.n, rep.estimate, rep.exact,
                                  rep.z_score, None, seed, rep.passed, index=i))
    return rows


def property_battery(cfg: ExperimentConfig) -> list[ReportRow]:
    rows = []
    n = cfg.samples
    for name in _models(cfg):
        model = build_model(name, cfg.N)
        N = model.N
        quantum = not isinstance(model, WignerGaussianModel)
        if quantum:
            for i in range(DISJOINT_PAIRS):
                seed = derive_seed(cfg.seed, "property3", name, i)
                rng = np.random.default_rng(seed)
                psi, perp = random_orthogonal_pair(model.N, rng)
                rep = check_property3(model, psi, perp, n, rng)
                rows.append(ReportRow("property3", name, N, n, None, None, None,
                                      rep.overlap_count, seed, rep.overlap_count == 0, index=i))
                if name == "qubit-df":
                    ctrl = q_function_counterexample(psi, perp)
                    rows.append(ReportRow("property3-husimi-control", "husimi-q", 2, ctrl.n_samples,
                                          ctrl.max_foreign_density, None, None, ctrl.overlap_count,
                                          seed, ctrl.overlap_count > 0, index=i))
        for i in range(FLOW_TRIALS):
            seed = derive_seed(cfg.seed, "property1-flow", name, i)
            rng = np.random.default_rng(seed)
            rep = check_property1_flow(model, _preparation(model, rng), _evolution(model, rng), n, rng)
            rows.append(ReportRow("property1-flow", name, N, n, None, None, None,
                                  rep.overlap_count, seed, rep.overlap_count == 0, index=i))
        for i in range(FLOW_TRIALS):
            seed = derive_seed(cfg.seed, "composition", name, i)
            rng = np.random.default_rng(seed)
            prep = _preparation(model, rng)
            dev = check_composition(model, prep, _evolution(model, rng), _evolution(model, rng),
                                    min(n, 1000), rng)
            rows.append(ReportRow("composition", name, N, min(n, 1000), dev, 0.0, None, None,
                                  seed, dev < 1e-9, index=i))
        if quantum and model.dispersion_free:
            for i in range(FLOW_TRIALS):
                seed = derive_seed(cfg.seed, "exclusivity", name, i)
                rng = np.random.default_rng(seed)
                psi = random_state(model.N, rng)
                ctx = MeasurementContext.from_unitary(random_unitary(model.N, rng))
                bad = check_exclusivity(model, psi, ctx, n, rng)
                rows.append(ReportRow("exclusivity", name, N, n, None, None, None, bad, seed,
                                      bad == 0, index=i))
    return rows


def witness_battery(cfg: ExperimentConfig) -> tuple[list[ReportRow], list[dict]]:
    N = cfg.N or DEFAULT_BELL_N
    ctx = MeasurementContext.computational(N)
    cyclic = list(range(1, N)) + [0]
    witnesses = []
    found = 0
    for i in range(WITNESS_TRIALS):
        rng = np.random.default_rng(derive_seed(cfg.seed, "contextuality", "bell-df", i))
        chi = random_state(N, rng)
        while np.min(bell_model.weights(chi, ctx)) <= WITNESS_MIN_WEIGHT:
            chi = random_state(N, rng)
        w = contextuality_witness(chi, ctx, cyclic)
        if w is not None:
            found += 1
            witnesses.append({"index": i, "outcome_original": w.outcome_original + 1,
                              "outcome_permuted": w.outcome_permuted + 1, "lambda": w.lam})
    rows = [ReportRow("contextuality-rate", "bell-df", N, WITNESS_TRIALS, found / WITNESS_TRIALS,
                      WITNESS_REQUIRED / WITNESS_TRIALS, None, None, cfg.seed,
                      found >= WITNESS_REQUIRED)]
    if N == 3:
        chi = QuantumState.from_vector(np.ones(3))
        X = bell_model.BellOnticState(chi, 0.5)
        a = bell_model.measure(X, ctx)
        b = cyclic[bell_model.measure(X, ctx.permuted(cyclic)) - 1] + 1
        witnesses.insert(0, {"index": "uniform", "outcome_original": a, "outcome_permuted": b,
                             "lambda": 0.5})
        rows.append(ReportRow("contextuality-uniform", "bell-df", 3, None, 0.5, None, None,
                              None, None, (a, b) == (2, 3)))
    return rows, witnesses


def wigner_battery(cfg: ExperimentConfig) -> list[ReportRow]:
    rows = []
    name = "wigner-gaussian"
    n = cfg.samples
    for j in range(KS_PARAM_SETS):
        for k, theta in enumerate(KS_THETAS):
            i = j * len(KS_THETAS) + k
            seed = derive_seed(cfg.seed, "wigner-ks", name, i)
            rng = np.random.default_rng(seed)
            g = random_gaussian(np.random.default_rng(derive_seed(cfg.seed, "wigner-params", name, j)))
            x = phase_space.quadrature(phase_space.sample(g, rng, size=n), theta)
            mu, sigma = phase_space.quadrature_moments(g, theta)
            res = stats.kstest(x, stats.norm(loc=mu, scale=sigma).cdf)
            rows.append(ReportRow("wigner-ks", name, None, n, float(res.pvalue), None, None, None,
                                  seed, bool(res.pvalue > KS_ALPHA), index=i))
    for j in range(10):
        g = random_gaussian(np.random.default_rng(derive_seed(cfg.seed, "wigner-marginal", name, j)))
        xs = g.q0 + np.sqrt(g.a / 2) * np.linspace(-5, 5, 100)
        err = max(abs(phase_space.marginal_q_numeric(float(x), g) - phase_space.marginal_q_density(x, g))
                  for x in xs)
        rows.append(ReportRow("wigner-marginal", name, None, 100, float(err), 0.0, None, None, None,
                              err < 1e-8, index=j))
    for i in range(FLOW_TRIALS):
        seed = derive_seed(cfg.seed, "symplectic", name, i)
        rng = np.random.default_rng(seed)
        F = flow_map(random_quadratic_hamiltonian(rng), float(rng.uniform(-1, 1)))
        dev = abs(np.linalg.det(F.M) - 1.0)
        rows.append(ReportRow("symplectic-det", name, None, None, float(dev), 0.0, None, None, seed,
                              dev < 1e-10, index=i))
    for i in range(5):
        seed = derive_seed(cfg.seed, "gaussian-closure", name, i)
        rng = np.random.default_rng(seed)
        g = random_gaussian(rng)
        F = flow_map(random_quadratic_hamiltonian(rng), float(rng.uniform(-1, 1)))
        dev = closure_deviation(g, F, n, rng)
        rows.append(ReportRow("gaussian-closure", name, None, n, dev, 0.0, None, None, seed,
                              dev < 0.05, index=i))
    return rows


def closure_deviation(g: GaussianStateParams, F, n: int, rng) -> float:
    """Evolve samples through ``F`` and compare fitted moments with the pushed
    forward Gaussian. Each mean and covariance entry is measured relative to
    the scale of its own variance, so entries near zero do not blow up."""
    z = F(phase_space.sample(g, rng, size=n).as_array())
    target = phase_space.evolve_params(g, F)
    cov_t = target.covariance()
    cov_s = np.cov(z, rowvar=False)
    sd = np.sqrt(np.diag(cov_t))
    mean_dev = np.abs(z.mean(axis=0) - target.mean) / sd
    cov_dev = np.abs(cov_s - cov_t) / np.outer(sd, sd)
    return float(max(mean_dev.max(), cov_dev.max()))


def dimension_battery(cfg: ExperimentConfig) -> list[ReportRow]:
    rows = []
    for i, name in enumerate(_models(cfg)):
        audit = audit_dimension(build_model(name, cfg.N))
        rows.append(ReportRow("dimension-audit", name, audit.N, None, float(audit.ontic_dim),
                              None if audit.bound is None else float(audit.bound), None, None,
                              None, audit.satisfies, index=i))
    return rows


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list[ReportRow]
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    cfg = cfg.validated()
    extra = {"experiment": cfg.experiment, "master_seed": cfg.seed}
    if cfg.experiment == "born-test":
        rows = born_battery(cfg)
    elif cfg.experiment == "property-suite":
        rows = property_battery(cfg)
    elif cfg.experiment == "contextuality-demo":
        rows, witnesses = witness_battery(cfg)
        extra["witnesses"] = witnesses
    elif cfg.experiment == "wigner-demo":
        rows = wigner_battery(cfg)
    else:
        rows = dimension_battery(cfg)
    return ExperimentResult(cfg, sort_rows(rows), extra)
