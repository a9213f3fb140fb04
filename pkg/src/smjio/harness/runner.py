"""Monte Carlo driver.

Run ``k`` draws its random numbers from ``SeedSequence(seed, spawn_key=(k, 0))``
(snapshots) and ``SeedSequence(seed, spawn_key=(k, 1))`` (random DOA layout),
so any single run can be replayed in isolation and the result does not
depend on how runs are spread over worker processes.  Per-snapshot SINR is
averaged linearly over runs and then converted to dB.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..array_model import ScenarioConfig, desired_steering, snapshot_stream, true_covariance
from ..beamformers import FullRankSG, FullRankSMSG, JioSG, JioSMSG
from ..bounds import BoundPolicy, NoiseEstimate
from ..numerics import NumericalError, lcmv_optimal_weight
from .config import AlgorithmSpec, ExperimentConfig

SINR_FLOOR_DB = -100.0


def to_db(sinr):
    sinr = np.asarray(sinr, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        db = 10.0 * np.log10(sinr)
    # NaN (a diverged filter) propagates; zero SINR lands on the floor.
    return np.maximum(db, SINR_FLOOR_DB)


def output_sinr(w, config: ScenarioConfig, R_in=None):
    """Output SINR of weight ``w``: ``p0 |w^H a0|^2 / (w^H R_in w)``.

    Returns ``(linear, dB)``; the dB value is floored at -100.
    """
    w = np.asarray(w, dtype=complex)
    if not np.any(w):
        raise ValueError("weight vector must be nonzero")
    if R_in is None:
        R_in = true_covariance(config, exclude_desired=True)
    a0 = desired_steering(config)
    den = float(np.vdot(w, R_in @ w).real)
    if not den > 0:
        raise NumericalError(f"interference-plus-noise output power {den} is not positive")
    lin = config.desired_power * abs(np.vdot(w, a0)) ** 2 / den
    return lin, float(to_db(lin))


def child_seeds(master_seed: int, run: int):
    return (np.random.SeedSequence(master_seed, spawn_key=(run, 0)),
            np.random.SeedSequence(master_seed, spawn_key=(run, 1)))


def build_algorithm(spec: AlgorithmSpec, cfg: ExperimentConfig, scenario: ScenarioConfig):
    """Instantiate the beamformer for ``spec`` (``None`` for the oracle)."""
    if spec.overrides:
        cfg = cfg.replace(**dict(spec.overrides))
    a0 = desired_steering(scenario)
    gamma = scenario.gamma

    def bound():
        return BoundPolicy(mode=cfg.bound_mode, delta=cfg.delta_fixed, alpha=cfg.alpha,
                           beta=cfg.beta)

    def noise():
        return NoiseEstimate(scenario.noise_power, mode=cfg.noise_mode, rho=cfg.noise_rho)

    if spec.kind == "oracle":
        return None
    if spec.kind == "fr-sg":
        return FullRankSG(a0, cfg.mu_fr, gamma)
    if spec.kind == "fr-sm-sg":
        return FullRankSMSG(a0, bound(), noise(), gamma)
    if spec.kind == "jio-sg":
        return JioSG(a0, cfg.rank, cfg.mu_T, cfg.mu_w, gamma,
                     cfg.normalized_projector, cfg.reproject)
    return JioSMSG(a0, cfg.rank, bound(), noise(), gamma, cfg.normalized_projector,
                   cfg.reproject)


@dataclass
class RunResult:
    run: int
    sinr: np.ndarray      # (n_algorithms, N) linear
    flags: np.ndarray     # (n_algorithms, N) bool
    oracle_sinr: float


def run_single(cfg: ExperimentConfig, run: int) -> RunResult:
    """One Monte Carlo run: every algorithm sees the same snapshot stream."""
    snap_seed, doa_seed = child_seeds(cfg.seed, run)
    scenario = cfg.scenario(rng=np.random.default_rng(doa_seed))
    R_in = true_covariance(scenario, exclude_desired=True)
    R = true_covariance(scenario)
    a0 = desired_steering(scenario)
    p0 = scenario.desired_power

    def sinr(w):
        return p0 * abs(np.vdot(w, a0)) ** 2 / np.vdot(w, R_in @ w).real

    w_opt = lcmv_optimal_weight(R, a0, scenario.gamma)
    oracle = sinr(w_opt)

    specs = cfg.specs
    algos = [build_algorithm(s, cfg, scenario) for s in specs]
    n = cfg.snapshots
    out = np.empty((len(specs), n))
    flags = np.zeros((len(specs), n), dtype=bool)
    rng = np.random.default_rng(snap_seed)
    for i, snap in enumerate(snapshot_stream(scenario, rng, n)):
        noise_obs = float(np.vdot(snap.noise, snap.noise).real) / scenario.m
        for j, bf in enumerate(algos):
            if bf is None:
                out[j, i] = oracle
                continue
            _, flags[j, i] = bf.iterate(snap.x, noise_obs)
            out[j, i] = sinr(bf.weight)
    return RunResult(run=run, sinr=out, flags=flags, oracle_sinr=oracle)


def _run_star(args):
    return run_single(*args)


@dataclass
class ExperimentResult:
    labels: tuple[str, ...]
    mean_sinr: np.ndarray             # (n_algorithms, N) linear, averaged over runs
    cum_update_fraction: np.ndarray   # (n_algorithms, N)
    runs: int
    per_run: list[RunResult] = field(default_factory=list, repr=False)

    @property
    def mean_sinr_db(self):
        return to_db(self.mean_sinr)

    @property
    def snapshots(self):
        return self.mean_sinr.shape[1]

    def curve(self, label):
        j = self.labels.index(label)
        return self.mean_sinr_db[j], self.cum_update_fraction[j]

    def summary(self) -> dict[str, dict[str, float]]:
        db = self.mean_sinr_db
        return {
            lab: {
                "final_sinr_db": float(db[j, -1]),
                "final_update_fraction": float(self.cum_update_fraction[j, -1]),
                "updates_per_run": float(self.cum_update_fraction[j, -1] * self.snapshots),
            }
            for j, lab in enumerate(self.labels)
        }


def run_experiment(cfg: ExperimentConfig, keep_runs: bool = False) -> ExperimentResult:
    """Run ``cfg.runs`` independent runs and reduce them in run order."""
    jobs = [(cfg, k) for k in range(cfg.runs)]
    if cfg.workers > 1 and cfg.runs > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_star, jobs))
    else:
        results = [run_single(c, k) for c, k in jobs]

    specs = cfg.specs
    n = cfg.snapshots
    total = np.zeros((len(specs), n))
    frac = np.zeros((len(specs), n))
    idx = np.arange(1, n + 1)
    for res in results:
        total += res.sinr
        frac += np.cumsum(res.flags, axis=1) / idx
    return ExperimentResult(labels=tuple(s.label for s in specs), mean_sinr=total / cfg.runs,
                            cum_update_fraction=frac / cfg.runs, runs=cfg.runs,
                            per_run=results if keep_runs else [])
