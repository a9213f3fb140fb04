"""Narrowband ULA signal model: steering vectors, snapshots and covariances."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class ConfigurationError(ValueError):
    """Raised for invalid scenario or algorithm parameters."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Statistical world seen by the array.

    ``doas[0]`` and ``powers[0]`` describe the desired user; the remaining
    entries are interferers.  Angles are in degrees, powers are linear.
    """

    m: int
    doas: tuple[float, ...]
    powers: tuple[float, ...]
    noise_power: float
    element_spacing_ratio: float = 0.5
    gamma: complex = 1.0
    phases: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "doas", tuple(float(d) for d in self.doas))
        object.__setattr__(self, "powers", tuple(float(p) for p in self.powers))
        if self.phases is not None:
            object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))
        self.validate()

    @property
    def q(self) -> int:
        return len(self.doas)

    @property
    def desired_power(self) -> float:
        return self.powers[0] if self.powers else 0.0

    def validate(self) -> None:
        if self.m < 1:
            raise ConfigurationError(f"m must be >= 1, got {self.m}")
        if len(self.powers) != len(self.doas):
            raise ConfigurationError(
                f"got {len(self.doas)} DOAs but {len(self.powers)} powers")
        if self.q > self.m:
            raise ConfigurationError(f"q={self.q} sources exceed m={self.m} sensors")
        if any(p < 0 for p in self.powers):
            raise ConfigurationError("source powers must be >= 0")
        if not self.noise_power > 0:
            raise ConfigurationError(f"noise_power must be > 0, got {self.noise_power}")
        if not self.element_spacing_ratio > 0:
            raise ConfigurationError("element_spacing_ratio must be > 0")
        for theta in self.doas:
            if not 0.0 < theta < 180.0:
                raise ConfigurationError(f"DOA {theta} deg outside (0, 180)")
        if len(set(self.doas)) != len(self.doas):
            raise ConfigurationError("DOAs must be pairwise distinct")
        if self.phases is not None and len(self.phases) != self.q:
            raise ConfigurationError("phases must have one entry per source")


@dataclass
class Snapshot:
    x: np.ndarray
    symbols: np.ndarray
    noise: np.ndarray = field(repr=False)


def steering_vector(theta: float, m: int, spacing_ratio: float = 0.5) -> np.ndarray:
    """ULA response ``exp(-2j*pi*k*(d/lambda)*cos(theta))`` for ``k = 0..m-1``."""
    if m < 1:
        raise ConfigurationError(f"m must be >= 1, got {m}")
    if not 0.0 < theta < 180.0:
        raise ConfigurationError(f"theta={theta} deg outside (0, 180)")
    phase = -2.0 * np.pi * spacing_ratio * np.cos(np.deg2rad(theta))
    return np.exp(1j * phase * np.arange(m))


def array_manifold(config: ScenarioConfig) -> np.ndarray:
    """m x q matrix whose k-th column is the steering vector of ``doas[k]``."""
    if len(set(config.doas)) != len(config.doas):
        raise ConfigurationError("DOAs must be pairwise distinct")
    cols = [steering_vector(t, config.m, config.element_spacing_ratio) for t in config.doas]
    if not cols:
        return np.zeros((config.m, 0), dtype=complex)
    return np.stack(cols, axis=1)


def desired_steering(config: ScenarioConfig) -> np.ndarray:
    return steering_vector(config.doas[0], config.m, config.element_spacing_ratio)


def generate_snapshot(config: ScenarioConfig, rng: np.random.Generator,
                      manifold: np.ndarray | None = None,
                      bits: np.ndarray | None = None) -> Snapshot:
    """Draw one received vector ``x = A s + n``.

    Symbols are BPSK (+-1) scaled by the source amplitude and an optional
    fixed carrier phase.  Noise is circular complex Gaussian with total
    per-element variance ``noise_power``.  ``bits`` forces the BPSK signs
    (values +-1) and skips the symbol draw.
    """
    A = array_manifold(config) if manifold is None else manifold
    q, m = config.q, config.m
    if bits is None:
        bits = 2.0 * rng.integers(0, 2, size=q) - 1.0
    amps = np.sqrt(np.asarray(config.powers))
    symbols = amps * np.asarray(bits, dtype=float)
    if config.phases is not None:
        symbols = symbols * np.exp(1j * np.asarray(config.phases))
    symbols = symbols.astype(complex)
    g = rng.standard_normal((2, m))
    noise = np.sqrt(config.noise_power / 2.0) * (g[0] + 1j * g[1])
    x = A @ symbols + noise
    return Snapshot(x=x, symbols=symbols, noise=noise)


def snapshot_stream(config: ScenarioConfig, rng: np.random.Generator, n: int):
    """Yield ``n`` successive snapshots from one random stream."""
    A = array_manifold(config)
    for _ in range(n):
        yield generate_snapshot(config, rng, manifold=A)


def true_covariance(config: ScenarioConfig, exclude_desired: bool = False) -> np.ndarray:
    """Exact covariance ``sum_k p_k a_k a_k^H + sigma^2 I``.

    With ``exclude_desired`` the desired user is left out, giving the
    interference-plus-noise covariance used for SINR evaluation.
    """
    A = array_manifold(config)
    p = np.asarray(config.powers, dtype=float)
    if exclude_desired and config.q:
        A, p = A[:, 1:], p[1:]
    R = (A * p) @ A.conj().T + config.noise_power * np.eye(config.m)
    return 0.5 * (R + R.conj().T)


def sample_covariance(snapshots: Sequence[Snapshot] | np.ndarray) -> np.ndarray:
    """``(1/N) sum x x^H`` over snapshots (or rows of an N x m array)."""
    if isinstance(snapshots, np.ndarray):
        X = np.atleast_2d(snapshots)
    else:
        if len(snapshots) == 0:
            raise ValueError("sample_covariance needs at least one snapshot")
        X = np.stack([s.x for s in snapshots])
    if X.shape[0] == 0:
        raise ValueError("sample_covariance needs at least one snapshot")
    R = X.T @ X.conj() / X.shape[0]
    return 0.5 * (R + R.conj().T)


def evenly_spaced_interferers(n: int, theta0: float = 90.0, lo: float = 20.0,
                              hi: float = 160.0, guard: float = 5.0) -> list[float]:
    """``n`` interferer angles spread evenly over (lo, hi) minus the guard band.

    The allowed set is treated as one interval of length
    ``(hi - lo) - 2*guard`` and divided into ``n + 1`` equal gaps, so the end
    points themselves are never used.
    """
    if n <= 0:
        return []
    left = max(0.0, min(hi, theta0 - guard) - lo)
    gap_lo, gap_hi = theta0 - guard, theta0 + guard
    total = (hi - lo) - (min(hi, gap_hi) - max(lo, gap_lo))
    out = []
    for k in range(1, n + 1):
        s = total * k / (n + 1)
        out.append(lo + s if s < left else gap_hi + (s - left))
    return out


def random_interferers(n: int, rng: np.random.Generator, theta0: float = 90.0,
                       lo: float = 20.0, hi: float = 160.0, guard: float = 5.0) -> list[float]:
    out: list[float] = []
    while len(out) < n:
        t = float(rng.uniform(lo, hi))
        if abs(t - theta0) > guard and t not in out:
            out.append(t)
    return out


def build_scenario(m: int = 64, q: int = 25, snr_db: float = 10.0, inr_db: float = 30.0,
                   theta0: float = 90.0, layout: str = "even", desired_power: float = 1.0,
                   spacing_ratio: float = 0.5, gamma: complex = 1.0,
                   rng: np.random.Generator | None = None) -> ScenarioConfig:
    """Scenario from SNR/INR in dB.

    The desired user has power ``desired_power``; the noise floor is set
    from the SNR and each interferer sits ``inr_db`` above the noise.
    """
    if q < 1:
        raise ConfigurationError("q must be >= 1 (the desired user)")
    noise_power = desired_power / 10 ** (snr_db / 10)
    if layout == "even":
        interferers = evenly_spaced_interferers(q - 1, theta0)
    elif layout == "random":
        if rng is None:
            raise ConfigurationError("random DOA layout needs an rng")
        interferers = random_interferers(q - 1, rng, theta0)
    else:
        raise ConfigurationError(f"unknown DOA layout {layout!r} (expected even|random)")
    powers = [desired_power] + [noise_power * 10 ** (inr_db / 10)] * (q - 1)
    return ScenarioConfig(m=m, doas=tuple([theta0] + interferers), powers=tuple(powers),
                          noise_power=noise_power, element_spacing_ratio=spacing_ratio,
                          gamma=gamma)
