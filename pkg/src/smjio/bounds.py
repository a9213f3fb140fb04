"""Bounds for the set-membership update gate.

Two policies are supported: a fixed bound, and the parameter-dependent
bound (PDB)

    delta(i) = beta * delta(i-1) + (1 - beta) * sqrt(alpha * ||w(i)||^2 * sigma2(i))

where ``w = T_r w_bar`` for the reduced-rank filter and ``sigma2`` is a noise
power estimate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array_model import ConfigurationError

BOUND_MODES = ("fixed", "pdb")
NOISE_MODES = ("known", "smoothed")


@dataclass
class NoiseEstimate:
    """Noise power estimate fed to the PDB.

    ``known`` always reports the configured power.  ``smoothed`` runs
    ``s(i) = rho * s(i-1) + (1 - rho) * v(i)`` on instantaneous values
    ``v(i)`` supplied by the caller, starting from the configured power.
    """

    value: float
    mode: str = "known"
    rho: float = 0.9

    def __post_init__(self):
        if self.mode not in NOISE_MODES:
            raise ConfigurationError(f"noise.mode must be one of {NOISE_MODES}, got {self.mode!r}")
        if not self.value > 0:
            raise ConfigurationError(f"noise power must be > 0, got {self.value}")
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigurationError(f"noise.rho must lie in [0, 1], got {self.rho}")

    def update(self, instantaneous: float | None = None) -> float:
        if self.mode == "known":
            return self.value
        if instantaneous is None:
            return self.value
        if not instantaneous > 0:
            raise ConfigurationError(f"instantaneous noise power must be > 0, got {instantaneous}")
        self.value = self.rho * self.value + (1.0 - self.rho) * float(instantaneous)
        return self.value


def noise_power_estimate(estimate: NoiseEstimate, value: float | None = None) -> float:
    """Advance ``estimate`` by one observation and return the new power."""
    return estimate.update(value)


@dataclass
class BoundPolicy:
    mode: str = "pdb"
    delta: float = 1.0
    alpha: float = 22.0
    beta: float = 0.99

    def __post_init__(self):
        if self.mode not in BOUND_MODES:
            raise ConfigurationError(f"bound.mode must be one of {BOUND_MODES}, got {self.mode!r}")
        if self.mode == "pdb" and not self.alpha > 1:
            raise ConfigurationError(f"bound.alpha must be > 1, got {self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise ConfigurationError(f"bound.beta must lie in [0, 1], got {self.beta}")
        if self.delta < 0:
            raise ConfigurationError(f"bound.delta_fixed must be >= 0, got {self.delta}")

    def target(self, weight_norm_sq: float, noise_power: float) -> float:
        return float(np.sqrt(self.alpha * weight_norm_sq * noise_power))

    def initialize(self, weight_norm_sq: float, noise_power: float) -> float:
        # Fixed point of the recursion at the initial weights.
        if self.mode == "pdb":
            self.delta = self.target(weight_norm_sq, noise_power)
        return self.delta

    def update(self, weight_norm_sq: float, noise_power: float) -> float:
        if self.mode == "pdb":
            self.delta = (self.beta * self.delta
                          + (1.0 - self.beta) * self.target(weight_norm_sq, noise_power))
        return self.delta


def _reduced_norm_sq(T_r, w_bar) -> float:
    w = np.asarray(T_r) @ np.asarray(w_bar)
    return float(np.vdot(w, w).real)


def pdb_update(policy: BoundPolicy, T_r, w_bar, noise_power: float = 1.0) -> float:
    """One step of the bound recursion for a reduced-rank filter ``(T_r, w_bar)``."""
    return policy.update(_reduced_norm_sq(T_r, w_bar), noise_power)


def initial_bound(policy: BoundPolicy, T_r, w_bar, noise_power: float = 1.0) -> float:
    return policy.initialize(_reduced_norm_sq(T_r, w_bar), noise_power)
