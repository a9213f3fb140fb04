"""Adaptive LCMV beamformers.

All filters share one interface: ``output(x)`` evaluates the array output
without touching the state, ``iterate(x)`` consumes a snapshot and returns
``(y, updated)`` and ``weight`` is the effective full-rank weight vector
(``T_r @ w_bar`` for the reduced-rank filters).

Four algorithms are provided:

* :class:`FullRankSG` - constrained (Frost-type) stochastic gradient.
* :class:`FullRankSMSG` - its set-membership version, step set so the
  updated output hits the bound.
* :class:`JioSG` - joint iterative optimization of the projection matrix
  and the reduced-rank weight with fixed step sizes.
* :class:`JioSMSG` - the set-membership JIO filter with data-selective
  updates and adaptive step sizes.
"""

from __future__ import annotations

import numpy as np

from .array_model import ConfigurationError
from .bounds import BoundPolicy, NoiseEstimate

SKIP_TOL = 1e-12


def _norm_sq(v) -> float:
    return float(np.vdot(v, v).real)


def apply_projector(v, a, normalized=True):
    """``(I - a a^H / a^H a) v``, or ``(I - a a^H) v`` when not normalized."""
    c = np.vdot(a, v)
    if normalized:
        c = c / _norm_sq(a)
    return v - a * c


def _gated(y, delta) -> bool:
    return abs(y) ** 2 < delta ** 2 or abs(y) == 0.0


# -- step sizes --------------------------------------------------------------

def jio_mu_T(y, delta, w_bar, x, a0, normalized=True):
    """Step size for the projection-matrix update.

    Returns 0 when the output is inside the bound and ``None`` when the
    denominator ``||w_bar||^2 x^H P x`` is too small to use (the caller
    then skips the update).  With ``normalized=False`` the matrix
    ``I - a0 a0^H`` is used as printed, which is not a projector unless
    ``||a0|| = 1``; the denominator may then be negative.
    """
    if _gated(y, delta):
        return 0.0
    den = _norm_sq(w_bar) * float(np.vdot(x, apply_projector(x, a0, normalized)).real)
    scale = _norm_sq(w_bar) * _norm_sq(x)
    if abs(den) <= SKIP_TOL * max(scale, 1.0):
        return None
    return (1.0 - delta / abs(y)) / den


def jio_mu_w(y, delta, x_bar, a_bar):
    """Step size for the reduced-rank weight update (``None`` means skip)."""
    if not np.any(a_bar):
        raise ValueError("reduced steering vector must be nonzero")
    if _gated(y, delta):
        return 0.0
    den = float(np.vdot(x_bar, apply_projector(x_bar, a_bar)).real)
    if den <= SKIP_TOL * max(_norm_sq(x_bar), 1.0):
        return None
    return (1.0 - delta / abs(y)) / den


# -- updates -----------------------------------------------------------------

def jio_projection_update(T_r, mu_T, y, x, w_bar, a0, normalized=True):
    """``T_r - mu_T conj(y) P x w_bar^H`` (a rank-one correction)."""
    if mu_T == 0:
        return np.array(T_r, copy=True)
    px = apply_projector(x, a0, normalized)
    return T_r - mu_T * np.conj(y) * np.outer(px, np.conj(w_bar))


def jio_weight_update(w_bar, mu_w, y, x_bar, a_bar):
    """``w_bar - mu_w conj(y) P_a x_bar``; leaves ``w_bar^H a_bar`` unchanged."""
    if mu_w == 0:
        return np.array(w_bar, copy=True)
    return w_bar - mu_w * np.conj(y) * apply_projector(x_bar, a_bar)


def full_rank_sg_step(w, x, mu, a0):
    y = np.vdot(w, x)
    if mu == 0:
        return np.array(w, copy=True), y
    return w - mu * np.conj(y) * apply_projector(x, a0), y


def full_rank_sm_sg_step(w, x, delta, a0):
    """Data-selective update; returns ``(w, y, updated)``.

    When ``|y| >= delta`` the step ``(1 - delta/|y|) / x^H P x`` makes the
    output of the updated weight for the same ``x`` exactly ``delta`` in
    magnitude.
    """
    y = np.vdot(w, x)
    if _gated(y, delta):
        return w, y, False
    px = apply_projector(x, a0)
    den = float(np.vdot(x, px).real)
    if den <= SKIP_TOL * max(_norm_sq(x), 1.0):
        return w, y, False
    mu = (1.0 - delta / abs(y)) / den
    return w - mu * np.conj(y) * px, y, True


# -- state machines ----------------------------------------------------------

class _Beamformer:
    name = "base"

    def __init__(self):
        self.updates_performed = 0
        self.snapshots_seen = 0

    @property
    def weight(self) -> np.ndarray:
        raise NotImplementedError

    def output(self, x):
        return np.vdot(self.weight, self._check(x))

    def _check(self, x):
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.m,):
            raise ValueError(f"snapshot has shape {x.shape}, expected ({self.m},)")
        return x

    def _count(self, updated: bool):
        self.snapshots_seen += 1
        self.updates_performed += int(updated)


class FullRankSG(_Beamformer):
    name = "fr-sg"

    def __init__(self, a0, mu, gamma=1.0):
        super().__init__()
        self.a0 = np.asarray(a0, dtype=complex)
        self.m = self.a0.size
        self.mu = float(mu)
        self.gamma = gamma
        self.w = np.conj(gamma) * self.a0 / _norm_sq(self.a0)

    @property
    def weight(self):
        return self.w

    def iterate(self, x, noise_obs=None):
        x = self._check(x)
        self.w, y = full_rank_sg_step(self.w, x, self.mu, self.a0)
        self._count(self.mu != 0)
        return y, self.mu != 0


class FullRankSMSG(FullRankSG):
    name = "fr-sm-sg"

    def __init__(self, a0, bound: BoundPolicy, noise: NoiseEstimate | None = None, gamma=1.0):
        super().__init__(a0, mu=0.0, gamma=gamma)
        self.bound = bound
        self.noise = noise if noise is not None else NoiseEstimate(1.0)
        self.bound.initialize(_norm_sq(self.w), self.noise.value)

    def iterate(self, x, noise_obs=None):
        x = self._check(x)
        sigma2 = self.noise.update(noise_obs)
        delta = self.bound.update(_norm_sq(self.w), sigma2)
        self.w, y, updated = full_rank_sm_sg_step(self.w, x, delta, self.a0)
        self._count(updated)
        return y, updated


def initial_projection(m: int, rank: int) -> np.ndarray:
    """``[I_r 0]^T``: the first ``rank`` sensors pass straight through."""
    if not 1 <= rank <= m:
        raise ConfigurationError(f"rank must satisfy 1 <= r <= m={m}, got {rank}")
    T = np.zeros((m, rank), dtype=complex)
    T[:rank, :rank] = np.eye(rank)
    return T


class _ReducedRank(_Beamformer):
    def __init__(self, a0, rank, gamma=1.0, normalized_projector=True, reproject=False):
        super().__init__()
        self.a0 = np.asarray(a0, dtype=complex)
        self.m = self.a0.size
        self.rank = int(rank)
        self.gamma = gamma
        self.normalized_projector = normalized_projector
        self.reproject = reproject
        self.T = initial_projection(self.m, self.rank)
        self.a_bar = self.T.conj().T @ self.a0
        self.w_bar = np.conj(gamma) * self.a_bar / _norm_sq(self.a_bar)

    @property
    def weight(self):
        return self.T @ self.w_bar

    def output(self, x):
        return np.vdot(self.w_bar, self.T.conj().T @ self._check(x))

    def _reproject(self):
        c = np.vdot(self.w_bar, self.a_bar)
        self.w_bar = self.w_bar + self.a_bar * np.conj(self.gamma - c) / _norm_sq(self.a_bar)


class JioSG(_ReducedRank):
    name = "jio-sg"

    def __init__(self, a0, rank, mu_T, mu_w, gamma=1.0, normalized_projector=True,
                 reproject=False):
        super().__init__(a0, rank, gamma, normalized_projector, reproject)
        self.mu_T = float(mu_T)
        self.mu_w = float(mu_w)

    def iterate(self, x, noise_obs=None):
        x = self._check(x)
        x_bar = self.T.conj().T @ x
        y = np.vdot(self.w_bar, x_bar)
        w_bar = self.w_bar
        self.T = jio_projection_update(self.T, self.mu_T, y, x, w_bar, self.a0,
                                       self.normalized_projector)
        self.a_bar = self.T.conj().T @ self.a0
        if self.reproject:
            self._reproject()
        self.w_bar = jio_weight_update(self.w_bar, self.mu_w, y, x_bar, self.a_bar)
        updated = self.mu_T != 0 or self.mu_w != 0
        self._count(updated)
        return y, updated


class JioSMSG(_ReducedRank):
    """Set-membership JIO filter.

    Per snapshot: reduce ``x``, form ``y``, advance the bound; if
    ``|y|^2 >= delta^2`` update ``T_r`` first, refresh the reduced steering
    vector, then update ``w_bar`` with the same ``y`` and ``x_bar``.
    Either sub-update is skipped when its step-size denominator is
    degenerate.
    """

    name = "jio-sm-sg"

    def __init__(self, a0, rank, bound: BoundPolicy, noise: NoiseEstimate | None = None,
                 gamma=1.0, normalized_projector=True, reproject=False):
        super().__init__(a0, rank, gamma, normalized_projector, reproject)
        self.bound = bound
        self.noise = noise if noise is not None else NoiseEstimate(1.0)
        self.bound.initialize(_norm_sq(self.weight), self.noise.value)
        self.last_mu_T = 0.0
        self.last_mu_w = 0.0

    @property
    def delta(self):
        return self.bound.delta

    def iterate(self, x, noise_obs=None):
        x = self._check(x)
        x_bar = self.T.conj().T @ x
        y = np.vdot(self.w_bar, x_bar)
        sigma2 = self.noise.update(noise_obs)
        delta = self.bound.update(_norm_sq(self.weight), sigma2)
        self.last_mu_T = self.last_mu_w = 0.0
        if abs(y) ** 2 < delta ** 2 or abs(y) == 0.0:
            self._count(False)
            return y, False

        updated = False
        mu_T = jio_mu_T(y, delta, self.w_bar, x, self.a0, self.normalized_projector)
        if mu_T is not None and mu_T != 0:
            self.T = jio_projection_update(self.T, mu_T, y, x, self.w_bar, self.a0,
                                           self.normalized_projector)
            self.a_bar = self.T.conj().T @ self.a0
            if self.reproject:
                self._reproject()
            self.last_mu_T = mu_T
            updated = True
        mu_w = jio_mu_w(y, delta, x_bar, self.a_bar)
        if mu_w is not None and mu_w != 0:
            self.w_bar = jio_weight_update(self.w_bar, mu_w, y, x_bar, self.a_bar)
            self.last_mu_w = mu_w
            updated = True
        self._count(updated)
        return y, updated
