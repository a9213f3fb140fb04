"""Hermitian positive-definite solves and the closed-form LCMV weight."""

import numpy as np
from scipy.linalg import solve_triangular

PIVOT_TOL = 1e-12


class NumericalError(ArithmeticError):
    """Raised when a matrix or weight is numerically unusable."""


def cholesky_lower(R, pivot_tol=PIVOT_TOL):
    """Lower Cholesky factor of a Hermitian PD matrix.

    The pivot check is relative to the largest diagonal entry so that
    scaling ``R`` does not change the verdict.
    """
    R = np.asarray(R, dtype=complex)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {R.shape}")
    scale = max(float(np.max(np.abs(np.diag(R)))), np.finfo(float).tiny)
    try:
        L = np.linalg.cholesky(R)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("matrix is not positive definite") from exc
    if np.min(np.abs(np.diag(L))) ** 2 <= pivot_tol * scale:
        raise NumericalError("Cholesky pivot below tolerance")
    return L


def solve_hermitian_pd(R, b):
    """Solve ``R x = b`` through a Cholesky factorization (no explicit inverse)."""
    L = cholesky_lower(R)
    b = np.asarray(b, dtype=complex)
    z = solve_triangular(L, b, lower=True)
    return solve_triangular(L.conj().T, z, lower=False)


def lcmv_optimal_weight(R, a0, gamma=1.0):
    """``w = gamma R^-1 a0 / (a0^H R^-1 a0)``, so that ``w^H a0 = gamma``.

    For complex ``gamma`` the scale factor is conjugated, otherwise the
    constraint would come out as ``conj(gamma)``.
    """
    a0 = np.asarray(a0, dtype=complex)
    if not np.any(a0):
        raise ValueError("a0 must be nonzero")
    v = solve_hermitian_pd(R, a0)
    denom = np.vdot(a0, v).real
    return np.conj(gamma) * v / denom
