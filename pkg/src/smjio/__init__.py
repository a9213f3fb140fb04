"""Set-membership reduced-rank (JIO) LCMV adaptive beamforming."""

from .array_model import (ConfigurationError, ScenarioConfig, Snapshot, array_manifold,
                          build_scenario, generate_snapshot, sample_covariance,
                          steering_vector, true_covariance)
from .beamformers import FullRankSG, FullRankSMSG, JioSG, JioSMSG
from .bounds import BoundPolicy, NoiseEstimate
from .numerics import NumericalError, lcmv_optimal_weight, solve_hermitian_pd

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "ScenarioConfig", "Snapshot", "array_manifold", "build_scenario",
    "generate_snapshot", "sample_covariance", "steering_vector", "true_covariance",
    "FullRankSG", "FullRankSMSG", "JioSG", "JioSMSG", "BoundPolicy", "NoiseEstimate",
    "NumericalError", "lcmv_optimal_weight", "solve_hermitian_pd",
]
