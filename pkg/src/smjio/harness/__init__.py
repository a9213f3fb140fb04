from .config import ALGORITHMS, AlgorithmSpec, ExperimentConfig, load_config, parse_config
from .output import CSV_HEADER, csv_text, emit_plot, write_csv
from .runner import ExperimentResult, output_sinr, run_experiment, run_single

__all__ = [
    "ALGORITHMS", "AlgorithmSpec", "ExperimentConfig", "load_config", "parse_config",
    "CSV_HEADER", "csv_text", "emit_plot", "write_csv",
    "ExperimentResult", "output_sinr", "run_experiment", "run_single",
    "bound_sweep_specs",
]


def bound_sweep_specs(deltas, family="fr", include_pdb=True):
    """Algorithm specs comparing fixed bounds against the PDB bound."""
    kinds = {"fr": ["fr-sm-sg"], "jio": ["jio-sm-sg"], "both": ["fr-sm-sg", "jio-sm-sg"]}
    if family not in kinds:
        raise ValueError(f"family must be fr, jio or both, got {family!r}")
    specs = []
    for kind in kinds[family]:
        for d in deltas:
            specs.append(AlgorithmSpec(kind, f"{kind}[delta={d:g}]",
                                       (("bound_mode", "fixed"), ("delta_fixed", float(d)))))
        if include_pdb:
            specs.append(AlgorithmSpec(kind, f"{kind}[pdb]", (("bound_mode", "pdb"),)))
    return tuple(specs)
