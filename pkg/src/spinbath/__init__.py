"""Exact dynamics and decoherence analysis for a central spin in a spin bath.

A single qubit coupled to N uncoupled environment spins through a diagonal
dephasing interaction can be simulated two ways: a closed-form product over
sites, linear in N, and a brute-force dense state vector, exponential in N.
This package provides both, keeps them in agreement to 1e-10, and layers
decoherence diagnostics, seeded ensembles and a reproducible experiment
runner on top.
"""

from .analysis import (
    HBAR_EV_S,
    NEVER,
    DecoherenceVerdict,
    SweepRow,
    TimescaleReport,
    decoherence_time,
    fluctuation_stats,
    n_scaling_sweep,
    r_trajectory,
    recurrence_check,
    timescale_estimate,
    timescale_report,
    weak_limit_residual,
)
from .config import ExperimentConfig, config_from_dict, config_from_file, parse_observable_spec
from .engine import (
    GammaPair,
    ReducedState,
    expectation,
    gamma0,
    gamma1,
    gamma_pair,
    overlap_r,
    r_squared_bounds,
    reduced_system_state,
    single_spin_expectation,
)
from .ensemble import commensurate_model, sample_model, sample_observable
from .model import (
    RelevantObservable,
    RenormalizationRecord,
    SpinBathModel,
    Trajectory,
    eid_observable,
    make_model,
    make_observable,
    renormalized_model,
    single_site_observable,
)
from .oracle import (
    DenseState,
    SiteCapError,
    branch_states,
    build_initial,
    evolve,
    oracle_expectation,
    oracle_overlap,
    oracle_reduced_state,
)

__version__ = "0.1.0"

__all__ = [
    "HBAR_EV_S",
    "NEVER",
    "DecoherenceVerdict",
    "DenseState",
    "ExperimentConfig",
    "GammaPair",
    "ReducedState",
    "RelevantObservable",
    "RenormalizationRecord",
    "SiteCapError",
    "SpinBathModel",
    "SweepRow",
    "TimescaleReport",
    "Trajectory",
    "branch_states",
    "build_initial",
    "commensurate_model",
    "config_from_dict",
    "config_from_file",
    "decoherence_time",
    "eid_observable",
    "evolve",
    "expectation",
    "fluctuation_stats",
    "gamma0",
    "gamma1",
    "gamma_pair",
    "make_model",
    "make_observable",
    "n_scaling_sweep",
    "oracle_expectation",
    "oracle_overlap",
    "oracle_reduced_state",
    "overlap_r",
    "parse_observable_spec",
    "r_squared_bounds",
    "r_trajectory",
    "recurrence_check",
    "reduced_system_state",
    "renormalized_model",
    "sample_model",
    "sample_observable",
    "single_site_observable",
    "single_spin_expectation",
    "timescale_estimate",
    "timescale_report",
    "weak_limit_residual",
]
