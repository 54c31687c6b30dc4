"""Percolation on directed random graphs with given degree distributions.

The package samples uniform simple digraphs via the directed configuration
model, applies bond or site percolation, measures the largest strongly
connected component, and evaluates the analytic predictions (threshold
pi_c = mu / mu_11 and the giant-component fractions) that the Monte Carlo
results are checked against.
"""

__version__ = "0.1.0"

from .degrees import (
    DegreeDistribution,
    DegreeSequence,
    PropernessReport,
    Validity,
    distribution_from_spec,
    empirical_distribution,
    is_graphical,
    properness_report,
    read_distribution,
    read_sequence,
    realize_sequence,
    total_variation,
    validate,
    write_distribution,
    write_sequence,
)
from .configmodel import (
    Digraph,
    is_simple,
    matching_probability,
    read_edge_list,
    sample_configuration,
    sample_simple,
    simple_probability,
    write_edge_list,
)
from .percolation import (
    PercolationOutcome,
    bond_percolate,
    induced_degree_sequence,
    site_percolate,
)
from .components import (
    SccPartition,
    largest_scc_fraction,
    strong_component_of,
    strongly_connected_components,
)
from .theory import (
    CriticalThreshold,
    FixedPointResult,
    TheoryPrediction,
    bond_distribution,
    critical_threshold,
    gscc_fraction,
    pgf_eval,
    site_distribution,
    solve_fixed_point,
    u_minus,
    u_plus,
)
from .experiments import (
    ExperimentConfig,
    TrialRecord,
    load_config,
    make_rng,
    run_experiment,
    summarize,
    trial_seed,
    write_csv,
    write_summary,
)
from . import errors

__all__ = [
    "__version__",
    "errors",
    # degrees
    "DegreeSequence",
    "DegreeDistribution",
    "PropernessReport",
    "Validity",
    "validate",
    "is_graphical",
    "empirical_distribution",
    "properness_report",
    "realize_sequence",
    "total_variation",
    "distribution_from_spec",
    "read_distribution",
    "write_distribution",
    "read_sequence",
    "write_sequence",
    # configuration model
    "Digraph",
    "sample_configuration",
    "matching_probability",
    "sample_simple",
    "simple_probability",
    "is_simple",
    "read_edge_list",
    "write_edge_list",
    # percolation
    "PercolationOutcome",
    "bond_percolate",
    "site_percolate",
    "induced_degree_sequence",
    # components
    "SccPartition",
    "strongly_connected_components",
    "largest_scc_fraction",
    "strong_component_of",
    # theory
    "TheoryPrediction",
    "CriticalThreshold",
    "FixedPointResult",
    "pgf_eval",
    "u_minus",
    "u_plus",
    "bond_distribution",
    "site_distribution",
    "critical_threshold",
    "solve_fixed_point",
    "gscc_fraction",
    # experiments
    "ExperimentConfig",
    "TrialRecord",
    "run_experiment",
    "summarize",
    "write_csv",
    "write_summary",
    "load_config",
    "make_rng",
    "trial_seed",
]
