"""Cascades of mixed simple and threshold-based spreaders on generated networks."""

from .analytics import (
    DegreeClassProfile,
    deterministic_closure,
    er_percolation_threshold,
    eta_regularization_condition,
    mean_field_tbs_condition,
    molloy_reed_ratio,
    predicted_gamma,
)
from .cascade import CascadeConfig, CascadeResult, Termination, run_cascade, select_seeds
from .generators import (
    Family,
    GeneratorSpec,
    RewireMode,
    RewireSpec,
    fit_power_law_exponent,
    generate,
    rewire_assortativity,
)
from .graph import GraphError, Network, build_network, degree_stats, read_edge_list, write_edge_list
from .harness import (
    AggregateRecord,
    ConfigError,
    SweepSpec,
    emit_plot_data,
    export_csv,
    load_sweep,
    read_csv,
    run_sweep,
)
from .placement import ProfileAssignment, Strategy, assign, read_assignment, write_assignment

__version__ = "0.1.0"

__all__ = [
    "AggregateRecord", "CascadeConfig", "CascadeResult", "ConfigError", "DegreeClassProfile",
    "Family", "GeneratorSpec", "GraphError", "Network", "ProfileAssignment", "RewireMode",
    "RewireSpec", "Strategy", "SweepSpec", "Termination", "assign", "build_network",
    "degree_stats", "deterministic_closure", "emit_plot_data", "er_percolation_threshold",
    "eta_regularization_condition", "export_csv", "fit_power_law_exponent", "generate",
    "load_sweep", "mean_field_tbs_condition", "molloy_reed_ratio", "predicted_gamma",
    "read_assignment", "read_csv", "read_edge_list", "rewire_assortativity", "run_cascade",
    "run_sweep", "select_seeds", "write_assignment", "write_edge_list",
]
