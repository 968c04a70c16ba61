"""Configuration-model random graphs near the critical window.

Degree sequences and their Q/R parameters (:mod:`.degrees`), configuration
sampling and exact oracles (:mod:`.configuration`), component exploration
(:mod:`.exploration`) and reproducible sweeps (:mod:`.experiments`).
"""

from .configuration import (
    ConfigurationGraph,
    SimplicityVerdict,
    enumerate_configurations,
    is_simple,
    pair_join_probability,
    sample_configuration,
    sample_matchings,
    sample_simple,
    simplicity_probability_formula,
)
from .degrees import (
    ConditionDReport,
    DegreeSequence,
    build_sequence,
    check_condition_d,
    check_observations,
    family_heavy_vertex,
    family_mixed13,
    family_three_point,
    read_degree_file,
)
from .exploration import (
    ComponentCensus,
    Exploration,
    ExplorationTrace,
    StepRecord,
    exact_step_expectation,
    explore_all,
    largest_component,
    start_exploration,
    step,
    trace_concentration_check,
)
from .experiments import (
    ExperimentResult,
    ExperimentSpec,
    loglog_slope,
    regime_preset,
    run_experiment,
    theorem2b_census,
)

__all__ = [
    "build_sequence",
    "check_condition_d",
    "check_observations",
    "ComponentCensus",
    "ConditionDReport",
    "ConfigurationGraph",
    "DegreeSequence",
    "enumerate_configurations",
    "exact_step_expectation",
    "ExperimentResult",
    "ExperimentSpec",
    "Exploration",
    "ExplorationTrace",
    "explore_all",
    "family_heavy_vertex",
    "family_mixed13",
    "family_three_point",
    "is_simple",
    "largest_component",
    "loglog_slope",
    "pair_join_probability",
    "read_degree_file",
    "regime_preset",
    "run_experiment",
    "sample_configuration",
    "sample_matchings",
    "sample_simple",
    "simplicity_probability_formula",
    "SimplicityVerdict",
    "start_exploration",
    "step",
    "StepRecord",
    "theorem2b_census",
    "trace_concentration_check",
]

__version__ = "0.1.0"
