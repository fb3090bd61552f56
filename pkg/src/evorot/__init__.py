"""Rotation observables, predictions and simulators for two-population
2x2 games played under switching incentives."""

from .agents import (
    AgentPopulation,
    LogitFictitiousPlay,
    ProportionalImitation,
    Schedule,
    ScheduleEntry,
    SimConfig,
    joint_state,
    simulate_agents,
    simulate_counts,
)
from .games import (
    GameClass,
    GamePrediction,
    NormalizedGame,
    PayoffMatrix,
    companion_matrix,
    eigenvalue_magnitude,
    interior_equilibrium,
    normalize,
    predict,
    reduce_to_antidiagonal,
    rotation_direction,
)
from .replicator import (
    ReplicatorField,
    conserved_quantity,
    integrate_ode,
    phase_field_sample,
    replicator_velocity,
)
from .rotation import (
    PopulationState,
    RotationReport,
    Trajectory,
    accumulated_rotation,
    average_distance,
    build_report,
    cycle_rotation_index,
    instantaneous_rotation,
    mean_rotation,
    relative_rotation,
    response_coefficients,
    rotation_series,
    tripwire_crossings,
)
from .stats import (
    kruskal_wallis,
    one_sample_t,
    sign_test,
    spearman_rank,
    two_sample_t,
)

__version__ = "0.1.0"

__all__ = [
    "AgentPopulation", "LogitFictitiousPlay", "ProportionalImitation",
    "Schedule", "ScheduleEntry", "SimConfig", "joint_state", "simulate_agents",
    "simulate_counts", "GameClass", "GamePrediction", "NormalizedGame",
    "PayoffMatrix", "companion_matrix", "eigenvalue_magnitude",
    "interior_equilibrium", "normalize", "predict", "reduce_to_antidiagonal",
    "rotation_direction", "ReplicatorField", "conserved_quantity",
    "integrate_ode", "phase_field_sample", "replicator_velocity",
    "PopulationState", "RotationReport", "Trajectory", "accumulated_rotation",
    "average_distance", "build_report", "cycle_rotation_index",
    "instantaneous_rotation", "mean_rotation", "relative_rotation",
    "response_coefficients", "rotation_series", "tripwire_crossings",
    "kruskal_wallis", "one_sample_t", "sign_test", "spearman_rank",
    "two_sample_t",
]
