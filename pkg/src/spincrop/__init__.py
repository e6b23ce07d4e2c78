"""Relaxation-optimized polarization transfer in a scalar-coupled two-spin system.

The package computes the physical limit of polarization and coherence transfer
under cross-correlated relaxation, synthesizes the shaped rf pulse (CROP) that
attains it, propagates arbitrary pulse programs through the full 15-dimensional
product-operator master equation, and verifies the limit against conventional
transfer schemes and a brute-force control-space search.
"""

from .spinsys import (
    BASIS,
    BASIS_INDEX,
    SystemParams,
    expectation,
    free_evolution_generator,
    hard_rotation,
    multiplet_components,
    rf_generator,
    unit_state,
)
from .bounds import (
    CompositeBounds,
    TransferBound,
    compute_bound,
    compute_composite_bounds,
    compute_theta,
    verify_stationarity,
)
from .synth import (
    ReducedState,
    ReducedTrajectory,
    Waveform,
    crop_schedule,
    integrate_optimal_trajectory,
    optimal_controls,
    propagate_reduced,
    reduced_drift,
    rf_amplitude,
    rf_phase,
    synthesize_crop,
    to_frequency_form,
    to_phase_form,
)
from .propagate import (
    Delay,
    HardRotation,
    PulseProgram,
    Shape,
    TrajectoryRecord,
    multiplet_magnitudes,
    reduced_projection,
    run,
    transfer_efficiency,
)
from .baselines import (
    SchemeResult,
    crinept_efficiency,
    cript_efficiency,
    inept_efficiency,
    optimize_mixing_time,
)
from .oracle import (
    AscentResult,
    CeilingReport,
    ControlSchedule,
    ascent_search,
    random_ceiling_check,
    reduced_propagate,
)

__version__ = "0.1.0"

__all__ = [
    "BASIS",
    "BASIS_INDEX",
    "SystemParams",
    "expectation",
    "free_evolution_generator",
    "hard_rotation",
    "multiplet_components",
    "rf_generator",
    "unit_state",
    "CompositeBounds",
    "TransferBound",
    "compute_bound",
    "compute_composite_bounds",
    "compute_theta",
    "verify_stationarity",
    "ReducedState",
    "ReducedTrajectory",
    "Waveform",
    "crop_schedule",
    "integrate_optimal_trajectory",
    "optimal_controls",
    "propagate_reduced",
    "reduced_drift",
    "rf_amplitude",
    "rf_phase",
    "synthesize_crop",
    "to_frequency_form",
    "to_phase_form",
    "Delay",
    "HardRotation",
    "PulseProgram",
    "Shape",
    "TrajectoryRecord",
    "multiplet_magnitudes",
    "reduced_projection",
    "run",
    "transfer_efficiency",
    "SchemeResult",
    "crinept_efficiency",
    "cript_efficiency",
    "inept_efficiency",
    "optimize_mixing_time",
    "AscentResult",
    "CeilingReport",
    "ControlSchedule",
    "ascent_search",
    "random_ceiling_check",
    "reduced_propagate",
]
