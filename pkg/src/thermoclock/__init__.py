"""Numerical toolkit for clock-driven thermodynamic state transitions.

Four layers, each usable on its own:

- :mod:`thermoclock.prob_entropy` — classical entropy families, majorization
  and catalytic-reachability checks, and the perturbation bounds that control
  how much each entropy can move under a small change of distribution.
- :mod:`thermoclock.quantum_state` — small validated density-matrix /
  Hermitian-operator containers with partial trace, evolution, and distances.
- :mod:`thermoclock.clock` — the finite-dimensional quasi-ideal clock: its
  Hamiltonian, Gaussian pointer states, window potentials, and the measured
  error norms that quantify how well it steers an interaction on and off.
- :mod:`thermoclock.dynamics` — exact joint simulation of
  system + catalyst + clock + bath, embezzlement and resolution diagnostics,
  and the deviation bounds the simulations are checked against.

:mod:`thermoclock.runner` turns all of it into reproducible command-line
experiments with CSV output (``thermoclock run <config>``).
"""

from .prob_entropy import (
    BOUNDED_QUANTITY,
    INCONCLUSIVE,
    NOT_TRUMPED,
    REGIME_KINDS,
    TRUMPED,
    AlphaGrid,
    BoundRegime,
    DomainError,
    ProbVec,
    continuity_bound,
    default_alpha_grid,
    hellinger_divergence,
    kl_divergence,
    klimesh_f,
    majorizes,
    one_norm_diff,
    renyi_entropy,
    smooth_toward_uniform,
    sum_diff_bound,
    trumping_check,
    tsallis_entropy,
)
from .quantum_state import (
    DensityMatrix,
    HermitianOp,
    UnitaryOp,
    commutes,
    compose,
    evolve,
    fidelity,
    gibbs_state,
    op_norm,
    reduce,
    trace_distance,
    trace_norm,
    unitary_of,
)
from .clock import (
    MomentumClockSpec,
    PotentialSpec,
    QuasiIdealClock,
    clock_disturbance,
    clock_error_norms,
    control_overlap,
    control_overlap_grid,
    default_momentum_spec,
    disturbance_bound,
    free_clock_state,
    max_overlap_defect,
    momentum_control_overlap,
    potential_operator,
    tail_leakage,
)
from .dynamics import (
    BOUND_SLACK,
    AutonomousSpec,
    BoundReport,
    CommutingInteraction,
    PhasedInteraction,
    Trajectory,
    admissible_times,
    build_hamiltonian,
    embezzle_distance,
    interaction_error,
    measure_embezzlement,
    nogo_witness,
    reference_embezzlement_setup,
    resolution_bound,
    simulate,
    smoothed_target,
    theta_step,
    verify_catalytic_reachability,
    window_bound_reports,
)

__version__ = "0.1.0"

__all__ = [
    "BOUNDED_QUANTITY",
    "BOUND_SLACK",
    "INCONCLUSIVE",
    "NOT_TRUMPED",
    "REGIME_KINDS",
    "TRUMPED",
    "AlphaGrid",
    "AutonomousSpec",
    "BoundRegime",
    "BoundReport",
    "CommutingInteraction",
    "DensityMatrix",
    "DomainError",
    "HermitianOp",
    "MomentumClockSpec",
    "PhasedInteraction",
    "PotentialSpec",
    "ProbVec",
    "QuasiIdealClock",
    "Trajectory",
    "UnitaryOp",
    "admissible_times",
    "build_hamiltonian",
    "clock_disturbance",
    "clock_error_norms",
    "commutes",
    "compose",
    "continuity_bound",
    "control_overlap",
    "control_overlap_grid",
    "default_alpha_grid",
    "default_momentum_spec",
    "disturbance_bound",
    "embezzle_distance",
    "evolve",
    "fidelity",
    "free_clock_state",
    "gibbs_state",
    "hellinger_divergence",
    "interaction_error",
    "kl_divergence",
    "klimesh_f",
    "majorizes",
    "max_overlap_defect",
    "measure_embezzlement",
    "momentum_control_overlap",
    "nogo_witness",
    "one_norm_diff",
    "op_norm",
    "potential_operator",
    "reduce",
    "reference_embezzlement_setup",
    "renyi_entropy",
    "resolution_bound",
    "simulate",
    "smooth_toward_uniform",
    "smoothed_target",
    "sum_diff_bound",
    "tail_leakage",
    "theta_step",
    "trace_distance",
    "trace_norm",
    "trumping_check",
    "tsallis_entropy",
    "unitary_of",
    "verify_catalytic_reachability",
    "window_bound_reports",
]
