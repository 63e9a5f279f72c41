"""Randomized feasibility-step methods for strongly monotone variational inequalities."""

from .core import (
    Ball,
    BlockLayout,
    Box,
    ConstraintFamily,
    FullSpace,
    GameMapping,
    HalfspaceFamily,
    JointDecision,
    LayoutError,
    Problem,
    block_project,
    positive_part,
)
from .feasibility import (
    ContractViolation,
    FeasibilityConfig,
    compute_q,
    feasibility_residual_check,
    polyak_step,
    random_feasibility_steps,
)
from .methods import BatchSchedule, Method, MethodState, StepSchedule, popov_tau, run, run_batch
from .problems import (
    ImitationGameSpec,
    MatrixGameSpec,
    build_imitation_game,
    build_matrix_game,
    calibrate_c,
    generate_spd_with_spectrum,
    load_instance,
    save_instance,
)
from .audit import dist_to_set, geometric_decay_audit, rate_fit, sq_dist_to_solution
from .harness import ExperimentConfig, load_config, preset, run_experiment

__version__ = "0.1.0"
