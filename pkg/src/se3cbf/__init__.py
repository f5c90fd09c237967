"""Safety-critical rigid-body control on SE(3).

Lie-group primitives, reduced rigid-body dynamics, a geometric tracking
controller, energy-aware barrier functions, and a minimum-norm QP wrench
filter, plus a scenario harness and CLI that reproduce two reference
simulations (narrow-corridor traversal and energy-bounded landing).
"""

from .barriers import (
    BarrierConstraint,
    ClassK,
    ConstantBarrier,
    DirectionalEnergyCBF,
    EnergyAugmentedCBF,
    SlitSpec,
    SupportSingularity,
    constant_h,
    directional_constraint,
    directional_energy,
    energy_augmented_constraint,
    projection_matrix,
    slit_h,
    slit_h_rate,
)
from .dynamics import (
    InertiaTensor,
    NonFiniteState,
    State,
    Wrench,
    acceleration,
    kinetic_energy,
    step,
)
from .liealg import (
    AngleNearPi,
    DegenerateRotation,
    Pose,
    Rotation,
    Twist,
    adjoint_algebra,
    adjoint_group,
    coadjoint,
    exp_so3,
    hat3,
    log_so3,
    reorthonormalize,
    vee3,
)
from .qp import FilterDiagnostics, Infeasible, QPProblem, QPSolution, filter_wrench, solve
from .scenarios import (
    PRESETS,
    ConfigError,
    DirectionalParams,
    LogRecord,
    RunSummary,
    ScenarioConfig,
    SlitParams,
    build_scenario_landing,
    build_scenario_slit,
    load_config,
    run,
    run_to_files,
    write_csv,
    write_summary,
)
from .tracking import Gains, ReferencePoint, ReferenceTrajectory, control

__version__ = "0.1.0"
