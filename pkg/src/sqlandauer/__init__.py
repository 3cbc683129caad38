"""Generalized Landauer budgets for unitarily prepared thermal reservoirs.

A reservoir built as O rho_thermal O^dag (a squeezed thermal state, for
example) breaks the standard heat bound, but the budget closes again once
heat is measured against the conjugated Hamiltonian O H O^dag. This package
verifies that identity exactly on truncated Fock spaces and implements the
matching second-order pipeline for a two-level detector moving through a
squeezed thermal scalar field: windowed response integrals along the
worldline, population transfer, effective heat, and a manifestly
non-negative entropy production, cross-checked against exact time-ordered
propagation.
"""

__version__ = "0.1.0"

from .core import (
    CutoffError,
    DensityMatrix,
    FockCutoff,
    SupportError,
    auto_cutoff,
    haar_unitary,
    ladder_operators,
    mutual_information,
    number_operator,
    partial_trace,
    random_density_matrix,
    relative_entropy,
    squeeze_operator,
    squeezed_thermal_state,
    tensor,
    thermal_state,
    von_neumann_entropy,
)
from .detector import (
    DetectorSpec,
    InteractionWindow,
    ModeResponse,
    PerturbativeReport,
    PerturbativeValidityWarning,
    delta_p,
    delta_p_bruteforce,
    entropy_change_perturbative,
    entropy_production,
    field_heat_perturbative,
    mode_function,
    perturbative_report,
    response_integrals,
    respond,
)
from .landauer import (
    LandauerBudget,
    ReservoirSpec,
    effective_hamiltonian,
    gibbs_conjugation_check,
    gibbs_state,
    landauer_budget,
    reservoir_state,
)
from .oracle import (
    ConvergenceError,
    EvolveResult,
    PropagationConfig,
    ScalingReport,
    evolve_exact,
    exact_vs_perturbative,
    interaction_hamiltonian_at,
)
from .quadrature import QuadratureError, adaptive_simpson
from .scenario import (
    ConfigError,
    Scenario,
    build_record,
    emit_scenario,
    load_scenario,
    parse_scenario,
    run_sweep,
)
from .sts import (
    Coefficients,
    ModeSpec,
    Moments,
    bose_einstein,
    min_coefficients,
    positivity_certificate,
    sts_coefficients,
    sts_moments,
)
from .trajectories import (
    InertialTrajectory,
    SampledTrajectory,
    StaticTrajectory,
    UniformAccelerationTrajectory,
    trajectory_eval,
)
