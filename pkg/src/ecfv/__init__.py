"""Entropy-conservative finite-volume schemes for the 1D Euler equations."""
from .diagnostics import (
    EntropyBudget,
    UsageError,
    cell_time_production,
    density_first_step_check,
    entropy_prod_bdf2,
    entropy_prod_be,
    entropy_prod_fe,
    entropy_prod_leapfrog,
    first_step_s_jump_check,
    step_total_entropy_balance,
)
from .euler import (
    AIR,
    GasModel,
    InvalidStateError,
    cons_to_prim,
    entropy_variables,
    entropy_vars_to_cons,
    exact_flux,
    math_entropy_pair,
    potentials,
    prim_to_cons,
    sound_speed,
    specific_entropy,
    temporal_jacobian,
)
from .fluxes import (
    EC_FLUXES,
    FLUX_NAMES,
    DissipationSpec,
    ec_condition_residual,
    flux_ec_chandrashekhar,
    flux_ec_kep_pu,
    flux_ec_roe,
    flux_ec_tadmor_quadrature,
    flux_es,
    flux_roe_classic,
    interface_entropy_flux,
    make_flux,
)
from .harness import (
    RunArtifacts,
    RunConfig,
    Snapshot,
    emit_plot_script,
    parse_config,
    run,
    write_config_echo,
    write_entropy_series_csv,
    write_outputs,
    write_snapshot_csv,
)
from .integrators import (
    SCHEMES,
    BlowUpError,
    Discretization,
    LinearSolveError,
    NewtonConfig,
    NonConvergenceError,
    SolverError,
    StartupError,
    TimeState,
    advance,
    ec_intermediate_state,
    lefloch_intermediate_state,
    newton_solve,
    semidiscrete_rhs,
    step_bdf2,
    step_be,
    step_ec,
    step_fe,
    step_leapfrog,
)
from .means import arith_mean, jump, log_mean
from .mesh import ConfigError, Mesh1D, apply_periodic_bc, apply_transmissive_bc, build_mesh
from .problems import RecedingIC, RiemannIC, density_wave, init_fields, init_riemann

__version__ = "0.1.0"
