"""
Constants and configuration values for the simulator.
Centralizes tolerances, caps and file names.
"""


class ModelConstants:
    """Model-related constants."""

    # Diffusion regimes
    THEOREM_P = 32.0 / 15.0
    SLOW_P = 2.0

    # Structural-condition validation
    VALIDATION_TOL = 1e-10
    VALIDATION_SAMPLES = 201

    # Psi quadrature
    PSI_RTOL = 1e-10
    PSI_QUAD_LIMIT = 200


class ExponentConstants:
    """Exponent-calculator constants."""

    IDENTITY_TOL = 1e-12
    BOOTSTRAP_DELTA_MAX = 0.1
    BOOTSTRAP_TARGET_M = 2.0


class SolverConstants:
    """Linear-solver and time-stepping constants."""

    MIN_CELLS = 4

    POISSON_TOL = 1e-10
    POISSON_MAX_ITER = 5000

    YOSIDA_TOL = 1e-10
    YOSIDA_MAX_ITER = 5000

    # dt controller
    DT_FLOOR = 1e-14
    VELOCITY_TINY = 1e-30

    # Relative tolerance for landing the clock on report/snapshot times
    TIME_EPS = 1e-12


class AuditConstants:
    """Estimate-auditor constants."""

    DIVISION_FLOOR = 1e-14
    DECAY_SLACK = 1e-10
    MASS_RTOL = 1e-12
    MAX_C_RTOL = 1e-12
    MIN_N_MONITOR = 1e-8
    PLAP_INEQUALITY_TOL = 1e-10

    GROWTH_FACTOR = 1.1
    GROWTH_WINDOW = 0.2

    DEFAULT_R = 6.0
    VERIFY_HORIZON_STEPS = 50

    # Default weak-form test function: support fraction of each extent and of t_end
    WEAK_SUPPORT = (0.2, 0.8)
    WEAK_T_CUT = 0.8


class OracleConstants:
    """Dense reference-oracle constants."""

    MAX_UNKNOWNS = 10_000


class OutputConstants:
    """Output file names and the diagnostics column order."""

    DIAGNOSTICS_FILE = "diagnostics.csv"
    CHECKPOINT_FILE = "checkpoint.npz"
    CATALOGUE_FILE = "runs.db"
    RUN_LOG_FILE = "run.log"
    SNAPSHOT_DIR = "snapshots"
    PLOT_DIR = "plots"

    LEDGER_QUANTITIES = (
        "d_plap_power",
        "d_hess",
        "d_quart",
        "d_gradu",
        "norm_u_103",
        "norm_n_r",
        "grad_c_quartic",
    )

    DIAGNOSTICS_COLUMNS = (
        "t",
        "mass_n",
        "min_n",
        "max_c",
        "e_nlogn",
        "e_psi",
        "e_kin",
        "d_plap",
        "d_plap_power",
        "d_hess",
        "d_quart",
        "d_gradu",
        "norm_u_103",
        "norm_n_r",
        "cum_d_plap_power",
        "cum_d_hess",
        "cum_d_quart",
        "cum_d_gradu",
        "cum_norm_u_103",
        "cum_norm_n_r",
        "cum_grad_c_quartic",
        "dt",
        "floored_cells",
        "negative_n_cells",
        "div_u_max",
        "coupled_functional",
    )
