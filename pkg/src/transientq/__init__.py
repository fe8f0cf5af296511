"""Transient occupancy analysis for an autonomous Markov birth-death system
and its mean-matched nonstationary infinite-server approximation.

Public API re-exported here; see the README for a tour.
"""

__version__ = "0.1.0"

from .backend import numba_available, resolve_backend
from .errors import (
    AliasingError,
    MassLossError,
    NegativeProbabilityError,
    NonRealProbabilityError,
    NumericalInstabilityError,
    QuadratureError,
    SimulationCapError,
    StabilityError,
    TableCellError,
    TailMassError,
    TransientQError,
)
from .forward_ode import (
    OdeConfig,
    solve_autonomous,
    solve_mtminf,
    stable_config_autonomous,
    stable_config_mtminf,
)
from .inversion import InversionConfig, cf_from_pmf, choose_truncation, invert_cf
from .metrics import (
    DEFAULT_THRESHOLD,
    DistanceTable,
    Verdict,
    approximation_verdict,
    build_distance_table,
    kolmogorov_distance,
)
from .models import (
    ModelParams,
    analytic_pmf_poisson,
    autonomous_cf,
    binomial_cf,
    cf_autonomous,
    cf_poisson_general,
    cf_poisson_matched,
    matched_intensity,
    mean_occupancy,
    poisson_cf,
    poisson_matched_cf,
)
from .output import read_table_csv, write_table
from .pmf import Pmf, point_mass
from .rng import SplitMix64, stream_seed
from .simulate import (
    SimConfig,
    SimResult,
    cumulative_intensity,
    simulate_autonomous,
    simulate_mtminf,
)
from .validation import (
    CheckResult,
    ValidationReport,
    chi_squared_gof,
    pde_residual_order,
    run_validation,
)

__all__ = [
    "__version__",
    "AliasingError",
    "CheckResult",
    "DEFAULT_THRESHOLD",
    "DistanceTable",
    "InversionConfig",
    "MassLossError",
    "ModelParams",
    "NegativeProbabilityError",
    "NonRealProbabilityError",
    "NumericalInstabilityError",
    "OdeConfig",
    "Pmf",
    "QuadratureError",
    "SimConfig",
    "SimResult",
    "SimulationCapError",
    "SplitMix64",
    "StabilityError",
    "TableCellError",
    "TailMassError",
    "TransientQError",
    "ValidationReport",
    "Verdict",
    "analytic_pmf_poisson",
    "approximation_verdict",
    "autonomous_cf",
    "binomial_cf",
    "build_distance_table",
    "cf_autonomous",
    "cf_from_pmf",
    "cf_poisson_general",
    "cf_poisson_matched",
    "chi_squared_gof",
    "choose_truncation",
    "cumulative_intensity",
    "invert_cf",
    "kolmogorov_distance",
    "matched_intensity",
    "mean_occupancy",
    "numba_available",
    "pde_residual_order",
    "point_mass",
    "poisson_cf",
    "poisson_matched_cf",
    "read_table_csv",
    "resolve_backend",
    "run_validation",
    "simulate_autonomous",
    "simulate_mtminf",
    "solve_autonomous",
    "solve_mtminf",
    "stable_config_autonomous",
    "stable_config_mtminf",
    "stream_seed",
    "write_table",
]
