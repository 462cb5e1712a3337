"""Forward self-similar profiles of the compressible Navier-Stokes equations."""

from .asymptotics import AsymptoticSummary, ComparisonReport, check_leading_order, fit_tail
from .aux_fields import CharacteristicDegeneracy
from .cavitating import psi_step_cavitating, seed_cavitating, solve_cavitating
from .core import (CAVITATING, SMOOTH, CavitatingBoundaryData, PhysicalParams,
                   SmoothBoundaryData, SolveConfig, ValidationReport, default_config,
                   smallness_functional, validate_config, validate_params, vacuum_exponent)
from .grid import QuadratureError, RadialGrid, graded_grid, graded_grid_from, uniform_grid
from .output import emit_plots_svg, emit_profile_csv, emit_summary_json, read_profile_csv
from .picard import AnchorMismatch, IterationTrace, NonConvergence, Profile
from .pipeline import RunResult, run, solve
from .smooth import psi_step, seed_smooth, solve_smooth
from .verification import (bootstrap_norm, bound_suite, cavitating_constants, ode_residual,
                           smooth_constants)

__version__ = "0.1.0"
