"""Solve-and-verify pipeline shared by the command line and the demos."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .asymptotics import AsymptoticSummary, ComparisonReport, check_leading_order, fit_tail
from .cavitating import solve_cavitating
from .core import SMOOTH, SolveConfig, case_of, default_config
from .output import build_summary
from .picard import IterationTrace, Profile
from .smooth import solve_smooth
from .verification import (BootstrapReport, BoundReport, ResidualReport, bootstrap_norm,
                           bound_suite, cavitating_constants, ode_residual, smooth_constants)


def solve(params, b, config: SolveConfig | None = None) -> tuple[Profile, IterationTrace]:
    """Dispatch to the smooth or cavitating solver by the type of ``b``."""
    case = case_of(b)
    config = config or default_config(case)
    if case == SMOOTH:
        return solve_smooth(params, b, config)
    return solve_cavitating(params, b, config)


def default_bootstrap_constants(profile: Profile):
    b = profile.boundary
    if profile.case == SMOOTH:
        return smooth_constants(b.Theta0)
    return cavitating_constants(b.alpha, b.P_delta)


@dataclass
class RunResult:
    profile: Profile
    trace: IterationTrace
    residual: ResidualReport
    bootstrap: BootstrapReport
    bounds: BoundReport
    asymptotics: AsymptoticSummary
    comparison: ComparisonReport

    def summary(self) -> dict:
        s = build_summary(self.profile, self.trace, self.residual, self.bootstrap,
                          self.bounds, self.asymptotics, self.comparison)
        if self.comparison.ratio is not None:
            s["asymptotics"]["U_inf_ratio_half_Theta0"] = self.comparison.ratio
        return s


def run(params, b, config: SolveConfig | None = None, ratio_test: bool = True) -> RunResult:
    """Solve, then compute every report that goes into the summary.

    With ``ratio_test`` the smooth case is solved a second time at
    ``Theta0 / 2`` for the linearity check of ``U_inf``.
    """
    config = config or default_config(case_of(b))
    profile, trace = solve(params, b, config)
    asym = fit_tail(profile)
    half = None
    if ratio_test and profile.case == SMOOTH and b.Theta0 > 0:
        half = fit_tail(solve(params, replace(b, Theta0=0.5 * b.Theta0), config)[0])
    comparison = check_leading_order(asym, params, b, half=half,
                                     ratio_test=half is not None)
    return RunResult(profile, trace, ode_residual(profile),
                     bootstrap_norm(profile, default_bootstrap_constants(profile)),
                     bound_suite(profile), asym, comparison)
