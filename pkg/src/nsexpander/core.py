"""
Parameter types, validation and the smooth/cavitating case taxonomy.

All types here are frozen dataclasses; nothing in the package mutates
them after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

# Smallness thresholds. The existence theory only guarantees *some*
# threshold; these defaults were chosen empirically.
EPS_SMOOTH = 1e-1
EPS_CAV = 0.5

SMOOTH = "smooth"
CAVITATING = "cavitating"
CASES = (SMOOTH, CAVITATING)


@dataclass(frozen=True)
class PhysicalParams:
    """Fluid constants and spatial dimension.

    ``lam`` is the second Lamé coefficient (``lambda`` is reserved).
    """

    R: float = 1.0
    mu: float = 1.0
    lam: float = 0.0
    C_V: float = 1.0
    kappa: float = 1.0
    d: int = 3

    @property
    def nu(self) -> float:
        """Longitudinal viscosity 2*mu + lambda."""
        return 2.0 * self.mu + self.lam


@dataclass(frozen=True)
class SmoothBoundaryData:
    P0: float = 1.0
    Theta0: float = 1e-3


@dataclass(frozen=True)
class CavitatingBoundaryData:
    """Anchor data for the vacuum-at-origin case.

    The density is prescribed at ``r = delta`` and the velocity slope at the
    origin is ``alpha``.
    """

    P_delta: float = 1e-2
    delta: float = 1e-1
    Theta0: float = 1e-2
    alpha: float = 1e-3


BoundaryData = Union[SmoothBoundaryData, CavitatingBoundaryData]


def vacuum_exponent(alpha: float, d: int) -> float:
    """Power of the density near the vacuum, 2 d alpha / (1 - 2 alpha)."""
    return 2.0 * d * alpha / (1.0 - 2.0 * alpha)


def case_of(b: BoundaryData) -> str:
    if isinstance(b, SmoothBoundaryData):
        return SMOOTH
    if isinstance(b, CavitatingBoundaryData):
        return CAVITATING
    raise TypeError(f"unknown boundary data type {type(b).__name__}")


@dataclass(frozen=True)
class SolveConfig:
    """Discretisation and iteration controls.

    Parameters
    ----------
    r_max : float
        Truncation radius.
    n_cells : int
        Number of grid cells.
    grading : float
        Share of the cells spent on the logarithmically graded inner zone
        (0 gives an almost uniform mesh).
    first_cell : float or None
        Width of the cell touching the origin (smooth case).  Defaults to
        ``1e-6 * r_max``.
    picard_tol : float
        Stopping tolerance on the weighted sup distance of two iterates.
    max_iter : int
        Iteration cap.
    r_min : float or None
        Inner radius of the cavitating grid; defaults to ``1e-3 * delta``.
    damping : float
        Relaxation factor in (0, 1]; 1 means plain Picard.
    """

    r_max: float = 30.0
    n_cells: int = 4000
    grading: float = 0.3
    first_cell: float | None = None
    picard_tol: float = 1e-11
    max_iter: int = 200
    r_min: float | None = None
    damping: float = 1.0


def default_config(case: str, **overrides) -> SolveConfig:
    """Reference configuration for each case.

    The cavitating profile varies on the scale ``1/sqrt(P_delta)``, so its
    default truncation radius is larger and more of the mesh goes to the
    logarithmic zone around the vacuum.
    """
    if case == SMOOTH:
        base = dict(r_max=30.0, grading=0.3)
    elif case == CAVITATING:
        base = dict(r_max=400.0, grading=0.5)
    else:
        raise ValueError(f"unknown case {case!r}")
    base.update(overrides)
    return SolveConfig(**base)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate_params`.

    ``checks`` maps a constraint label to whether it holds; ``failures``
    lists the labels that do not.
    """

    case: str
    checks: dict = field(default_factory=dict)
    smallness: float | None = None
    threshold: float | None = None

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [name for name, passed in self.checks.items() if not passed]

    def __bool__(self) -> bool:
        return self.ok


def smallness_functional(b: CavitatingBoundaryData) -> float:
    """Seven-term smallness sum for the cavitating data.

    Returns ``inf`` whenever a term is undefined (non-positive data).
    """
    P, dl, T, a = b.P_delta, b.delta, b.Theta0, b.alpha
    if min(P, dl, T, a) <= 0.0:
        return math.inf
    arg = 1.0 / (P * dl * dl)
    if arg <= 0.0 or not math.isfinite(arg):
        return math.inf
    return P + dl + T + a + P * T / a + a * a / (P * T) + a * math.log(arg)


def validate_params(
    p: PhysicalParams,
    b: BoundaryData,
    eps_smooth: float = EPS_SMOOTH,
    eps_cav: float = EPS_CAV,
) -> ValidationReport:
    """Check every admissibility constraint and report instead of raising."""
    case = case_of(b)
    checks = {
        "R > 0": p.R > 0,
        "mu > 0": p.mu > 0,
        "2 mu + d lambda >= 0": 2 * p.mu + p.d * p.lam >= 0,
        "C_V > 0": p.C_V > 0,
        "kappa > 0": p.kappa > 0,
        "d >= 3": int(p.d) == p.d and p.d >= 3,
    }
    if case == SMOOTH:
        checks["P0 > 0"] = b.P0 > 0
        checks["Theta0 > 0"] = b.Theta0 > 0
        checks[f"Theta0 < eps_smooth ({eps_smooth:g})"] = b.Theta0 < eps_smooth
        return ValidationReport(case, checks, smallness=b.Theta0, threshold=eps_smooth)

    checks["P_delta > 0"] = b.P_delta > 0
    checks["delta > 0"] = b.delta > 0
    checks["Theta0 > 0"] = b.Theta0 > 0
    checks["0 < alpha < 1/2"] = 0 < b.alpha < 0.5
    S = smallness_functional(b)
    checks["smallness functional finite"] = math.isfinite(S)
    checks[f"smallness functional < eps_cav ({eps_cav:g})"] = S < eps_cav
    return ValidationReport(case, checks, smallness=S, threshold=eps_cav)


def validate_config(config: SolveConfig, b: BoundaryData) -> ValidationReport:
    """Discretisation constraints, reported like :func:`validate_params`."""
    case = case_of(b)
    checks = {
        "picard_tol > 0": config.picard_tol > 0,
        "0 < damping <= 1": 0 < config.damping <= 1,
        "n_cells >= 10": config.n_cells >= 10,
        "max_iter >= 1": config.max_iter >= 1,
        "0 <= grading < 1": 0 <= config.grading < 1,
    }
    if case == SMOOTH:
        checks["r_max > 0"] = config.r_max > 0
    else:
        checks["r_max > delta"] = config.r_max > b.delta
        r_min = config.r_min if config.r_min is not None else 1e-3 * b.delta
        checks["0 < r_min < delta"] = 0 < r_min < b.delta
    return ValidationReport(case, checks)
