"""
Cavitating profiles: vacuum at the origin, P(0) = 0, U'(0) = alpha.

The grid starts at ``r_min`` (default ``1e-3 delta``) and carries a node
exactly at the anchor radius ``delta`` where ``P = P_delta``.
"""

from __future__ import annotations

import numpy as np

from .core import (CAVITATING, CavitatingBoundaryData, PhysicalParams, SolveConfig,
                   default_config, vacuum_exponent)
from .grid import RadialGrid, graded_grid_from
from .picard import IterationTrace, Profile, integral_map, iterate


def make_grid(b: CavitatingBoundaryData, config: SolveConfig) -> RadialGrid:
    r_min = config.r_min if config.r_min is not None else 1e-3 * b.delta
    if not r_min < b.delta < config.r_max:
        raise ValueError("need r_min < delta < r_max")
    return graded_grid_from(r_min, config.r_max, config.n_cells, config.grading, anchor=b.delta)


def seed_cavitating(b: CavitatingBoundaryData, params: PhysicalParams, grid: RadialGrid) -> Profile:
    """Near-origin asymptotics extended to the whole grid.

    ``U = alpha r``, ``Theta = Theta0`` and the pure power-law density
    ``P_delta (r/delta)^(2 d alpha / (1 - 2 alpha))``.
    """
    r = grid.nodes
    beta = vacuum_exponent(b.alpha, params.d)
    P = b.P_delta * (r / b.delta) ** beta
    if grid.anchor_index is not None:
        P[grid.anchor_index] = b.P_delta
    n = len(grid)
    return Profile(grid, P, b.alpha * r, np.full(n, float(b.Theta0)),
                   np.full(n, float(b.alpha)), np.zeros(n), CAVITATING, b, params)


def psi_step_cavitating(current: Profile, damping: float = 1.0) -> Profile:
    """Apply the vacuum-case integral map once."""
    if current.case != CAVITATING:
        raise ValueError("psi_step_cavitating expects a cavitating profile")
    return integral_map(current, damping)


def solve_cavitating(params: PhysicalParams, b: CavitatingBoundaryData,
                     config: SolveConfig | None = None) -> tuple[Profile, IterationTrace]:
    config = config or default_config(CAVITATING)
    grid = make_grid(b, config)
    seed = seed_cavitating(b, params, grid)
    return iterate(seed, config.picard_tol, config.max_iter, config.damping)
