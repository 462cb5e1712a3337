"""Smooth profiles: P(0) = P0 > 0, U = O(r^2), Theta(0) = Theta0."""

from __future__ import annotations

import numpy as np

from .aux_fields import compute_P, compute_V
from .core import SMOOTH, PhysicalParams, SmoothBoundaryData, SolveConfig, default_config
from .grid import RadialGrid, graded_grid
from .picard import IterationTrace, Profile, integral_map, iterate


def make_grid(config: SolveConfig) -> RadialGrid:
    return graded_grid(config.r_max, config.n_cells, config.grading, config.first_cell)


def seed_smooth(b: SmoothBoundaryData, params: PhysicalParams, grid: RadialGrid) -> Profile:
    """Centre of the contraction ball: U = 0, Theta = Theta0."""
    zero = np.zeros(len(grid))
    return Profile(grid, np.full(len(grid), float(b.P0)), zero, np.full(len(grid), float(b.Theta0)),
                   zero.copy(), zero.copy(), SMOOTH, b, params)


def psi_step(current: Profile, damping: float = 1.0) -> Profile:
    """Apply the integral map once to a smooth-case iterate."""
    if current.case != SMOOTH:
        raise ValueError("psi_step expects a smooth profile")
    return integral_map(current, damping)


def solve_smooth(params: PhysicalParams, b: SmoothBoundaryData,
                 config: SolveConfig | None = None) -> tuple[Profile, IterationTrace]:
    """Picard iteration on ``[0, r_max]`` from the seed ``(0, Theta0)``.

    Raises :class:`picard.NonConvergence` after ``max_iter`` sweeps and
    :class:`aux_fields.CharacteristicDegeneracy` if ``r/2 - U`` vanishes.
    """
    config = config or default_config(SMOOTH)
    grid = make_grid(config)
    seed = seed_smooth(b, params, grid)
    return iterate(seed, config.picard_tol, config.max_iter, config.damping)
