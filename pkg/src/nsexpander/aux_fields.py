"""
Auxiliary exponents (V, W, Z) and forcing terms (F_U, F_Theta) computed
from a current iterate (U, U', Theta) of the profile equations.

Notation: ``nu = 2 mu + lambda``.  On a from-zero grid every ``x / r``
term is replaced by its axis limit 0 at ``r = 0``; all such numerators
vanish faster than ``r`` for admissible iterates.

On a from-rmin grid (cavitating case) every ``int_0`` is split as
``int_0^{r_min} + int_{r_min}``; the first piece comes from
:func:`vacuum_seeds`, which integrates the near-origin asymptotics
``P = c r**beta``, ``U = alpha r``, ``Theta = Theta0`` in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (CAVITATING, SMOOTH, CavitatingBoundaryData, PhysicalParams,
                   vacuum_exponent)
from .grid import RadialGrid, cumulative_integral


class CharacteristicDegeneracy(ArithmeticError):
    """Raised when r/2 - U(r) <= 0: the density transport breaks down."""

    def __init__(self, index, r):
        super().__init__(f"characteristic degeneracy: r/2 - U <= 0 at node {index} (r = {r:.6g})")
        self.index = index
        self.r = r


def _over_r(x, r):
    out = np.zeros_like(x, dtype=float)
    np.divide(x, r, out=out, where=r > 0)
    return out


def _seed_int(monomials, r_min, extra_power=0.0):
    """Closed form of ``int_0^r_min t**extra_power * sum c t**q dt``."""
    total = 0.0
    for c, q in monomials:
        e = q + extra_power + 1.0
        total += c * r_min**e / e
    return total


@dataclass(frozen=True)
class VacuumSeeds:
    """Contributions of ``[0, r_min]`` to every origin-based integral.

    The first four are raw integrals; the ``Q_*`` entries are kernel
    transforms evaluated at ``r_min`` (see :func:`grid.kernel_transform`).
    """

    rP: float
    PU2: float
    energy_flux: float
    U2_over_r: float
    Q_U: float
    Q_U_split: float
    Q_U_direct: float
    Q_Theta: float
    Q_split: float
    Q_direct: float


def vacuum_seeds(r_min: float, P_rmin: float, b: CavitatingBoundaryData,
                 params: PhysicalParams) -> VacuumSeeds:
    """Integrals over ``[0, r_min]`` from the near-vacuum asymptotics.

    The amplitude of the power law is matched to the current density at
    ``r_min``.  Exponential kernel weights are replaced by 1 on this
    interval; their deviation is of order ``P r_min**2``.
    """
    d, nu, R, CV, kap, lam = params.d, params.nu, params.R, params.C_V, params.kappa, params.lam
    a, T0 = b.alpha, b.Theta0
    beta = vacuum_exponent(a, d)
    c = P_rmin / r_min**beta

    rP = c * r_min ** (beta + 2) / (beta + 2)
    PU2 = (d - 1) * a * a * rP
    energy_flux = a * c * (0.5 * a * a * r_min ** (beta + 4) / (beta + 4)
                           + (CV + R) * T0 * r_min ** (beta + 2) / (beta + 2))
    U2_over_r = 0.5 * a * a * r_min**2

    # F_U without its constant d nu alpha, which is transformed separately
    F_U = [(c * a * a * (1 + (d - 1) / (beta + 2)), beta + 2),
           (c * R * T0, beta)]
    Q_U = _seed_int(F_U, r_min, d - 1) / nu / r_min ** (d - 1)
    Q_U_split = _seed_int([(c / (2 * nu), beta + 1)], r_min, d) / r_min ** (d - 1)

    F_T = [(a * c * 0.5 * a * a * (1 + (d - 2) / (beta + 4)), beta + 3),
           (a * c * (CV + R) * T0 * (1 + (d - 2) / (beta + 2)), beta + 1),
           (0.5 * d * a * a * (kap / CV - nu - lam * (d - 1)), 1.0)]
    Q_Theta = _seed_int(F_T, r_min, d - 2) / kap / r_min ** (d - 2)

    Q_split = _seed_int([(CV * c / (2 * kap), beta + 1)], r_min, d - 2) / r_min ** (d - 2)
    return VacuumSeeds(rP, PU2, energy_flux, U2_over_r, Q_U, Q_U_split, r_min,
                       Q_Theta, Q_split, 1.0)


def compute_V(grid: RadialGrid, U, dU, d: int, case: str = SMOOTH) -> np.ndarray:
    """Density exponent ``V = int (U' + (d-1) U/r) / (r/2 - U)``.

    Smooth case: ``V(0) = 0``.  Cavitating case: ``V(r) - V(delta)`` with
    ``delta`` the grid's anchor node.
    """
    r = grid.nodes
    U = np.asarray(U, dtype=float)
    dU = np.asarray(dU, dtype=float)
    gap = 0.5 * r - U
    pos = r > 0
    bad = np.flatnonzero(pos & ~(gap > 0))
    if bad.size:
        raise CharacteristicDegeneracy(int(bad[0]), float(r[bad[0]]))
    v = np.empty_like(r)
    v[pos] = (dU[pos] + (d - 1) * U[pos] / r[pos]) / gap[pos]
    if not pos[0]:
        # axis limit (d+1) U''(0), extrapolated linearly from nodes 1, 2
        v[0] = v[1] - r[1] * (v[2] - v[1]) / (r[2] - r[1])
    V = cumulative_integral(v, grid)
    if case == CAVITATING:
        if grid.anchor_index is None:
            raise ValueError("cavitating V needs a grid with an anchor node")
        V = V - V[grid.anchor_index]
    return V


def compute_P(V, b, case: str = SMOOTH) -> np.ndarray:
    """Density from the exponent: ``P0 e^V`` or ``P_delta e^(V - V(delta))``."""
    V = np.asarray(V, dtype=float)
    if case == SMOOTH:
        return b.P0 * np.exp(V)
    return b.P_delta * np.exp(V)


def compute_W_Z(grid: RadialGrid, P, params: PhysicalParams, seed: float = 0.0):
    """Exponents ``W = int rP / (2 nu)`` and ``Z = C_V int rP / (2 kappa)``.

    ``seed`` is ``int_0^{r_min} r P`` on a from-rmin grid.
    """
    P = np.asarray(P, dtype=float)
    neg = np.flatnonzero(P < 0)
    if neg.size:
        raise ValueError(f"negative density at node {neg[0]}")
    I = cumulative_integral(grid.nodes * P, grid, seed)
    return I / (2 * params.nu), params.C_V * I / (2 * params.kappa)


def compute_F_U(grid: RadialGrid, P, U, Theta, b, params: PhysicalParams,
                case: str = SMOOTH, seed: float = 0.0) -> np.ndarray:
    """Momentum forcing.

    Smooth: ``P U^2 + int (d-1)/r P U^2 + R P Theta - R P0 Theta0``.
    Cavitating: the last term is replaced by ``+ d nu alpha``.
    ``seed`` is ``int_0^{r_min} (d-1)/r P U^2``.
    """
    r = grid.nodes
    d, R = params.d, params.R
    PU2 = P * U * U
    inner = cumulative_integral((d - 1) * _over_r(PU2, r), grid, seed)
    F = PU2 + inner + R * P * Theta
    if case == SMOOTH:
        return F - R * b.P0 * b.Theta0
    return F + d * params.nu * b.alpha


def compute_F_Theta(grid: RadialGrid, P, U, dU, Theta, params: PhysicalParams,
                    seeds: tuple[float, float] = (0.0, 0.0)) -> np.ndarray:
    """Energy forcing, term by term.

    ``seeds`` holds ``int_0^{r_min}`` of the energy flux and of ``U^2/r``.
    """
    r = grid.nodes
    d, R, CV, kap, lam = params.d, params.R, params.C_V, params.kappa, params.lam
    flux = U * P * (0.5 * U * U + CV * Theta) + U * P * R * Theta
    flux_int = cumulative_integral(flux, grid, seeds[0])
    U2r = _over_r(U * U, r)
    U2r_int = cumulative_integral(U2r, grid, seeds[1])
    return (flux
            + (d - 2) * _over_r(flux_int, r)
            + (kap / CV - params.nu) * (U * dU + 0.5 * (d - 2) * U2r)
            - lam * (d - 1) * (U2r + (d - 2) * _over_r(U2r_int, r)))


@dataclass(frozen=True, eq=False)
class AuxFields:
    """Everything the integral map needs from one iterate."""

    case: str
    V: np.ndarray
    P: np.ndarray
    W: np.ndarray
    Z: np.ndarray
    dW: np.ndarray
    dZ: np.ndarray
    F_U: np.ndarray
    F_Theta: np.ndarray
    seeds: VacuumSeeds | None = None


def compute_aux(grid: RadialGrid, U, dU, Theta, b, params: PhysicalParams,
                case: str = SMOOTH) -> AuxFields:
    r = grid.nodes
    V = compute_V(grid, U, dU, params.d, case)
    P = compute_P(V, b, case)
    seeds = None
    if case == CAVITATING:
        seeds = vacuum_seeds(r[0], P[0], b, params)
        W, Z = compute_W_Z(grid, P, params, seeds.rP)
        F_U = compute_F_U(grid, P, U, Theta, b, params, case, seeds.PU2)
        F_T = compute_F_Theta(grid, P, U, dU, Theta, params,
                              (seeds.energy_flux, seeds.U2_over_r))
    else:
        W, Z = compute_W_Z(grid, P, params)
        F_U = compute_F_U(grid, P, U, Theta, b, params, case)
        F_T = compute_F_Theta(grid, P, U, dU, Theta, params)
    dW = r * P / (2 * params.nu)
    dZ = params.C_V * r * P / (2 * params.kappa)
    return AuxFields(case, V, P, W, Z, dW, dZ, F_U, F_T, seeds)
