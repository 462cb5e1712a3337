"""
Graded radial meshes and the quadratures evaluated on them.

Grid functions are plain float arrays aligned with ``RadialGrid.nodes``.

Two primitives carry all the integral algebra of the profile equations:

* :func:`cumulative_integral` -- composite trapezoid primitive.
* :func:`kernel_transform` -- the weighted Volterra transform

      Q(r) = r**(-scale) * int_0^r t**power * exp(Y(t) - Y(r)) * f(t) dt

  with a non-decreasing exponent ``Y``.  Every exponential is evaluated as
  ``exp(-x)`` with ``x >= 0``, so nothing overflows however large ``Y`` gets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import accumulate

import numpy as np
from scipy.integrate import cumulative_trapezoid

FROM_ZERO = "from_zero"
FROM_RMIN = "from_rmin"


class QuadratureError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Strictly increasing radii ``nodes[0] < ... < nodes[-1]``.

    ``kind`` is ``"from_zero"`` (``nodes[0] == 0``) or ``"from_rmin"``.
    ``anchor_index``, when set, is the index of a node placed exactly on a
    prescribed radius (the density anchor of the cavitating case).
    """

    nodes: np.ndarray
    kind: str = FROM_ZERO
    anchor_index: int | None = None

    def __post_init__(self):
        r = np.asarray(self.nodes, dtype=float)
        if r.ndim != 1 or r.size < 3:
            raise ValueError("grid needs at least 3 nodes")
        if not np.all(np.diff(r) > 0):
            raise ValueError("grid nodes must be strictly increasing")
        if self.kind == FROM_ZERO and r[0] != 0.0:
            raise ValueError("from_zero grid must start at r = 0")
        if self.kind == FROM_RMIN and not r[0] > 0.0:
            raise ValueError("from_rmin grid must start at r_min > 0")
        if self.kind not in (FROM_ZERO, FROM_RMIN):
            raise ValueError(f"unknown grid kind {self.kind!r}")
        r.setflags(write=False)
        object.__setattr__(self, "nodes", r)

    def __len__(self):
        return self.nodes.size

    @property
    def r_min(self) -> float:
        return float(self.nodes[0])

    @property
    def r_max(self) -> float:
        return float(self.nodes[-1])

    @property
    def spacing(self) -> np.ndarray:
        return np.diff(self.nodes)

    def index_of(self, r: float) -> int:
        """Index of the node closest to ``r``."""
        return int(np.argmin(np.abs(self.nodes - r)))

    def window(self, lo: float, hi: float) -> np.ndarray:
        """Boolean mask of nodes with ``lo <= r <= hi``."""
        return (self.nodes >= lo) & (self.nodes <= hi)


def _invert_log_linear(a, b, r0, targets):
    # xi(r) = a log(r/r0) + b (r - r0) is increasing; bisect in log r
    lo = np.full(targets.shape, math.log(r0))
    hi = np.full(targets.shape, math.log(r0) + 1.0)
    xi = lambda u: a * (u - math.log(r0)) + b * (np.exp(u) - r0)
    while np.any(xi(hi) < targets):
        hi = np.where(xi(hi) < targets, hi + 2.0 * (hi - lo) + 1.0, hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        below = xi(mid) < targets
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= 4e-16 * np.maximum(1.0, np.abs(hi))):
            break
    return np.exp(0.5 * (lo + hi))


def _log_linear_nodes(r0, r_max, n_cells, grading, anchor=None):
    """Nodes equidistant in xi(r) = a log(r/r0) + b (r - r0).

    Near ``r0`` the cells grow geometrically (spacing proportional to r),
    far out they are uniform.  With ``anchor`` the coefficients are
    adjusted so that the anchor radius is hit exactly by one node.
    """
    if not 0.0 <= grading < 1.0:
        raise ValueError("grading must lie in [0, 1)")
    L = math.log(r_max / r0)
    a = grading * n_cells / L
    b = (1.0 - grading) * n_cells / (r_max - r0)
    k = None
    if anchor is not None:
        if not r0 < anchor < r_max:
            raise ValueError("anchor radius must lie strictly inside the grid")
        k = int(round(a * math.log(anchor / r0) + b * (anchor - r0)))
        k = min(max(k, 1), n_cells - 1)
        M = np.array([[math.log(anchor / r0), anchor - r0], [L, r_max - r0]])
        a, b = np.linalg.solve(M, [k, n_cells])
        if a < 0 or b < 0:
            raise ValueError("cannot place anchor node with this grading")
    j = np.arange(n_cells + 1, dtype=float)
    r = _invert_log_linear(a, b, r0, j)
    r[0], r[-1] = r0, r_max
    if k is not None:
        r[k] = anchor
    return r, k


def graded_grid(r_max: float, n_cells: int, grading: float = 0.3,
                first_cell: float | None = None) -> RadialGrid:
    """Mesh on ``[0, r_max]``: origin, geometric zone, uniform far zone."""
    if r_max <= 0:
        raise ValueError("r_max must be positive")
    if first_cell is None:
        first_cell = 1e-6 * r_max
    if not 0 < first_cell < r_max:
        raise ValueError("first_cell must lie in (0, r_max)")
    r, _ = _log_linear_nodes(first_cell, r_max, n_cells - 1, grading)
    return RadialGrid(np.concatenate([[0.0], r]), FROM_ZERO)


def graded_grid_from(r_min: float, r_max: float, n_cells: int,
                     grading: float = 0.5, anchor: float | None = None) -> RadialGrid:
    """Mesh on ``[r_min, r_max]``, optionally with a node exactly at ``anchor``."""
    if not 0 < r_min < r_max:
        raise ValueError("need 0 < r_min < r_max")
    r, k = _log_linear_nodes(r_min, r_max, n_cells, grading, anchor)
    return RadialGrid(r, FROM_RMIN, anchor_index=k)


def uniform_grid(r_max: float, n_cells: int) -> RadialGrid:
    return RadialGrid(np.linspace(0.0, r_max, n_cells + 1), FROM_ZERO)


def _nodes(grid):
    return grid.nodes if isinstance(grid, RadialGrid) else np.asarray(grid, dtype=float)


def _check_finite(f, name="integrand"):
    f = np.asarray(f, dtype=float)
    bad = np.flatnonzero(~np.isfinite(f))
    if bad.size:
        raise QuadratureError(f"non-finite {name} at node index {bad[0]}")
    return f


def cumulative_integral(f, grid, seed: float = 0.0) -> np.ndarray:
    """Composite trapezoid primitive ``F(r_i) = seed + int_{r_0}^{r_i} f``.

    ``seed`` carries the analytic contribution of ``[0, r_min]`` on grids
    that do not reach the origin.
    """
    f = _check_finite(f)
    r = _nodes(grid)
    if f.shape != r.shape:
        raise QuadratureError("integrand and grid have different lengths")
    return cumulative_trapezoid(f, r, initial=0.0) + seed


def _fitted_weights(x):
    """Weights of the exponentially fitted trapezoid on one cell.

    For ``int_0^1 exp(-x u) [(1-u) f_b + u f_a] du`` returns ``(w_a, w_b)``.
    """
    x = np.asarray(x, dtype=float)
    small = x < 1e-2
    xs = np.where(small, 1.0, x)
    e = np.exp(-xs)
    wa = (1.0 - (1.0 + xs) * e) / (xs * xs)
    wb = -np.expm1(-xs) / xs - wa
    x1 = np.where(small, x, 0.0)
    wa_s = 0.5 - x1 / 3 + x1**2 / 8 - x1**3 / 30 + x1**4 / 144
    wb_s = 0.5 - x1 / 6 + x1**2 / 24 - x1**3 / 120 + x1**4 / 720
    return np.where(small, wa_s, wa), np.where(small, wb_s, wb)


def kernel_transform(grid, f, exponent, power: float, scale: float,
                     seed: float | None = None) -> np.ndarray:
    """Weighted Volterra transform on every node.

    Computes ``Q(r) = r**-scale * int_0^r t**power exp(Y(t)-Y(r)) f(t) dt``
    where ``Y = exponent``.  Cells are integrated in ``log t`` with the
    weight ``t**(power+1) exp(Y)`` treated as an exponential, so pure power
    weights are integrated exactly; on a from-zero grid the first cell uses
    exact moments of ``t**power``.

    ``seed`` is ``Q(r_0)`` on a from-rmin grid: the contribution of
    ``[0, r_min]`` (required there, forbidden on a from-zero grid).
    """
    r = _nodes(grid)
    f = _check_finite(f)
    Y = _check_finite(exponent, "exponent")
    if f.shape != r.shape or Y.shape != r.shape:
        raise QuadratureError("integrand, exponent and grid differ in length")
    dY = np.diff(Y)
    if np.any(dY < -1e-12 * np.maximum(1.0, np.abs(Y[1:]))):
        i = int(np.flatnonzero(dY < 0)[0])
        raise QuadratureError(f"exponent decreases between nodes {i} and {i + 1}")
    dY = np.maximum(dY, 0.0)
    p, s = float(power), float(scale)
    if s > p + 1:
        raise QuadratureError("transform is singular at r = 0 for scale > power + 1")

    # each cell is integrated in s = log t, where the weight t**(power+1)
    # e**Y is exponential with exponent L = Y + (power+1) s; the running
    # value is J(r) = r**-(power+1) int_0^r t**power e**(Y(t)-Y(r)) f dt
    n = r.size
    if r[0] == 0.0:
        if seed is not None:
            raise QuadratureError("seed only applies to grids starting at r_min > 0")
        f0 = math.exp(Y[0] - Y[1]) * f[0]
        head, start = [0.0, f0 / (p + 1) + (f[1] - f0) / (p + 2)], 1
    else:
        if seed is None:
            raise QuadratureError("from_rmin grid needs the [0, r_min] seed")
        head, start = [seed * r[0] ** (s - p - 1)], 0

    rr = r[start:]
    hs = np.log(rr[1:] / rr[:-1])
    x = dY[start:] + (p + 1) * hs
    wa, wb = _fitted_weights(x)
    decay = np.exp(-x)
    gain = hs * (wa * f[start:-1] + wb * f[start + 1:])
    J0 = head.pop()
    tail = list(accumulate(zip(decay.tolist(), gain.tolist()),
                           lambda q, dc: dc[0] * q + dc[1], initial=J0))
    J = np.array(head + tail)
    assert J.size == n

    Q = np.empty(n)
    if r[0] == 0.0:
        Q[1:] = r[1:] ** (p + 1 - s) * J[1:]
        Q[0] = f[0] / (p + 1) if s == p + 1 else 0.0
    else:
        Q[:] = r ** (p + 1 - s) * J
    return Q


def kernel_derivative(grid, f, exponent_slope, Q, power: float, scale: float) -> np.ndarray:
    """Exact derivative of :func:`kernel_transform` from the transform itself.

    ``Q' = r**(power-scale) f - (scale/r + Y') Q``; at ``r = 0`` the limit
    ``f(0)/(power+1)`` is used when ``scale == power`` and 0 otherwise.
    """
    r = _nodes(grid)
    f = np.asarray(f, dtype=float)
    dY = np.asarray(exponent_slope, dtype=float)
    p, s = float(power), float(scale)
    out = np.empty_like(r)
    pos = r > 0
    rp = r[pos]
    out[pos] = rp ** (p - s) * f[pos] - (s / rp + dY[pos]) * Q[pos]
    if not pos[0]:
        out[0] = f[0] / (p + 1) if s == p else 0.0
    return out


def kernel_integral(r_index: int, f, W, d: int, grid) -> float:
    """``r^(1-d) int_0^r t^(d-1) exp(W(t)-W(r)) f(t) dt`` at one node."""
    return float(kernel_transform(grid, f, W, d - 1, d - 1)[r_index])


def kernel_integral_theta(r_index: int, f, Z, d: int, power: int, grid) -> float:
    """``r^(2-d) int_0^r t^power exp(Z(t)-Z(r)) f(t) dt`` at one node.

    ``power`` is ``d - 3`` (homogeneous temperature term) or ``d - 2``.
    """
    if power not in (d - 3, d - 2):
        raise ValueError("power must be d-3 or d-2")
    return float(kernel_transform(grid, f, Z, power, d - 2)[r_index])
