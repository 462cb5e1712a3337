"""
Profiles, the integral map shared by both cases, and the Picard loop.

The map sends an iterate ``(U, U', Theta, Theta')`` to the right-hand sides
of the integral representations:

    U     = nu^-1 r^(1-d) int_0^r t^(d-1) e^(W(t)-W(r)) F_U(t) dt
    Theta = Theta_hom - U^2 / (2 C_V)
            + kappa^-1 r^(2-d) int_0^r t^(d-2) e^(Z(t)-Z(r)) F_Theta(t) dt

with ``Theta_hom = Theta0 (d-2) r^(2-d) int_0^r t^(d-3) e^(Z(t)-Z(r)) dt``.
Derivatives come from differentiating these representations exactly, so
no numerical differentiation enters the iteration.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .aux_fields import compute_aux, compute_P, compute_V
from .core import CAVITATING, SMOOTH, PhysicalParams
from .grid import RadialGrid, kernel_derivative, kernel_transform


class NonConvergence(RuntimeError):
    def __init__(self, message, profile=None, trace=None):
        super().__init__(message)
        self.profile = profile
        self.trace = trace


class AnchorMismatch(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Profile:
    """Sampled self-similar profile on a radial grid.

    ``P`` is always the density generated by this profile's own ``U``.
    """

    grid: RadialGrid
    P: np.ndarray
    U: np.ndarray
    Theta: np.ndarray
    dU: np.ndarray
    dTheta: np.ndarray
    case: str
    boundary: object
    params: PhysicalParams

    @property
    def r(self) -> np.ndarray:
        return self.grid.nodes

    def check_invariants(self) -> list[str]:
        """Return a list of violated structural invariants (empty if fine)."""
        problems = []
        r = self.r
        for name in ("P", "U", "Theta", "dU", "dTheta"):
            if not np.all(np.isfinite(getattr(self, name))):
                problems.append(f"{name} has non-finite samples")
        if not np.all(self.P[r > 0] > 0):
            problems.append("P not strictly positive for r > 0")
        if self.case == SMOOTH and not self.P[0] > 0:
            problems.append("P(0) not positive")
        if not np.all((0.5 * r - self.U)[r > 0] > 0):
            problems.append("r/2 - U not positive")
        return problems


@dataclass
class IterationTrace:
    """Per-sweep weighted distances, their ratios and wall times."""

    distances: list = field(default_factory=list)
    times: list = field(default_factory=list)

    @property
    def ratios(self) -> list:
        D = self.distances
        return [D[k + 1] / D[k] if D[k] > 0 else 0.0 for k in range(len(D) - 1)]

    @property
    def iterations(self) -> int:
        return len(self.distances)


def weighted_distance(a: Profile, b: Profile) -> float:
    """Weighted sup distance between two iterates on the same grid.

    Smooth case: ``r^-2|dU| + r^-1|dU'| + |dTheta| + r^-1|dTheta'|``;
    cavitating case: the U weights drop by one power of r.  The weights use
    ``min(r, 1)`` so the far field is not over-weighted; the axis node only
    contributes its temperature difference.
    """
    r = a.r
    pos = r > 0
    rc = np.minimum(r[pos], 1.0)
    kU = 2 if a.case == SMOOTH else 1
    dU = np.abs(a.U - b.U)[pos]
    ddU = np.abs(a.dU - b.dU)[pos]
    dT = np.abs(a.Theta - b.Theta)
    ddT = np.abs(a.dTheta - b.dTheta)[pos]
    w = dU / rc**kU + ddU / rc ** (kU - 1) + dT[pos] + ddT / rc
    return float(max(w.max(initial=0.0), dT.max()))


def _blend(r, diffusivity, P_ref):
    # exp(-Y) with Y ~ P r^2 / (4 diffusivity), the leading growth of W or Z
    rs2 = 4.0 * diffusivity / P_ref
    w = np.exp(-r * r / rs2)
    return w, -2.0 * r / rs2 * w


def integral_map(current: Profile, damping: float = 1.0) -> Profile:
    """One application of the integral map (optionally relaxed)."""
    grid, b, params, case = current.grid, current.boundary, current.params, current.case
    r = grid.nodes
    d, nu, kap, CV = params.d, params.nu, params.kappa, params.C_V
    U, dU, Th = current.U, current.dU, current.Theta

    aux = compute_aux(grid, U, dU, Th, b, params, case)
    if case == CAVITATING:
        P_anchor = aux.P[grid.anchor_index]
        if abs(P_anchor - b.P_delta) > 1e-8 * b.P_delta:
            raise AnchorMismatch(f"P(delta) = {P_anchor!r} differs from P_delta = {b.P_delta!r}")
    s = aux.seeds
    seed = (lambda name: getattr(s, name)) if s is not None else (lambda name: None)

    P_ref = b.P0 if case == SMOOTH else b.P_delta

    # constant part of the momentum forcing (d nu alpha in the vacuum case),
    # transformed like the homogeneous temperature term below
    c0 = d * nu * b.alpha if case == CAVITATING else 0.0
    fU = (aux.F_U - c0) / nu
    U_new = kernel_transform(grid, fU, aux.W, d - 1, d - 1, seed("Q_U"))
    dU_new = kernel_derivative(grid, fU, aux.dW, U_new, d - 1, d - 1)
    if c0:
        Ks = kernel_transform(grid, aux.dW, aux.W, d, d - 1, seed("Q_U_split"))
        dKs = kernel_derivative(grid, aux.dW, aux.dW, Ks, d, d - 1)
        dd = np.full_like(r, float(d))
        Kd = kernel_transform(grid, dd, aux.W, d - 1, d - 1, seed("Q_U_direct"))
        dKd = kernel_derivative(grid, dd, aux.dW, Kd, d - 1, d - 1)
        w, dw = _blend(r, nu, P_ref)
        a = b.alpha
        U_new = U_new + a * (w * (r - Ks) + (1.0 - w) * Kd)
        dU_new = dU_new + a * (w * (1.0 - dKs) + (1.0 - w) * dKd + dw * (r - Ks - Kd))

    fT = aux.F_Theta / kap
    H = kernel_transform(grid, fT, aux.Z, d - 2, d - 2, seed("Q_Theta"))
    dH = kernel_derivative(grid, fT, aux.dZ, H, d - 2, d - 2)

    # homogeneous term: split form 1 - Q_split near the axis (no cancellation
    # in the derivative), direct form Q_direct far out (no cancellation in
    # the value); blended by a fixed smooth weight
    Qs = kernel_transform(grid, aux.dZ, aux.Z, d - 2, d - 2, seed("Q_split"))
    dQs = kernel_derivative(grid, aux.dZ, aux.dZ, Qs, d - 2, d - 2)
    ones = np.full_like(r, d - 2.0)
    Qd = kernel_transform(grid, ones, aux.Z, d - 3, d - 2, seed("Q_direct"))
    dQd = kernel_derivative(grid, ones, aux.dZ, Qd, d - 3, d - 2)
    w, dw = _blend(r, kap / CV, P_ref)
    T0 = b.Theta0
    hom = T0 * (w * (1.0 - Qs) + (1.0 - w) * Qd)
    dhom = T0 * (-w * dQs + (1.0 - w) * dQd + dw * (Qd - 1.0 + Qs))

    Th_new = hom + H - U * U / (2 * CV)
    dTh_new = dhom + dH - U * dU / CV

    if damping != 1.0:
        U_new = damping * U_new + (1 - damping) * U
        dU_new = damping * dU_new + (1 - damping) * dU
        Th_new = damping * Th_new + (1 - damping) * Th
        dTh_new = damping * dTh_new + (1 - damping) * current.dTheta

    for name, arr in (("U", U_new), ("U'", dU_new), ("Theta", Th_new), ("Theta'", dTh_new)):
        if not np.all(np.isfinite(arr)):
            raise FloatingPointError(f"non-finite {name} produced by the integral map")

    P_new = compute_P(compute_V(grid, U_new, dU_new, d, case), b, case)
    return replace(current, P=P_new, U=U_new, Theta=Th_new, dU=dU_new, dTheta=dTh_new)


def iterate(seed: Profile, picard_tol: float, max_iter: int, damping: float = 1.0):
    """Picard iteration from ``seed`` until the weighted distance < tol."""
    trace = IterationTrace()
    current = seed
    for _ in range(max_iter):
        t0 = time.perf_counter()
        new = integral_map(current, damping)
        trace.distances.append(weighted_distance(new, current))
        trace.times.append(time.perf_counter() - t0)
        current = new
        if trace.distances[-1] < picard_tol:
            return current, trace
    ratio = trace.ratios[-1] if trace.ratios else float("nan")
    raise NonConvergence(
        f"no convergence after {max_iter} iterations "
        f"(last distance {trace.distances[-1]:.3e}, last ratio {ratio:.3g})",
        current, trace)
