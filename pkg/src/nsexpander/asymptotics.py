"""
Far-field constants of converged profiles and their leading-order formulas.

The tails behave like

    P = P_inf + O(r^-2),   U = U_inf / r + O(r^-3),   Theta = Theta_inf / r^2 + O(r^-4)

so ``P``, ``r U`` and ``r^2 Theta`` are each fitted by ``c0 + c1 / r^2``
over a window in the outer half of the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import SMOOTH, PhysicalParams, case_of, default_config

MIN_FIT_NODES = 20


class TailFitError(ValueError):
    pass


@dataclass(frozen=True)
class AsymptoticSummary:
    """Fitted far-field constants.

    ``coeffs`` holds the ``1/r^2`` coefficients of the three fits and
    ``fit_rms`` the root-mean-square misfit of each.  ``P_increment`` is
    ``P(r_max)`` minus the reference density (``P0`` or ``P_delta``).
    """

    P_inf: float
    U_inf: float
    Theta_inf: float
    window: tuple[float, float]
    n_nodes: int
    coeffs: dict = field(default_factory=dict)
    fit_rms: dict = field(default_factory=dict)
    P_increment: float = math.nan
    r_max: float = math.nan
    n_cells: int = 0

    def as_dict(self) -> dict:
        return {"P_inf": self.P_inf, "U_inf": self.U_inf, "Theta_inf": self.Theta_inf}


def _fit(r, y):
    A = np.column_stack([np.ones_like(r), r**-2.0])
    if np.linalg.cond(A) > 1e10:
        raise TailFitError("tail fit is ill-conditioned; widen the window")
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    rms = float(np.sqrt(np.mean((A @ coef - y) ** 2)))
    return float(coef[0]), float(coef[1]), rms


def fit_tail(profile, window: tuple[float, float] | None = None) -> AsymptoticSummary:
    """Least-squares tail fit over ``window`` (default ``[r_max/2, r_max]``).

    Raises :class:`TailFitError` if the window holds fewer than 20 nodes or
    the two-column design matrix is ill-conditioned.
    """
    r = profile.r
    r_max = float(r[-1])
    lo, hi = window if window is not None else (0.5 * r_max, r_max)
    if not 0 < lo < hi:
        raise TailFitError(f"bad fit window ({lo}, {hi})")
    sel = (r >= lo) & (r <= hi)
    n = int(sel.sum())
    if n < MIN_FIT_NODES:
        raise TailFitError(f"fit window [{lo:g}, {hi:g}] holds {n} nodes, need {MIN_FIT_NODES}")
    x = r[sel]
    P_inf, a, ra = _fit(x, profile.P[sel])
    U_inf, bb, rb = _fit(x, x * profile.U[sel])
    T_inf, c, rc = _fit(x, x * x * profile.Theta[sel])
    b = profile.boundary
    P_ref = b.P0 if profile.case == SMOOTH else b.P_delta
    return AsymptoticSummary(
        P_inf, U_inf, T_inf, (float(lo), float(hi)), n,
        coeffs={"P": a, "U": bb, "Theta": c},
        fit_rms={"P": ra, "U": rb, "Theta": rc},
        P_increment=float(profile.P[-1] - P_ref),
        r_max=r_max, n_cells=len(r) - 1)


def leading_order(params: PhysicalParams, b) -> dict:
    """Leading-order predictions of ``U_inf`` and ``Theta_inf``."""
    d, kap, CV = params.d, params.kappa, params.C_V
    if case_of(b) == SMOOTH:
        return {"U_inf": -2.0 * params.R * b.Theta0,
                "Theta_inf": 2.0 * (d - 2) * kap * b.Theta0 / (CV * b.P0)}
    return {"U_inf": 2.0 * d * params.nu * b.alpha / b.P_delta,
            "Theta_inf": 2.0 * (d - 2) * kap * b.Theta0 / (CV * b.P_delta)}


def leading_order_tolerances(b, floor: float = 0.05) -> dict:
    """Relative tolerances scaled by the size of the neglected corrections.

    Smooth: a flat ``floor``.  Cavitating: ``max(floor, 3 eps)`` with
    ``eps = alpha log(1/(P_delta delta^2))`` for ``U_inf`` and
    ``eps + alpha^2/(P_delta Theta0)`` for ``Theta_inf``.
    """
    if case_of(b) == SMOOTH:
        return {"U_inf": floor, "Theta_inf": floor}
    e1 = b.alpha * math.log(1.0 / (b.P_delta * b.delta**2))
    e2 = b.alpha**2 / (b.P_delta * b.Theta0) if b.Theta0 > 0 else math.inf
    return {"U_inf": max(floor, 3 * e1), "Theta_inf": max(floor, 3 * (e1 + e2))}


@dataclass
class ComparisonReport:
    """Fitted constants against their leading-order predictions."""

    case: str
    predicted: dict
    fitted: dict
    deviation: dict
    tolerance: dict
    ratio: float | None = None
    ratio_tolerance: float = 0.05

    @property
    def passed(self) -> dict:
        out = {k: self.deviation[k] <= self.tolerance[k] for k in self.deviation}
        if self.ratio is not None:
            out["Theta0 ratio"] = abs(self.ratio - 2.0) <= self.ratio_tolerance
        return out

    @property
    def ok(self) -> bool:
        return all(self.passed.values())


def check_leading_order(summary: AsymptoticSummary, params: PhysicalParams, b,
                        half: AsymptoticSummary | None = None, ratio_test: bool = True,
                        config=None) -> ComparisonReport:
    """Relative deviations of the fitted constants from the predictions.

    In the smooth case the ratio ``U_inf(Theta0) / U_inf(Theta0/2)`` is also
    reported; ``half`` is the summary of the ``Theta0/2`` run and is solved
    here (same truncation and cell count) when not supplied.
    """
    case = case_of(b)
    pred = leading_order(params, b)
    fitted = {"U_inf": summary.U_inf, "Theta_inf": summary.Theta_inf}
    dev = {k: abs(fitted[k] - pred[k]) / abs(pred[k]) if pred[k]
           else (0.0 if fitted[k] == 0 else math.inf) for k in pred}
    report = ComparisonReport(case, pred, fitted, dev, leading_order_tolerances(b))
    if case == SMOOTH and ratio_test:
        if half is None:
            from .smooth import solve_smooth
            cfg = config or default_config(SMOOTH, r_max=summary.r_max, n_cells=summary.n_cells)
            prof, _ = solve_smooth(params, replace(b, Theta0=0.5 * b.Theta0), cfg)
            half = fit_tail(prof)
        report.ratio = summary.U_inf / half.U_inf if half.U_inf != 0 else math.nan
    return report
