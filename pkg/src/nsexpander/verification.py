"""
A posteriori checks on converged profiles.

* :func:`ode_residual` plugs the profile into the raw radial ODE system
  (mass, momentum, energy), independent of the integral reformulation.
* :func:`bootstrap_norm` evaluates the weighted sup functional Z(s) that
  drives the global continuation argument.
* :func:`bound_suite` fits the smallest constants in the decay bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import SMOOTH, vacuum_exponent
from .picard import Profile


def fd_first(f, r):
    """Second-order three-point derivative on a non-uniform mesh.

    Interior nodes only; the two end values are ``nan``.
    """
    f = np.asarray(f, dtype=float)
    hm = r[1:-1] - r[:-2]
    hp = r[2:] - r[1:-1]
    out = np.full_like(f, np.nan)
    # written in differences so constants differentiate to exactly 0
    out[1:-1] = (hp / (hm * (hm + hp)) * (f[1:-1] - f[:-2])
                 + hm / (hp * (hm + hp)) * (f[2:] - f[1:-1]))
    return out


@dataclass
class ResidualReport:
    """Pointwise residuals of the three ODEs and their norms.

    Momentum is divided by ``2 mu + lambda`` and energy by ``kappa``.
    ``mask`` marks the nodes where residuals were evaluated.
    """

    r: np.ndarray
    mask: np.ndarray
    mass: np.ndarray
    momentum: np.ndarray
    energy: np.ndarray
    max_spacing: float

    def sup(self) -> dict:
        return {k: float(np.max(np.abs(getattr(self, k)[self.mask])))
                for k in ("mass", "momentum", "energy")}

    def l2(self) -> dict:
        r = self.r[self.mask]
        out = {}
        for k in ("mass", "momentum", "energy"):
            v = getattr(self, k)[self.mask]
            out[k] = float(np.sqrt(np.trapezoid(v * v, r) / (r[-1] - r[0])))
        return out

    @property
    def sup_total(self) -> float:
        return max(self.sup().values())


def ode_residual(profile: Profile, first: int = 3) -> ResidualReport:
    """Residuals of the radial ODE system at interior nodes ``first..n-2``.

    ``P'``, ``U''`` and ``Theta''`` are finite differences (of ``P``, the
    carried ``U'`` and the carried ``Theta'``); first derivatives of U and
    Theta are the carried ones.
    """
    r = profile.r
    if r.size - 1 - first < 5:
        raise ValueError("need at least 5 interior nodes for residuals")
    p = profile.params
    d, R, CV, kap, mu, lam, nu = p.d, p.R, p.C_V, p.kappa, p.mu, p.lam, p.nu
    P, U, Th, dU, dTh = profile.P, profile.U, profile.Theta, profile.dU, profile.dTheta
    dP = fd_first(P, r)
    d2U = fd_first(dU, r)
    d2Th = fd_first(dTh, r)

    mask = np.zeros(r.size, dtype=bool)
    mask[first:-1] = True
    mask &= r > 0
    rr = np.where(mask, r, 1.0)

    div = dU + (d - 1) * U / rr
    mass = -0.5 * rr * dP + dP * U + P * div

    lapU = d2U + (d - 1) / rr * dU - (d - 1) / rr**2 * U
    momentum = (-0.5 * P * U - 0.5 * rr * (dP * U + P * dU)
                + dP * U * U + 2 * P * U * dU + (d - 1) / rr * P * U * U
                + R * (dP * Th + P * dTh) - nu * lapU) / nu

    E = 0.5 * U * U + CV * Th
    dE = U * dU + CV * dTh
    G = U * P * (E + R * Th)
    dG = dU * P * (E + R * Th) + U * dP * (E + R * Th) + U * P * (dE + R * dTh)
    heating = (2 * mu * (dU * dU + (d - 1) * U * U / rr**2)
               + lam * div * div + nu * lapU * U)
    energy = (-P * E - 0.5 * rr * (dP * E + P * dE) + dG + (d - 1) / rr * G
              - kap * (d2Th + (d - 1) / rr * dTh) - heating) / kap

    zero = lambda a: np.where(mask, a, 0.0)
    return ResidualReport(r, mask, zero(mass), zero(momentum), zero(energy),
                          float(np.max(np.diff(r))))


def convergence_orders(reports: list[ResidualReport]) -> list[float]:
    """log2 of successive sup-residual ratios across grid doublings."""
    sups = [rep.sup_total for rep in reports]
    return [math.log2(a / b) for a, b in zip(sups[:-1], sups[1:])]


@dataclass(frozen=True)
class BootstrapConstants:
    M1: float
    M2: float
    M1p: float | None = None

    def scaled(self, k: float) -> "BootstrapConstants":
        return BootstrapConstants(k * self.M1, k * self.M2,
                                  None if self.M1p is None else k * self.M1p)


def bootstrap_M0(M1: float, d: int) -> float:
    """Bound on |V| implied by |U| <= M1 r^2 (1+r)^-3: d M1 / (1 - 2 M1)."""
    return d * M1 / (1 - 2 * M1)


def smooth_constants(Theta0: float, A: float = 10.0) -> BootstrapConstants:
    return BootstrapConstants(M1=A * A * Theta0, M2=A * Theta0)


def cavitating_constants(alpha: float, P_delta: float, Lam: float = 10.0) -> BootstrapConstants:
    return BootstrapConstants(M1=Lam * alpha, M2=alpha / P_delta, M1p=Lam * Lam * alpha)


@dataclass
class BootstrapReport:
    case: str
    M0: float | None
    M1: float
    M1p: float | None
    M2: float
    Z: np.ndarray
    terms: dict = field(default_factory=dict)

    @property
    def max_Z(self) -> float:
        return float(np.max(self.Z))

    @property
    def argmax_term(self) -> str:
        return max(self.terms, key=lambda k: float(np.max(self.terms[k])))


def _scaled(num, M):
    # 0/0 counts as 0 so the trivial profile has Z = 0 for any constants
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(num == 0, 0.0, num / M)


def bootstrap_norm(profile: Profile, constants: BootstrapConstants) -> BootstrapReport:
    """Running supremum Z(s) of the weighted bootstrap functional.

    Smooth weights ``(1+r)^3 r^-2``, ``(1+r)^3 r^-1``, ``(1+r)^2``,
    ``(1+r)^2 r^-1``; cavitating weights use ``(1 + sqrt(P_delta) r)^2``
    with the ``|U' + (d-1)U/r|`` term scaled by ``1/M1'`` and the
    ``Theta'`` term by ``(P_delta r)^-1``.
    """
    r = profile.r
    d = profile.params.d
    U, dU, Th, dTh = profile.U, profile.dU, profile.Theta, profile.dTheta
    pos = r > 0
    rr = np.where(pos, r, 1.0)
    c = constants
    if profile.case == SMOOTH:
        div = np.abs(dU + (d - 1) * U / rr)
        terms = {
            "U": _scaled((1 + r) ** 3 * np.abs(U) / rr**2, c.M1),
            "div U": _scaled((1 + r) ** 3 * div / rr, c.M1),
            "Theta": _scaled((1 + r) ** 2 * np.abs(Th), c.M2),
            "Theta'": _scaled((1 + r) ** 2 * np.abs(dTh) / rr, c.M2),
        }
        M0 = bootstrap_M0(c.M1, d)
    else:
        if c.M1p is None or not c.M1 < c.M1p:
            raise ValueError("cavitating bootstrap needs M1 < M1'")
        Pd = profile.boundary.P_delta
        wgt = (1 + math.sqrt(Pd) * r) ** 2
        terms = {
            "U": _scaled(wgt * np.abs(U) / rr, c.M1),
            "div U": _scaled(wgt * np.abs(dU + (d - 1) * U / rr), c.M1p),
            "Theta": _scaled(wgt * np.abs(Th), c.M2),
            "Theta'": _scaled(wgt * np.abs(dTh) / (Pd * rr), c.M2),
        }
        M0 = None
    for k in ("U", "div U", "Theta'"):
        terms[k] = np.where(pos, terms[k], 0.0)
    Z = np.maximum.accumulate(sum(terms.values()))
    return BootstrapReport(profile.case, M0, c.M1, c.M1p, c.M2, Z, terms)


@dataclass
class BoundReport:
    """Smallest constants C making each decay bound hold at every node."""

    constants: dict
    ceiling: float
    p_bracket_ok: bool
    characteristic_margin: float
    flags: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.flags


def _fit_constant(values, envelope):
    mask = envelope > 0
    if not np.any(mask):
        return 0.0
    return float(np.max(np.abs(values[mask]) / envelope[mask]))


def bound_suite(profile: Profile, ceiling: float = 100.0) -> BoundReport:
    """Fit the global decay constants and check the density brackets."""
    r = profile.r
    b, p = profile.boundary, profile.params
    d = p.d
    U, dU, Th, dTh, P = profile.U, profile.dU, profile.Theta, profile.dTheta, profile.P
    if profile.case == SMOOTH:
        T0 = b.Theta0
        C = {
            "U": _fit_constant(U, T0 * r**2 / (1 + r) ** 3),
            "dU": _fit_constant(dU, T0 * r / (1 + r) ** 3),
            "Theta": _fit_constant(Th, T0 / (1 + r) ** 2),
            "dTheta": _fit_constant(dTh, T0 * r / (1 + r) ** 2),
        }
        # |V| <= M0 with the running size of U as M1
        M1 = _fit_constant(U, r**2 / (1 + r) ** 3)
        M0 = bootstrap_M0(M1, d) if M1 < 0.5 else math.inf
        bracket = bool(np.all(P >= math.exp(-M0) * b.P0 * (1 - 1e-12))
                       and np.all(P <= math.exp(M0) * b.P0 * (1 + 1e-12)))
    else:
        a, Pd, dl = b.alpha, b.P_delta, b.delta
        sq = math.sqrt(Pd)
        beta = vacuum_exponent(a, d)
        C = {
            "P": _fit_constant(P, Pd * np.minimum(1.0, (r / dl) ** beta)),
            "U": _fit_constant(U, a * r / (1 + sq * r) ** 2),
            "dU": _fit_constant(dU, a / (1 + sq * r) ** 2),
            "Theta": _fit_constant(Th, 1 / (1 + sq * r) ** 2),
            "dTheta": _fit_constant(dTh, sq * r / (1 + sq * r) ** 2),
        }
        inner = r <= dl
        x = r[inner] / dl
        tol = 1e-12
        bracket = bool(np.all(P[inner] >= x ** (4 * d * a) * Pd * (1 - tol))
                       and np.all(P[inner] <= x ** (d * a) * Pd * (1 + tol)))
        outer = r >= dl
        C["P_lower"] = float(np.max(Pd / P[outer]))
    pos = r > 0
    margin = float(np.min((0.5 * r - U)[pos]))
    flags = [k for k, v in C.items() if v > ceiling]
    if not bracket:
        flags.append("P bracket")
    if not margin > 0:
        flags.append("characteristic")
    return BoundReport(C, ceiling, bracket, margin, flags)
