from fractions import Fraction

import numpy as np
import pytest

from nsexpander.aux_fields import (CharacteristicDegeneracy, compute_F_Theta, compute_F_U,
                                   compute_P, compute_V, compute_W_Z, vacuum_seeds)
from nsexpander.core import (CAVITATING, SMOOTH, CavitatingBoundaryData, PhysicalParams,
                             SmoothBoundaryData, vacuum_exponent)
from nsexpander.grid import graded_grid, graded_grid_from, uniform_grid

P3 = PhysicalParams()
# N = 1e6 trapezoid with Richardson, cross-checked with mpmath quad
ORACLE_V_SMOOTH = 0.0025005188774513847  # U = 1e-3 r^2/(1+r)^3, d = 3, V(1)


def test_V_zero_velocity():
    g = graded_grid(10.0, 200)
    z = np.zeros(len(g))
    assert np.all(compute_V(g, z, z, 3) == 0.0)
    np.testing.assert_array_equal(compute_P(compute_V(g, z, z, 3), SmoothBoundaryData(P0=1.7)), 1.7)


def test_V_linear_velocity_is_log():
    a, dl = 1e-3, 0.1
    g = graded_grid_from(1e-3, 2.0, 4000, anchor=dl)
    r = g.nodes
    V = compute_V(g, a * r, np.full_like(r, a), 3, CAVITATING)
    beta = vacuum_exponent(a, 3)
    sel = (r >= dl / 10) & (r <= 10 * dl)
    np.testing.assert_allclose(V[sel], beta * np.log(r[sel] / dl), atol=1e-6)
    assert V[g.anchor_index] == 0.0


def test_V_smooth_oracle():
    g = uniform_grid(2.0, 4000)
    r = g.nodes
    U = 1e-3 * r**2 / (1 + r) ** 3
    dU = 1e-3 * (2 * r / (1 + r) ** 3 - 3 * r**2 / (1 + r) ** 4)
    V = compute_V(g, U, dU, 3)
    assert V[0] == 0.0
    assert V[2000] == pytest.approx(ORACLE_V_SMOOTH, rel=1e-6)


def test_V_degenerate_characteristic():
    g = uniform_grid(1.0, 10)
    r = g.nodes
    with pytest.raises(CharacteristicDegeneracy) as info:
        compute_V(g, 0.6 * r, np.full_like(r, 0.6), 3)
    assert info.value.index == 1


def test_P_power_law_from_log_exponent():
    a, dl, Pd = 1e-3, 0.1, 1e-2
    beta = vacuum_exponent(a, 3)
    r = np.geomspace(1e-4, 1.0, 50)
    P = compute_P(beta * np.log(r / dl), CavitatingBoundaryData(P_delta=Pd, delta=dl, alpha=a), CAVITATING)
    np.testing.assert_allclose(P, Pd * (r / dl) ** beta, rtol=1e-14)


def test_P_bracket_from_V_bound():
    g = graded_grid(30.0, 2000)
    r = g.nodes
    M1 = 0.02
    U = M1 * r**2 / (1 + r) ** 3
    dU = M1 * (2 * r / (1 + r) ** 3 - 3 * r**2 / (1 + r) ** 4)
    V = compute_V(g, U, dU, 3)
    M0 = 3 * M1 / (1 - 2 * M1)
    assert np.max(np.abs(V)) <= M0
    P = compute_P(V, SmoothBoundaryData(P0=1.0))
    assert np.all((np.exp(-M0) <= P) & (P <= np.exp(M0)))


def test_W_Z_constant_density():
    g = uniform_grid(5.0, 1000)
    p = PhysicalParams(mu=0.7, lam=0.2, C_V=1.5, kappa=0.8)
    W, Z = compute_W_Z(g, np.full(len(g), 2.0), p)
    r = g.nodes
    np.testing.assert_allclose(W, 2.0 * r**2 / (4 * p.nu), atol=1e-6)
    np.testing.assert_allclose(Z, p.C_V * 2.0 * r**2 / (4 * p.kappa), atol=1e-6)
    W0, Z0 = compute_W_Z(g, np.zeros(len(g)), p)
    assert not W0.any() and not Z0.any()
    # Z is a fixed multiple of W
    Wr, Zr = compute_W_Z(g, 1 + np.sin(r) ** 2, p)
    np.testing.assert_allclose(Zr, p.C_V * p.nu / p.kappa * Wr, rtol=1e-14)


def test_W_power_law_closed_form():
    a, dl, Pd = 1e-3, 0.1, 1e-2
    b = CavitatingBoundaryData(P_delta=Pd, delta=dl, alpha=a)
    beta = vacuum_exponent(a, 3)
    g = graded_grid_from(1e-4, 2.0, 4000, anchor=dl)
    r = g.nodes
    P = Pd * (r / dl) ** beta
    seeds = vacuum_seeds(r[0], P[0], b, P3)
    W, _ = compute_W_Z(g, P, P3, seeds.rP)
    exact = Pd * r**2 * (r / dl) ** beta / (2 * P3.nu * (beta + 2))
    np.testing.assert_allclose(W, exact, rtol=1e-5)


def test_F_U_trivial_cases():
    g = graded_grid(10.0, 300)
    n = len(g)
    b = SmoothBoundaryData(P0=1.3, Theta0=0.02)
    F = compute_F_U(g, np.full(n, 1.3), np.zeros(n), np.full(n, 0.02), b, P3)
    assert np.all(F == 0.0)
    bc = CavitatingBoundaryData()
    h = graded_grid_from(1e-4, 10.0, 300, anchor=0.1)
    P = np.random.default_rng(0).uniform(0.1, 2.0, len(h))
    F = compute_F_U(h, P, np.zeros(len(h)), np.zeros(len(h)), bc, P3, CAVITATING)
    np.testing.assert_allclose(F, 3 * P3.nu * bc.alpha, rtol=1e-15)


def _bound_inputs(M1, M2, n=3000):
    g = graded_grid(30.0, n)
    r = g.nodes
    U = M1 * r**2 / (1 + r) ** 3
    dU = M1 * (2 * r / (1 + r) ** 3 - 3 * r**2 / (1 + r) ** 4)
    Th = M2 / (1 + r) ** 2
    P = compute_P(compute_V(g, U, dU, 3), SmoothBoundaryData(1.0, M2))
    return g, r, P, U, dU, Th


@pytest.mark.parametrize("M1,M2", [(1e-2, 1e-3), (1e-3, 1e-4), (4e-2, 1e-2)])
def test_F_U_bound(M1, M2):
    g, r, P, U, dU, Th = _bound_inputs(M1, M2)
    F = compute_F_U(g, P, U, Th, SmoothBoundaryData(1.0, M2), P3)
    env = (M1**2 + M2) * r / (1 + r)
    C = np.max(np.abs(F[1:]) / env[1:])
    assert C < 5.0, C


@pytest.mark.parametrize("M1,M2", [(1e-2, 1e-3), (1e-3, 1e-4), (4e-2, 1e-2)])
def test_F_Theta_bound(M1, M2):
    g, r, P, U, dU, Th = _bound_inputs(M1, M2)
    F = compute_F_Theta(g, P, U, dU, Th, P3)
    env = (M1**2 + M1 * M2) * r / (1 + r) ** 2
    C = np.max(np.abs(F[1:]) / env[1:])
    assert C < 20.0, C


def test_F_Theta_zero_velocity():
    g = graded_grid(10.0, 300)
    n = len(g)
    assert np.all(compute_F_Theta(g, np.ones(n), np.zeros(n), np.zeros(n), np.ones(n), P3) == 0.0)


def test_F_Theta_polynomial_hand_value():
    # P = 1 + r^2, U = r^2, Theta = 1, d = 3, mu = 1, lambda = 1/2 at r = 1:
    # flux G(1) = 5, int_0^1 G = 1/14 + 2/3 + 1/18 + 2/5,
    # (kappa/C_V - nu)(U U' + U^2/(2r)) = -3/2 * 5/2,
    # -lambda (d-1)(U^2/r + (1/r) int U^2/r) = -(1 + 1/4)
    p = PhysicalParams(mu=1.0, lam=0.5)
    g = uniform_grid(2.0, 40000)
    r = g.nodes
    F = compute_F_Theta(g, 1 + r**2, r**2, 2 * r, np.ones_like(r), p)
    exact = (5 + Fraction(1, 14) + Fraction(2, 3) + Fraction(1, 18) + Fraction(2, 5)
             - Fraction(15, 4) - Fraction(5, 4))
    assert F[20000] == pytest.approx(float(exact), abs=1e-8)


def test_vacuum_seeds_match_fine_quadrature():
    # the seeds are the [0, r_min] pieces of integrals of the power-law state
    b = CavitatingBoundaryData()
    beta = vacuum_exponent(b.alpha, 3)
    r_min = 1e-3
    c = b.P_delta / b.delta**beta
    s = vacuum_seeds(r_min, c * r_min**beta, b, P3)
    t = np.geomspace(1e-14, r_min, 200001)
    P = c * t**beta
    U = b.alpha * t
    np.testing.assert_allclose(s.rP, np.trapezoid(t * P, t), rtol=1e-6)
    np.testing.assert_allclose(s.PU2, np.trapezoid(2 * P * U * U / t, t), rtol=1e-6)
    np.testing.assert_allclose(s.U2_over_r, np.trapezoid(U * U / t, t), rtol=1e-6)
    flux = U * P * (0.5 * U * U + b.Theta0) + U * P * b.Theta0
    np.testing.assert_allclose(s.energy_flux, np.trapezoid(flux, t), rtol=1e-6)
