import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from nsexpander.core import (CAVITATING, SMOOTH, CavitatingBoundaryData, PhysicalParams,
                             SmoothBoundaryData, SolveConfig, default_config,
                             smallness_functional, validate_config, validate_params,
                             vacuum_exponent)


def test_reference_smooth_data_passes():
    rep = validate_params(PhysicalParams(), SmoothBoundaryData(1.0, 1e-3))
    assert rep.ok and rep.case == SMOOTH and not rep.failures


def test_negative_bulk_viscosity_fails():
    rep = validate_params(PhysicalParams(mu=1.0, lam=-1.0, d=3), SmoothBoundaryData())
    assert not rep
    assert rep.failures == ["2 mu + d lambda >= 0"]


def test_smallness_sum_hand_value():
    # 0.01 + 0.1 + 0.01 + 0.001 + 0.1 + 0.01 + 0.001*log(1e4)
    b = CavitatingBoundaryData(P_delta=1e-2, delta=1e-1, Theta0=1e-2, alpha=1e-3)
    S = smallness_functional(b)
    assert S == pytest.approx(0.2402103403719761, rel=1e-12)
    rep = validate_params(PhysicalParams(), b)
    assert rep.smallness == S and rep.ok


def test_smallness_threshold_decides():
    b = CavitatingBoundaryData()
    assert not validate_params(PhysicalParams(), b, eps_cav=0.2).ok
    assert validate_params(PhysicalParams(), b, eps_cav=0.25).ok


@pytest.mark.parametrize("field,value,label", [
    ("R", 0.0, "R > 0"), ("mu", -1.0, "mu > 0"), ("C_V", 0.0, "C_V > 0"),
    ("kappa", -2.0, "kappa > 0"), ("d", 2, "d >= 3"),
])
def test_each_physical_constraint(field, value, label):
    kw = {field: value}
    rep = validate_params(PhysicalParams(**kw), SmoothBoundaryData())
    assert label in rep.failures


def test_alpha_range_and_theta_threshold():
    assert "0 < alpha < 1/2" in validate_params(PhysicalParams(), CavitatingBoundaryData(alpha=0.6)).failures
    rep = validate_params(PhysicalParams(), SmoothBoundaryData(Theta0=0.5))
    assert rep.failures == ["Theta0 < eps_smooth (0.1)"]


def test_undefined_smallness_is_infinite():
    assert smallness_functional(CavitatingBoundaryData(Theta0=0.0)) == math.inf
    rep = validate_params(PhysicalParams(), CavitatingBoundaryData(P_delta=-1.0))
    assert "smallness functional finite" in rep.failures


def test_vacuum_exponent():
    assert vacuum_exponent(1e-3, 3) == pytest.approx(6e-3 / 0.998)


def test_config_constraints():
    b = CavitatingBoundaryData()
    assert validate_config(default_config(CAVITATING), b).ok
    bad = SolveConfig(r_max=0.05, picard_tol=0.0, damping=1.5, r_min=0.2)
    fails = validate_config(bad, b).failures
    assert {"picard_tol > 0", "0 < damping <= 1", "r_max > delta", "0 < r_min < delta"} <= set(fails)
    with pytest.raises(ValueError):
        default_config("other")


pos = st.floats(1e-6, 0.4)


@given(P=pos, dl=pos, T=pos, a=pos, d=st.integers(3, 6), lam=st.floats(-0.5, 2.0))
def test_validate_is_pure(P, dl, T, a, d, lam):
    p = PhysicalParams(lam=lam, d=d)
    b = CavitatingBoundaryData(P, dl, T, a)
    assert validate_params(p, b) == validate_params(p, b)


@settings(max_examples=300)
@given(P=pos, dl=pos, T=pos, a=pos, h=st.floats(1e-4, 0.5), which=st.sampled_from(["P", "dl", "T"]))
def test_smallness_monotone_where_terms_dominate(P, dl, T, a, h, which):
    # each partial derivative is increasing in its own variable, so a positive
    # slope at the left end of the segment holds along the whole segment
    slope = {"P": 1 + T / a - a * a / (P * P * T) - a / P,
             "dl": 1 - 2 * a / dl,
             "T": 1 + P / a - a * a / (P * T * T)}[which]
    assume(slope > 0)
    args = {"P": P, "dl": dl, "T": T}
    S0 = smallness_functional(CavitatingBoundaryData(args["P"], args["dl"], args["T"], a))
    args[which] *= 1 + h
    S1 = smallness_functional(CavitatingBoundaryData(args["P"], args["dl"], args["T"], a))
    assert S1 >= S0 - 1e-12 * abs(S0)
