"""
Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

import math
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest
from conftest import CAV_B, PARAMS, SMOOTH_B, cav_run, smooth_run

from nsexpander import SMOOTH, SmoothBoundaryData, default_config, solve_smooth, vacuum_exponent
from nsexpander.asymptotics import check_leading_order, fit_tail, leading_order_tolerances
from nsexpander.cli import main
from nsexpander.verification import (bootstrap_norm, cavitating_constants, convergence_orders,
                                     ode_residual, smooth_constants)

RESULTS = []


def report(n, ok, text):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {n:2d}: {text}"
    RESULTS.append(line)
    print(line)
    return ok


def criterion_1():
    t0 = time.perf_counter()
    prof, trace = solve_smooth(PARAMS, SmoothBoundaryData(P0=1.0, Theta0=0.0), default_config(SMOOTH))
    dt = time.perf_counter() - t0
    res = ode_residual(prof).sup_total
    trivial = np.all(prof.P == 1.0) and not prof.U.any() and not prof.Theta.any()
    ok = trace.iterations <= 2 and trivial and res < 1e-12 and dt < 1.0
    return report(1, ok, f"trivial fixed point in {trace.iterations} iteration(s), "
                         f"residual {res:.2e} (< 1e-12), {dt:.2f} s (< 1 s)")


def _smooth_pair():
    out = []
    for T in (1e-3, 5e-4):
        t0 = time.perf_counter()
        prof, _ = smooth_run(4000, SmoothBoundaryData(1.0, T))
        out.append((prof, fit_tail(prof), time.perf_counter() - t0))
    return out


def criterion_2():
    (p1, s1, t1), (p2, s2, t2) = _smooth_pair()
    devs = [abs(s.U_inf + 2 * T) / (2 * T) for s, T in ((s1, 1e-3), (s2, 5e-4))]
    ratio = s1.U_inf / s2.U_inf
    ok = max(devs) < 0.05 and abs(ratio - 2) <= 0.05 and max(t1, t2) < 30
    return report(2, ok, f"smooth U_inf deviations {devs[0]:.2e}, {devs[1]:.2e} (< 5%), "
                         f"ratio {ratio:.4f} (2 +- 0.05), slowest solve {max(t1, t2):.2f} s")


def criterion_3():
    (_, s1, _), (_, s2, _) = _smooth_pair()
    devs = [abs(s.Theta_inf - 2 * T) / (2 * T) for s, T in ((s1, 1e-3), (s2, 5e-4))]
    return report(3, max(devs) < 0.05, f"smooth Theta_inf deviations {devs[0]:.2e}, {devs[1]:.2e} (< 5%)")


def criterion_4():
    prof, _ = cav_run()
    r, P = prof.r, prof.P
    b = CAV_B
    sel = (r >= 2 * r[0]) & (r <= b.delta / 4)
    slope = np.polyfit(np.log(r[sel]), np.log(P[sel]), 1)[0]
    beta = vacuum_exponent(b.alpha, PARAMS.d)
    rel = abs(slope - beta) / beta
    inner = r <= b.delta
    x = r[inner] / b.delta
    lo = x ** (4 * PARAMS.d * b.alpha) * b.P_delta
    hi = x ** (PARAMS.d * b.alpha) * b.P_delta
    bracket = bool(np.all((lo <= P[inner] * (1 + 1e-12)) & (P[inner] <= hi * (1 + 1e-12))))
    return report(4, rel <= 0.02 and bracket,
                  f"vacuum slope {slope:.6f} vs {beta:.6f} (rel {rel:.2%}, <= 2%), "
                  f"bracket on [r_min, delta] {'holds' if bracket else 'violated'}")


def criterion_5():
    prof, _ = cav_run()
    rep = check_leading_order(fit_tail(prof), PARAMS, CAV_B)
    tol = leading_order_tolerances(CAV_B)
    dU, dT = rep.deviation["U_inf"], rep.deviation["Theta_inf"]
    ok = dU <= tol["U_inf"] and dT <= tol["Theta_inf"]
    return report(5, ok, f"cavitating U_inf {rep.fitted['U_inf']:.4f} vs {rep.predicted['U_inf']:.4f} "
                         f"(dev {dU:.2%}, tol {tol['U_inf']:.2%}); Theta_inf "
                         f"{rep.fitted['Theta_inf']:.4f} vs {rep.predicted['Theta_inf']:.4f} "
                         f"(dev {dT:.2%}, tol {tol['Theta_inf']:.2%})")


def criterion_6():
    parts, ok = [], True
    for name, run in (("smooth", smooth_run), ("cavitating", cav_run)):
        reps = [ode_residual(run(n)[0]) for n in (1000, 2000, 4000)]
        orders = convergence_orders(reps)
        final = reps[-1].sup_total
        ok &= min(orders) >= 1.9 and final < 1e-4
        parts.append(f"{name} orders {orders[0]:.3f}, {orders[1]:.3f}, final {final:.2e}")
    return report(6, ok, "; ".join(parts) + " (order >= 1.9, final < 1e-4)")


def criterion_7():
    parts, ok = [], True
    for name, run in (("smooth", smooth_run), ("cavitating", cav_run)):
        q = run()[1].ratios
        ok &= all(x < 1 for x in q)
        parts.append(f"{name} max ratio {max(q):.3g}")
    return report(7, ok, "; ".join(parts) + " (< 1)")


def criterion_8():
    zs = bootstrap_norm(smooth_run()[0], smooth_constants(SMOOTH_B.Theta0, A=10))
    zc = bootstrap_norm(cav_run()[0], cavitating_constants(CAV_B.alpha, CAV_B.P_delta, Lam=10))
    ok = zs.max_Z <= 1 and zc.max_Z <= 1
    return report(8, ok, f"max Z smooth {zs.max_Z:.3f} (dominant {zs.argmax_term}), "
                         f"cavitating {zc.max_Z:.3f} (dominant {zc.argmax_term}) (<= 1)")


def criterion_9():
    parts, ok = [], True
    for name, run in (("smooth", smooth_run), ("cavitating", cav_run)):
        p = run()[0]
        tmin = float(p.Theta.min())
        pos = p.r > 0
        margin = float(np.min((0.5 * p.r - p.U)[pos]))
        ok &= tmin > 0 and margin > 0
        parts.append(f"{name} min Theta {tmin:.3e}, min r/2-U {margin:.3e}")
    return report(9, ok, "; ".join(parts) + " (> 0)")


def criterion_10():
    same = True
    with tempfile.TemporaryDirectory() as tmp:
        for case in ("smooth", "cavitating"):
            blobs = []
            for k in range(2):
                d = Path(tmp) / f"{case}{k}"
                d.mkdir()
                rc = main(["solve", "--case", case, "--out", str(d / "p.csv"),
                           "--summary", str(d / "s.json")])
                same &= rc == 0
                blobs.append(((d / "p.csv").read_bytes(), (d / "s.json").read_bytes()))
            same &= blobs[0] == blobs[1]
    return report(10, same, "repeated reference runs give byte-identical CSV and JSON")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 11)])
def test_acceptance(check):
    assert check()


if __name__ == "__main__":
    import sys
    sys.path.insert(0, str(Path(__file__).parent))
    results = [check() for check in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
