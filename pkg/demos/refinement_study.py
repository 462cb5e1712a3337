"""
Grid refinement
===============

Plug converged profiles back into the radial ODEs and watch the residual
fall as the mesh is refined.
"""

from nsexpander import (CAVITATING, SMOOTH, CavitatingBoundaryData, PhysicalParams,
                        SmoothBoundaryData, default_config, ode_residual, solve)
from nsexpander.verification import convergence_orders

params = PhysicalParams()
cases = {SMOOTH: SmoothBoundaryData(1.0, 1e-3), CAVITATING: CavitatingBoundaryData()}

for case, data in cases.items():
    reports = []
    for n in (1000, 2000, 4000, 8000):
        profile, _ = solve(params, data, default_config(case, n_cells=n))
        rep = ode_residual(profile)
        reports.append(rep)
        sup = rep.sup()
        print(f"{case:10s} N={n:5d}  mass {sup['mass']:.2e}  momentum {sup['momentum']:.2e}"
              f"  energy {sup['energy']:.2e}")
    print("observed orders:", [round(q, 3) for q in convergence_orders(reports)])
