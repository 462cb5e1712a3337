"""
Vacuum at the origin
====================

With a vacuum at r = 0 the density grows like a small power of r and the
velocity starts out linear, U ~ alpha r.
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from nsexpander import (CavitatingBoundaryData, PhysicalParams, check_leading_order, fit_tail,
                        solve_cavitating, validate_params, vacuum_exponent)

params = PhysicalParams()
data = CavitatingBoundaryData(P_delta=1e-2, delta=0.1, Theta0=1e-2, alpha=1e-3)

report = validate_params(params, data)
print("admissible:", report.ok, " smallness sum:", round(report.smallness, 6))

profile, trace = solve_cavitating(params, data)
r, P = profile.r, profile.P

# slope of log P against log r well inside the anchor radius
near = (r >= 2 * r[0]) & (r <= data.delta / 4)
slope = np.polyfit(np.log(r[near]), np.log(P[near]), 1)[0]
beta = vacuum_exponent(data.alpha, params.d)
print(f"measured exponent {slope:.6f}, power law {beta:.6f}")

cmp = check_leading_order(fit_tail(profile), params, data)
for key in ("U_inf", "Theta_inf"):
    print(f"{key}: fitted {cmp.fitted[key]:.4f}, leading order {cmp.predicted[key]:.4f}, "
          f"deviation {cmp.deviation[key]:.1%}")

# Most of the temperature gap is the kinetic part -U^2/(2 C_V) of the far field.
print("leading order minus U_inf^2/2:", cmp.predicted["Theta_inf"] - cmp.fitted["U_inf"] ** 2 / 2)

fig, (a, b) = plt.subplots(1, 2, figsize=(10, 4))
inner = r <= data.delta
a.loglog(r[inner], P[inner], label="P")
a.loglog(r[inner], data.P_delta * (r[inner] / data.delta) ** beta, "--", label="power law")
a.legend()
a.set_xlabel("r")
b.plot(r, profile.U / r)
b.set_xscale("log")
b.set_xlabel("r")
b.set_ylabel("U / r")
fig.tight_layout()
fig.savefig("cavitating_vacuum.png", dpi=120)
