"""
Smooth expanding profile
========================

Solve the smooth case at small temperature and look at the far field.
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from nsexpander import PhysicalParams, SmoothBoundaryData, fit_tail, solve_smooth

params = PhysicalParams(R=1.0, mu=1.0, lam=0.0, C_V=1.0, kappa=1.0, d=3)
data = SmoothBoundaryData(P0=1.0, Theta0=1e-3)

profile, trace = solve_smooth(params, data)
print("iterations:", trace.iterations)
print("contraction ratios:", np.round(trace.ratios, 4))

# The tails settle to U ~ U_inf / r and Theta ~ Theta_inf / r^2.
tail = fit_tail(profile)
print(f"P_inf = {tail.P_inf:.6f}   U_inf = {tail.U_inf:.4e}   Theta_inf = {tail.Theta_inf:.4e}")
print("small-data predictions: U_inf = -2 R Theta0 =", -2 * params.R * data.Theta0,
      "  Theta_inf = 2 (d-2) kappa Theta0 / (C_V P0) =",
      2 * (params.d - 2) * params.kappa * data.Theta0 / (params.C_V * data.P0))

r = profile.r
fig, axes = plt.subplots(1, 3, figsize=(12, 3.5))
axes[0].plot(r, profile.P)
axes[0].set_title("P")
axes[1].plot(r, r * profile.U)
axes[1].axhline(tail.U_inf, ls=":", color="k")
axes[1].set_title("r U")
axes[2].plot(r, r**2 * profile.Theta)
axes[2].axhline(tail.Theta_inf, ls=":", color="k")
axes[2].set_title(r"$r^2 \Theta$")
for ax in axes:
    ax.set_xlabel("r")
fig.tight_layout()
fig.savefig("smooth_profile.png", dpi=120)
