"""Epidemic speed-up with communication radius.

The transmission rate grows linearly in the contact radius R, so doubling R
roughly doubles the early growth rate and pulls the epidemic peak earlier.
This sweep compares agent-based ensembles against the mass-action ODE at
three radii. The population is kept dilute (R well below the mean spacing)
and the per-contact probability low; at high p a new infective sits in a
neighborhood its infector has already swept clean, which drags the observed
growth below the mass-action prediction.
"""

import warnings

from wormsim import Constant, SimConfig, r_sweep

base = SimConfig(n=4000, rho=5e-5, R=10.0, p=0.1, delta=0.05,
                 speed=Constant(2000.0), profile="uniform",
                 dt=0.01, t_end=40.0, seed=0, initial_infected=20)

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    rows = r_sweep(base, [10.0, 20.0, 40.0], runs=3, seed_base=19)

print("  R [m]   beta [/day]   growth [/day]   t_peak sim/ode [d]   linf")
for R, m, diag in rows:
    if m is None:
        print(f"  {R:5.0f}   skipped: {diag}")
        continue
    growth = f"{m.growth_rate_sim:8.2f}" if m.growth_rate_sim else "     n/a"
    print(f"  {R:5.0f}   {m.beta_model:9.2f}   {growth}        "
          f"{m.t_peak_sim:.2f} / {m.t_peak_ode:.2f}      {m.linf_norm:.3f}")
print("\npeak times fall as R grows; growth + delta should scale like R")
