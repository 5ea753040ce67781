"""Tour of the closed-form mobility and transmission rates.

A population of devices at density rho moves in straight lines at speed v;
any pair closer than R is in contact. This script walks through the resulting
contact rate, the two transmission-rate variants, the epidemic threshold,
and the predicted final outbreak size, all for the reference urban scenario
(3000 devices/km^2, 2 km/day, 5 m radius, 10% transmission, 1/day patching).
"""

import math

from wormsim import (
    Constant,
    KineticParams,
    SirParams,
    beta_basic,
    beta_chord,
    contact_rate_pair,
    contact_rate_population,
    critical_density,
    final_size,
    mean_spacing,
    r0,
)

params = KineticParams(rho=3e-3, R=5.0, v_bar=2000.0, p=0.1, delta=1.0)

print("reference scenario: rho = 3000/km^2, v = 2 km/day, R = 5 m, "
      "p = 0.1, delta = 1/day\n")

cr = contact_rate_population(Constant(2000.0), params)
print(f"mean spacing l = {mean_spacing(params.rho):.1f} m "
      f"(R/l = {params.R / mean_spacing(params.rho):.2f})")
print(f"population contact rate = {cr:.2f} contacts/day "
      f"(one every {24 * 60 / cr:.1f} minutes)\n")

print("contact rate of one device vs the common background speed:")
print("  v_i/v     CR [/day]")
for ratio in (0.0, 0.25, 0.5, 1.0, 2.0, 4.0):
    rate = contact_rate_pair(ratio * 2000.0, 2000.0, params)
    print(f"  {ratio:5.2f}  {rate:10.2f}")
print()

bb, bc = beta_basic(params), beta_chord(params)
print(f"beta (uniform per-contact probability) = {bb:.3f} /day")
print(f"beta (chord-weighted probability)      = {bc:.3f} /day "
      f"(ratio {bc / bb:.4f}, pi/4 = {math.pi / 4:.4f})")
print(f"R0 = {r0(bb, params.delta):.2f} (uniform), "
      f"{r0(bc, params.delta):.2f} (chord)\n")

rho_c = critical_density(params.R, params.v_bar, params.p, params.delta)
print(f"critical density = {rho_c * 1e6:.0f} devices/km^2; the scenario sits "
      f"{params.rho / rho_c:.0f}x above threshold")

n = 1e4
for name, beta in (("uniform", bb), ("chord", bc)):
    frac = final_size(SirParams(beta, params.delta, n)) / n
    print(f"predicted final outbreak size ({name}): {100 * frac:.2f}% of devices")
