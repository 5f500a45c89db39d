"""
Parameter rays, centers and roots
=================================

Rays are traced down the potential by Newton continuation on the Boettcher
coordinate of the cocritical point.  The two rays of a comajor should meet
at the root of a hyperbolic component, where the (half-)multiplier is 1.
Rays into parabolic roots converge slowly (roughly like 1/log(1/potential)),
so the deep traces below go to potential exp(-1400).
"""

import math

from symcubic import Chord, classify
from symcubic.dynamics import multipliers, solve_component, trace_param_ray, verify_landing

rec = classify(Chord("5/48", "7/48"))
sol = solve_component(rec)
print("center", sol.center, " root", sol.root)
_, _, half = multipliers(sol.root, sol.root_cycle_point, 4, "B", half_return=rec.half_return)
print("half multiplier at the root", half)

for pot in (1e-3, 1e-5):
    ends = [trace_param_ray(x, pot).landed_estimate for x in rec.comajor]
    print(f"potential {pot:g}: distance to root", [f"{abs(z - sol.root):.2e}" for z in ends])

deep = verify_landing(rec, log_pot_end=1400)
print("potential exp(-1400): spread", f"{deep.spread:.1e}", "root distance", f"{deep.root_distance:.1e}",
      "PASS" if deep.passed else "FAIL")

# the rays 1/6 and 1/3 land on the circle |c| = sqrt(1/3) bounding the main disk
z = trace_param_ray("1/6", log_pot_end=1400).landed_estimate
print("ray 1/6:", z, " |c| - sqrt(1/3) =", abs(z) - math.sqrt(1 / 3))

# a Misiurewicz class lands quickly: no parabolic cusp to crawl into
rep = verify_landing(["1/36", "35/36"])
print("class of 1/36:", rep.endpoints, "spread", f"{rep.spread:.1e}")
