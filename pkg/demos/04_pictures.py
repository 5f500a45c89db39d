"""
Pictures
========

A disk diagram of the period-3 comajors, a pulled-back lamination, and
escape-time pictures of the parameter plane and of one Julia set with a
few rays drawn in.  Files land in ./demo_out/.
"""

from pathlib import Path

from symcubic import Chord, build_lamination, classify, enumerate_comajors
from symcubic.dynamics import PlaneGrid, julia_grid, membership_grid, solve_component, trace_dyn_ray, trace_param_ray
from symcubic.render import RenderSpec, render_lamination, render_plane

out = Path("demo_out")
out.mkdir(exist_ok=True)

(out / "comajors3.svg").write_text(render_lamination(enumerate_comajors(3, period_mode="upto")))
lam = build_lamination(classify(Chord("7/78", "4/39")), 4)
(out / "lamination_d.svg").write_text(render_lamination(lam))

grid = PlaneGrid(0j, 2.6, 600)
members = membership_grid(grid, 500)
rays = [trace_param_ray(x, 1e-4) for x in ("5/48", "7/48", "1/6", "1/3", "0")]
rec = classify(Chord("5/48", "7/48"))
sol = solve_component(rec)
spec = RenderSpec.for_grid(members, rays=rays, marks=[sol.center, sol.root])
(out / "parameter_plane.png").write_bytes(render_plane(members, spec))
print("parameter plane:", int(members.members.sum()), "member pixels")

c = sol.center
jgrid = PlaneGrid(0j, 3.2, 500)
julia = julia_grid(c, jgrid, 500)
jrays = [trace_dyn_ray(c, x, 1e-6) for x in ("5/16", "7/16", "13/16", "15/16")]
(out / "julia_b_center.png").write_bytes(render_plane(julia, RenderSpec.for_grid(julia, rays=jrays)))
print("wrote", sorted(p.name for p in out.iterdir()))
