"""
Pulling back a lamination
=========================

Start from the majors of a comajor, take preimages under tripling a few
times, and read off the critical gap U: its edges, the first return map
on its boundary and the collapse of that boundary onto the doubling circle.
"""

from symcubic import Chord, build_lamination, classify, critical_gap, eta, induce, phi
from symcubic.lamination import main_gap_edge, quadratic_major_of

rec = classify(Chord("5/48", "7/48"))
for depth in range(0, 7, 2):
    print("depth", depth, "leaves", len(build_lamination(rec, depth)))

lam = build_lamination(rec, 8)
lam.check()  # raises if the leaves cross, or miss half-turn or forward images
gap = critical_gap(lam)
print(gap.kind, "gap, period", gap.period, "with", len(gap.edges), "edges")
print("first edges:", [str(e) for e in gap.edges[:4]])

# eta is the first return to the boundary; phi conjugates it to doubling
for v in gap.vertices[:6]:
    print(v, "->", eta(gap, v), "   phi:", phi(gap, v), "->", phi(gap, eta(gap, v)))

# tuning: a quadratic major inside U gives a comajor under {5/48, 7/48}
for q in [("1/3", "2/3"), ("1/7", "2/7"), ("1/15", "2/15")]:
    quad = Chord(*q)
    print(quad, "major", quadratic_major_of(quad), "->", induce(gap, quad))

# comajors on the edge of the main gap, one pair per rotation number
for r in ["1/2", "1/3", "1/4"]:
    print(r, [str(x.comajor) for x in main_gap_edge(r)])
