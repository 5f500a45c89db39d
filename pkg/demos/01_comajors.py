"""
Comajors of symmetric cubics
============================

A comajor is a short chord {a, b} of the circle (arc length at most 1/6)
whose forward orbit under tripling, together with the half-turn images,
stays unlinked and out of the strips between its two majors.
"""

from symcubic import Chord, classify, enumerate_comajors, is_legal

# two chords from the tripling picture; the second one is not a comajor
for a, b in [("5/48", "7/48"), ("1/48", "2/48")]:
    report = is_legal(Chord(a, b))
    print(f"{{{a}, {b}}}:", "legal" if report else f"illegal ({report.reason}; witness {report.witness})")

# a legal chord carries its majors, its period and its type
rec = classify(Chord("5/48", "7/48"))
print(rec.lam_type, rec.major, rec.sibling_major, "gap period", rec.gap_period)

rec = classify(Chord("7/78", "4/39"))
print(rec.lam_type, rec.major, "gap period", rec.gap_period)

# counting: image period dividing n gives 3^n - 1 comajors
for n in range(1, 6):
    atlas = enumerate_comajors(n)
    print(n, len(atlas), 3 ** n - 1, "Fatou:", len(atlas.fatou_records()))

# with preperiod 2 the strictly preperiodic (Misiurewicz) classes show up
atlas = enumerate_comajors(2, 2)
for cls in atlas.misiurewicz_classes:
    print(sorted(str(x) for x in cls))
