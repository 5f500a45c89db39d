"""Quick invariant suites behind ``symcubic selftest``.

Each check raises AssertionError with a diagnostic on the first violation.
The whole run takes well under a minute; the exhaustive versions live in the
test suite.
"""

from __future__ import annotations

import math
import time
from typing import Callable, TextIO

import numpy as np

from .circle import Angle, Chord, chord_tau, chord_triple, crosses, find_crossing, is_under, tau, triple
from .comajor import Atlas, classify, enumerate_comajors, is_legal
from .dynamics import (
    CBRT2,
    PlaneGrid,
    bottcher_psi,
    green,
    membership_grid,
    multipliers,
    solve_component,
    trace_param_ray,
)
from .lamination import build_lamination, critical_gap, eta, induce, phi
from .oracle import naive_is_legal, pairs_up_to
from .render import RenderSpec, geodesic_arc, render_lamination


def check_circle():
    for q in (7, 12, 48, 78):
        for i in range(q):
            x = Angle(i, q)
            assert triple(tau(x)) == tau(triple(x)), f"tripling does not commute with tau at {x}"
    assert crosses(Chord("0", "1/2"), Chord("1/4", "3/4"))
    assert not crosses(Chord("0", "1/2"), Chord("1/2", "3/4")), "shared endpoints are not crossings"


def check_legality_oracle(max_denominator: int = 36):
    n = 0
    for a, b in pairs_up_to(max_denominator):
        fast = bool(is_legal(Chord(Angle(a), Angle(b))))
        assert fast == naive_is_legal(a, b), f"checkers disagree on {{{a}, {b}}}"
        n += 1
    return f"{n} pairs"


def check_atlas(max_period: int = 4):
    for n in range(1, max_period + 1):
        atlas = enumerate_comajors(n)
        assert len(atlas) == 3 ** n - 1, f"period {n}: {len(atlas)} comajors, expected {3 ** n - 1}"
        chords = set(atlas.comajors)
        assert all(chord_tau(c) in chords for c in chords), f"period {n}: atlas not tau-closed"
        assert find_crossing(chords) is None, f"period {n}: comajors cross"
        assert Atlas.from_json(atlas.to_json()) == atlas, f"period {n}: JSON round trip changed the atlas"


def check_classification():
    rec = classify(Chord("5/48", "7/48"))
    assert (rec.lam_type, rec.gap_period, rec.major) == ("B", 4, Chord("7/16", "13/16")), rec
    rec = classify(Chord("7/78", "4/39"))
    assert (rec.lam_type, rec.gap_period) == ("D", 3), rec


def check_lamination(depth: int = 6):
    for pair in (("5/48", "7/48"), ("7/78", "4/39"), ("1/6", "1/3")):
        rec = classify(Chord(*pair))
        lam = build_lamination(rec, depth)
        lam.check()
        gap = critical_gap(lam)
        for e in gap.edges:
            x = e
            for _ in range(3 * rec.image_period * (depth + 2)):
                if x == rec.major:
                    break
                x = chord_triple(x)
            assert x == rec.major, f"edge {e} of {pair} never reaches the major"
        assert phi(gap, rec.major.a) == Angle(0) or phi(gap, rec.major.b) == Angle(0)
        for v in gap.vertices:
            assert phi(gap, eta(gap, v)) == Angle(2 * phi(gap, v).value), f"semiconjugacy fails at {v}"


def check_induce():
    rec = classify(Chord("5/48", "7/48"))
    gap = critical_gap(build_lamination(rec, 8))
    for q in (("1/3", "2/3"), ("1/7", "2/7"), ("1/15", "2/15")):
        out = induce(gap, Chord(*q))
        assert is_legal(out), f"induced {out} is illegal"
        assert is_under(out, rec.comajor), f"induced {out} is not under {rec.comajor}"


def check_psi():
    prev = None
    for r in (10.0, 100.0):
        worst = max(abs(bottcher_psi(r * np.exp(2j * math.pi * k / 16)) /
                        (CBRT2 * r * np.exp(2j * math.pi * k / 16)) - 1) for k in range(16))
        assert worst <= 0.5 * r ** (-2 / 3), f"|Psi/(cbrt2 c) - 1| = {worst:.2e} at |c| = {r}"
        assert prev is None or worst < prev
        prev = worst
    c, z = 0.9 + 0.9j, 0.3
    assert abs(green(c, z ** 3 - 3 * c * c * z) - 3 * green(c, z)) < 1e-9 * green(c, z)


def check_plane():
    res = membership_grid(PlaneGrid(0j, 4.0, 128), 300, threads=1)
    m = res.members
    assert (m == np.rot90(m, -1)).all(), "membership grid not invariant under c -> ic"
    rho, _, _ = multipliers(1j / math.sqrt(3), 0, 1)
    assert abs(rho - 1) < 1e-12
    rec = classify(Chord("5/48", "7/48"))
    sol = solve_component(rec, 0.4328303004129512 + 0.4328303004129512j)
    r, rr, half = multipliers(sol.root, sol.root_cycle_point, rec.image_period, "B", half_return=rec.half_return)
    assert abs(half - 1) < 1e-8 and abs(rr - half ** 2) < 1e-8, f"root multipliers {half}, {rr}"
    tr = trace_param_ray("0", 1e-3)
    assert all(abs(z.imag) < 1e-12 for z in tr.points), "ray 0 left the real axis"


def check_render():
    atlas = enumerate_comajors(2)
    a, b = render_lamination(atlas), render_lamination(atlas)
    assert a == b, "SVG output is not deterministic"
    for c in atlas.comajors:
        arc = geodesic_arc(c)
        assert abs(abs(arc.center) ** 2 - 1 - arc.radius ** 2) < 1e-9, f"arc of {c} not orthogonal"
    assert render_lamination([], RenderSpec()).count("<path") == 0


CHECKS: list[tuple[str, Callable]] = [
    ("circle arithmetic", check_circle),
    ("legality vs naive oracle", check_legality_oracle),
    ("atlas counting and non-crossing", check_atlas),
    ("figure classification", check_classification),
    ("lamination invariants and semiconjugacy", check_lamination),
    ("tuning by induce", check_induce),
    ("Psi asymptotics and green", check_psi),
    ("plane symmetry, multipliers, roots", check_plane),
    ("render determinism and geometry", check_render),
]


def run_all(stop_on_failure: bool = True, out: TextIO | None = None) -> list[tuple[str, bool, str]]:
    results = []
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            detail = fn() or ""
            ok = True
        except AssertionError as e:
            ok, detail = False, str(e) or "assertion failed"
        dt = time.perf_counter() - t0
        results.append((name, ok, detail))
        if out is not None:
            extra = f" ({detail})" if detail else ""
            print(f"{'PASS' if ok else 'FAIL'}  {name}{extra}  [{dt:.1f}s]", file=out)
        if not ok and stop_on_failure:
            break
    return results


__all__ = ["run_all", "CHECKS"]
