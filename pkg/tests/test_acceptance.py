"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line through the ``acceptance`` fixture; the
lines are repeated in the terminal summary.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from symcubic.circle import Angle, Chord, chord_tau, chord_triple, find_crossing, is_under
from symcubic.comajor import classify, enumerate_comajors, is_legal
from symcubic.dynamics import (
    CBRT2,
    PlaneGrid,
    bottcher_psi,
    membership_grid,
    multipliers,
    solve_component,
    trace_param_ray,
    verify_landing,
)
from symcubic.lamination import build_lamination, critical_gap, eta, induce, phi
from symcubic.oracle import naive_is_legal, pairs_up_to

LANDING_PAIRS = [("5/48", "7/48"), ("7/78", "4/39")]


def test_c01_caption_classification(acceptance):
    is_legal(Chord("1/12", "1/6"))  # compiles the integer kernel once
    t0 = time.perf_counter()
    b = classify(Chord("5/48", "7/48"))
    d = classify(Chord("7/78", "4/39"))
    dt = time.perf_counter() - t0
    ok = (
        bool(is_legal(b.comajor)) and bool(is_legal(d.comajor))
        and (b.lam_type, b.major, b.gap_period) == ("B", Chord("7/16", "13/16"), 4)
        and (d.lam_type, d.gap_period) == ("D", 3)
        and dt < 1.0
    )
    acceptance("1 figure captions", ok, f"B major {b.major} period {b.gap_period}; D period {d.gap_period}; {dt:.3f}s")
    assert ok


def _one_preperiodic(n: int) -> set[Fraction]:
    q = 3 * (3 ** n - 1)
    return {Fraction(k, q) for k in range(q) if k % 3}


def test_c02_atlas_counting(acceptance):
    t0 = time.perf_counter()
    bad = []
    for n in range(1, 8):
        atlas = enumerate_comajors(n)
        if len(atlas) != 3 ** n - 1:
            bad.append(f"n={n}: {len(atlas)}")
        used = [x.value for c in atlas.comajors for x in c]
        if any(c.degenerate for c in atlas.comajors) or len(used) != len(set(used)) \
                or set(used) != _one_preperiodic(n):
            bad.append(f"n={n}: angles not covered exactly once")
    dt = time.perf_counter() - t0
    ok = not bad and dt < 120
    acceptance("2 atlas counting", ok, "; ".join(bad) or f"3^n - 1 for n = 1..7 in {dt:.1f}s")
    assert ok


def test_c03_q_lamination(acceptance, atlas7):
    chords = set(atlas7.comajors)
    crossing = find_crossing(chords)
    closed = all(chord_tau(c) in chords for c in chords)
    ok = crossing is None and closed and len(chords) == len(atlas7)
    acceptance("3 q-lamination", ok, f"{len(chords)} comajors, crossing {crossing}, tau-closed {closed}")
    assert ok


@pytest.fixture(scope="module")
def sampled_gaps(atlas7):
    rng = random.Random(20240607)
    recs = rng.sample(atlas7.fatou_records(), 50)
    return [(rec, build_lamination(rec, 8)) for rec in recs]


def _independent_check(lam) -> str | None:
    """Symmetry and invariance from Fraction arithmetic, unlinkedness by a
    second sweep; no shared code with Lamination.check."""
    leaves = lam.leaves
    for c in leaves:
        if chord_tau(c) not in leaves:
            return f"tau image of {c} missing"
        img = chord_triple(c)
        if not img.degenerate and img not in leaves:
            return f"image of {c} missing"
    pair = find_crossing(leaves)
    return None if pair is None else f"{pair} cross"


def test_c04_lamination_invariants(acceptance, sampled_gaps):
    bad = []
    for rec, lam in sampled_gaps:
        try:
            lam.check()
        except Exception as e:  # noqa: BLE001 - any failure is recorded
            bad.append(f"{rec.comajor}: {e}")
            continue
        why = _independent_check(lam)
        if why:
            bad.append(f"{rec.comajor}: {why}")
            continue
        gap = critical_gap(lam)
        limit = 3 * rec.image_period * (lam.depth + 2)
        for e in gap.edges:
            x = e
            for _ in range(limit):
                if x == rec.major:
                    break
                x = chord_triple(x)
            if x != rec.major:
                bad.append(f"{rec.comajor}: edge {e} misses the major")
                break
    acceptance("4 lamination invariants", not bad, "; ".join(bad[:3]) or "50 records at depth 8")
    assert not bad


def test_c05_semiconjugacy(acceptance, sampled_gaps):
    bad, count = [], 0
    for rec, lam in sampled_gaps:
        gap = critical_gap(lam)
        if {phi(gap, x) for x in rec.major} != {Angle(0)}:
            bad.append(f"{rec.comajor}: phi(M) != 0")
        for v in gap.vertices:
            count += 1
            if phi(gap, eta(gap, v)) != Angle(2 * phi(gap, v).value):
                bad.append(f"{rec.comajor}: at {v}")
                break
    acceptance("5 semiconjugacy", not bad, "; ".join(bad[:3]) or f"{count} vertices")
    assert not bad


def test_c06_tuning_order(acceptance):
    bad, lines = [], []
    for pair in (("5/48", "7/48"), ("7/78", "4/39"), ("1/6", "1/3")):
        rec = classify(Chord(*pair))
        gap = critical_gap(build_lamination(rec, 8))
        for q in (("1/3", "2/3"), ("1/7", "2/7"), ("1/15", "2/15")):
            out = induce(gap, Chord(*q))
            if not (is_legal(out) and is_under(out, rec.comajor)):
                bad.append(f"{q} in {pair} gives {out}")
            lines.append(str(out))
    acceptance("6 tuning order", not bad, "; ".join(bad) or f"{len(lines)} induced comajors legal and under")
    assert not bad


def test_c07_main_component(acceptance):
    res = membership_grid(PlaneGrid(0j, 1.2, 241), 1000)
    s = res.grid.samples()
    inner = np.abs(s) <= 0.57
    members_ok = bool(res.members[inner].all())
    worst = max(abs(multipliers(c, 0, 1)[0] + 3 * c * c) for c in s[inner][::37])
    rho, _, _ = multipliers(1j / math.sqrt(3), 0, 1)
    ok = members_ok and worst < 1e-14 and abs(rho - 1) < 1e-12
    acceptance("7 main component", ok,
               f"{int(inner.sum())} samples with |c| <= 0.57 members={members_ok}; "
               f"multiplier error {worst:.1e}; |rho - 1| at i/sqrt3 {abs(rho - 1):.1e}")
    assert ok


def test_c08_psi_asymptotics(acceptance):
    prev, worst_list, ok = None, [], True
    for r in (10.0, 100.0, 1000.0):
        worst = max(abs(bottcher_psi(r * np.exp(2j * math.pi * k / 16)) /
                        (CBRT2 * r * np.exp(2j * math.pi * k / 16)) - 1) for k in range(16))
        ok &= worst <= 0.5 * r ** (-2 / 3) and (prev is None or worst < prev)
        prev = worst
        worst_list.append(f"{worst:.2e}")
    acceptance("8 Psi asymptotics", ok, "max errors " + ", ".join(worst_list))
    assert ok


def _root_multiplier_ok(rec) -> tuple[bool, complex]:
    sol = solve_component(rec)
    if rec.lam_type == "B":
        _, _, m = multipliers(sol.root, sol.root_cycle_point, rec.image_period, "B", half_return=rec.half_return)
    else:
        _, m, _ = multipliers(sol.root, sol.root_cycle_point, rec.image_period)
    return abs(m - 1) <= 1e-8, sol.root


def _landing_check(acceptance, label, **depth):
    bad, notes = [], []
    for pair in LANDING_PAIRS:
        rec = classify(Chord(*pair))
        mult_ok, _ = _root_multiplier_ok(rec)
        rep = verify_landing(rec, tol=1e-3, **depth)
        notes.append(f"{pair[0]},{pair[1]} spread {rep.spread:.1e} root {rep.root_distance:.1e}")
        if not (rep.passed and mult_ok):
            bad.append(pair)
    main = classify(Chord("1/6", "1/3"))
    ends = [trace_param_ray(x, **depth).landed_estimate for x in main.comajor]
    radial = max(abs(abs(z) - math.sqrt(1 / 3)) for z in ends)
    notes.append(f"1/6,1/3 radial {radial:.1e}")
    if radial > 1e-3:
        bad.append(("1/6", "1/3"))
    acceptance(label, not bad, "; ".join(notes))
    return not bad


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="rays into parabolic roots converge like 1/log(1/potential); "
                                       "potential 1e-5 leaves them about 0.04 from the root")
def test_c09_landing_at_stated_potential(acceptance):
    assert _landing_check(acceptance, "9 landing at potential 1e-5", pot_end=1e-5)


@pytest.mark.slow
def test_c09_landing_deep_potential(acceptance):
    assert _landing_check(acceptance, "9 landing at potential exp(-1400) (supplementary)", log_pot_end=1400)


def _near_boundary(m: np.ndarray, width: int) -> np.ndarray:
    edge = np.zeros_like(m)
    edge[:-1] |= m[:-1] != m[1:]
    edge[1:] |= m[:-1] != m[1:]
    edge[:, :-1] |= m[:, :-1] != m[:, 1:]
    edge[:, 1:] |= m[:, :-1] != m[:, 1:]
    out = edge.copy()
    for _ in range(width):
        grown = out.copy()
        grown[1:] |= out[:-1]
        grown[:-1] |= out[1:]
        grown[:, 1:] |= out[:, :-1]
        grown[:, :-1] |= out[:, 1:]
        out = grown
    return out


def test_c10_symmetry(acceptance):
    t0 = time.perf_counter()
    m = membership_grid(PlaneGrid(0j, 4.0, 512), 1000).members
    rotated = np.rot90(m, -1)  # pixel of c -> pixel of i c
    diff = m != rotated
    stray = diff & ~_near_boundary(m, 2)
    dt = time.perf_counter() - t0
    ok = not stray.any()
    acceptance("10 symmetry under c -> ic", ok,
               f"{int(diff.sum())} mismatches, {int(stray.sum())} away from the boundary, {dt:.1f}s")
    assert ok


@pytest.mark.slow
def test_c11_oracle_differential(acceptance):
    bad, n, legal = [], 0, 0
    for a, b in pairs_up_to(200):
        fast = bool(is_legal(Chord(Angle(a), Angle(b))))
        if fast != naive_is_legal(a, b):
            bad.append((a, b))
        n += 1
        legal += fast
    acceptance("11 oracle differential", not bad, f"{n} pairs, {legal} legal, {len(bad)} disagreements")
    assert not bad
