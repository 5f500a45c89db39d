"""Pullback laminations, critical gaps and the first (half-)return map.

Notation used throughout: the comajor has short arc (a, b) of length L, the
majors are M = {a+1/3, b+2/3} and M' = {a+2/3, b+1/3}, and the critical
gap U is bounded by M, M' and the two closed arcs A1 = [a+1/3, b+1/3],
A2 = [a+2/3, b+2/3].  The return map eta sends A1 and A2 each onto the
whole of the gap boundary, which is what makes the itinerary coding work.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, lcm
from pathlib import Path

import numpy as np

from .circle import (
    HALF,
    THIRD,
    Angle,
    AngleLike,
    Chord,
    as_angle,
    chord_length,
    chord_tau,
    double,
    in_closed_arc,
    orbit_info,
    tau,
    triple,
)
from .comajor import ComajorRecord, classify, is_legal, leaf_orbit, majors_of

MAX_CANDIDATES = 1_000_000


class LaminationError(RuntimeError):
    """The pullback produced an inconsistent leaf set."""


class InsufficientDepth(RuntimeError):
    """A query cannot be resolved with the data available."""


class NotOnBoundary(ValueError):
    pass


# --- pullback ----------------------------------------------------------------


@dataclass
class Lamination:
    leaves: frozenset
    depth: int
    comajor_record: ComajorRecord
    critical_quads: tuple[tuple[Angle, ...], tuple[Angle, ...]]

    def __len__(self):
        return len(self.leaves)

    def __contains__(self, leaf: Chord):
        return leaf in self.leaves

    def sorted_leaves(self) -> list[Chord]:
        return sorted(self.leaves)

    def check(self) -> None:
        """Raise LaminationError unless leaves are unlinked, symmetric and forward invariant."""
        D = lcm(6, *(x.denominator for c in self.leaves for x in c))
        rows = sorted((x.numerator * (D // x.denominator), y.numerator * (D // y.denominator)) for x, y in self.leaves)
        P = np.array(rows, dtype=object if D > 2 ** 60 else np.int64).reshape(-1, 2)
        pair = _find_crossing_int(P)
        if pair is not None:
            raise LaminationError(f"leaves {self._chord(rows[pair[0]], D)} and {self._chord(rows[pair[1]], D)} cross")
        known = set(rows)
        h = D // 2
        for x, y in rows:
            t = tuple(sorted(((x + h) % D, (y + h) % D)))
            if t not in known:
                raise LaminationError(f"tau image of {self._chord((x, y), D)} missing")
            i = tuple(sorted((3 * x % D, 3 * y % D)))
            if i[0] != i[1] and i not in known:
                raise LaminationError(f"image of {self._chord((x, y), D)} missing")

    @staticmethod
    def _chord(row, D):
        return Chord(Angle(row[0], D), Angle(row[1], D))

    def to_json(self) -> dict:
        rec = self.comajor_record
        return {
            "comajor": rec.comajor.to_json(),
            "type": rec.lam_type,
            "major": rec.major.to_json(),
            "period": rec.image_period,
            "depth": self.depth,
            "leaves": [c.to_json() for c in self.sorted_leaves()],
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1))

    @classmethod
    def from_json(cls, data: dict) -> "Lamination":
        rec = classify(Chord.from_json(data["comajor"]))
        leaves = frozenset(Chord.from_json(p) for p in data["leaves"])
        return cls(leaves, data["depth"], rec, _quads(rec))


def _quads(rec: ComajorRecord):
    a, b = rec.comajor.short_arc()
    q = (a + THIRD, b + THIRD, a + 2 * THIRD, b + 2 * THIRD)
    return q, tuple(tau(x) for x in q)


class _Regions:
    """The seven complementary regions of the two critical quadrilaterals,
    encoded as arcs measured from a+1/6 in units of 1/D."""

    def __init__(self, a: int, L: int, D: int):
        s = D // 6
        self.origin = (a + s) % D
        self.D = D
        self.bounds = np.array([0, L, s, s + L, 3 * s, 3 * s + L, 4 * s, 4 * s + L, D], dtype=np.int64)
        # arc k -> region id; the central region owns two arcs
        self.region = [0, 1, 2, 3, 4, 1, 5, 6]
        self.short = [
            ((a + 2 * s) % D, (a + 2 * s + L) % D),
            ((a + 4 * s) % D, (a + 4 * s + L) % D),
            ((a + 5 * s) % D, (a + 5 * s + L) % D),
            ((a + s) % D, (a + s + L) % D),
        ]

    def masks(self, x: np.ndarray) -> np.ndarray:
        u = (x - self.origin) % self.D
        m = np.zeros(u.shape, dtype=np.int64)
        for k in range(8):
            inside = (u >= self.bounds[k]) & (u <= self.bounds[k + 1])
            m |= np.where(inside, 1 << self.region[k], 0)
        m |= np.where(u == 0, 1 << self.region[7], 0)
        return m

    def excluded(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.zeros(x.shape, dtype=bool)
        for p, q in self.short:
            out |= ((x == p) & (y == q)) | ((x == q) & (y == p))
        return out


def _pairs_to_chords(P: np.ndarray, D: int) -> list[Chord]:
    return [Chord(Angle(int(x), D), Angle(int(y), D)) for x, y in P]


def _unique_rows(P: np.ndarray) -> np.ndarray:
    if len(P) == 0:
        return P.reshape(0, 2)
    lo = np.minimum(P[:, 0], P[:, 1])
    hi = np.maximum(P[:, 0], P[:, 1])
    return np.unique(np.stack([lo, hi], axis=1), axis=0)


def build_lamination(record: ComajorRecord, depth: int) -> Lamination:
    """Pull back the seed leaves (orbits of the four majors) ``depth`` times."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if not is_legal(record.comajor):
        raise ValueError(f"{record.comajor} is not legal")
    a, b = record.comajor.short_arc()
    seeds = set()
    for ch in (record.major, record.sibling_major, chord_tau(record.major), chord_tau(record.sibling_major)):
        seeds.update(x for x in leaf_orbit(ch) if not x.degenerate)
    D0 = lcm(6, *(x.denominator for ch in seeds for x in ch))
    D = D0 * 3 ** depth
    if D * 3 > 2 ** 62:
        raise ValueError("denominator too large for the integer pullback")
    as_int = lambda x: x.numerator * (D // x.denominator)
    P = _unique_rows(np.array([[as_int(c.a), as_int(c.b)] for c in seeds], dtype=np.int64))
    regions = _Regions(as_int(a), as_int(b) - as_int(a) if b.value >= a.value else as_int(b) + D - as_int(a), D)
    known = {(int(x), int(y)) for x, y in P}
    frontier = P
    for _ in range(depth):
        if len(frontier) == 0:
            break
        cand = []
        for i in range(3):
            xi = (frontier[:, 0] + i * D) // 3
            for j in range(3):
                yj = (frontier[:, 1] + j * D) // 3
                cand.append(np.stack([xi, yj], axis=1))
        C = np.concatenate(cand)
        ok = (regions.masks(C[:, 0]) & regions.masks(C[:, 1])) != 0
        ok &= C[:, 0] != C[:, 1]
        ok &= ~regions.excluded(C[:, 0], C[:, 1])
        C = _unique_rows(C[ok])
        fresh = [(int(x), int(y)) for x, y in C if (int(x), int(y)) not in known]
        known.update(fresh)
        frontier = np.array(fresh, dtype=np.int64).reshape(-1, 2)
    all_pairs = np.array(sorted(known), dtype=np.int64)
    crossing = _find_crossing_int(all_pairs)
    if crossing is not None:
        c1, c2 = _pairs_to_chords(all_pairs[list(crossing)], D)
        raise LaminationError(f"pullback produced crossing leaves {c1} and {c2}")
    leaves = frozenset(_pairs_to_chords(all_pairs, D))
    return Lamination(leaves, depth, record, _quads(record))


def _find_crossing_int(P: np.ndarray):
    """Integer version of circle.find_crossing for sorted (lo, hi) rows."""
    if len(P) < 2:
        return None
    n = len(P)
    length = P[:, 1] - P[:, 0]
    pos = np.concatenate([P[:, 0], P[:, 1]])
    kind = np.concatenate([np.ones(n, np.int64), np.zeros(n, np.int64)])
    key = np.concatenate([-length, length])
    idx = np.concatenate([np.arange(n), np.arange(n)])
    order = np.lexsort((key, kind, pos))
    stack = []
    for e in order.tolist():
        i = int(idx[e])
        if kind[e]:
            stack.append(i)
        else:
            top = stack.pop()
            if top != i:
                return (top, i)
    return None


# --- critical gap ------------------------------------------------------------


@dataclass
class GapBoundary:
    """Boundary of the marked critical gap U, as far as it is resolved.

    ``edges`` lists M first and then proceeds in positive order through A1,
    M' and A2.  Leaves that are maximal under A1 or A2 at the computed depth
    but are not yet edges of U are kept in ``unresolved``.
    """

    edges: list[Chord]
    vertices: list[Angle]
    period: int
    kind: str
    record: ComajorRecord
    unresolved: list[Chord] = field(default_factory=list)

    @property
    def arcs(self) -> tuple[tuple[Angle, Angle], tuple[Angle, Angle]]:
        return _gap_arcs(self.record)

    def half_of(self, x: Angle) -> int:
        (s1, e1), (s2, e2) = self.arcs
        if in_closed_arc(x, s1, e1):
            return 0
        if in_closed_arc(x, s2, e2):
            return 1
        raise NotOnBoundary(f"{x} is not in the arcs of the critical gap")

    def contains(self, x: AngleLike) -> bool:
        return on_gap_boundary(self.record, as_angle(x))


def _gap_arcs(rec: ComajorRecord):
    a, b = rec.comajor.short_arc()
    return (a + THIRD, b + THIRD), (a + 2 * THIRD, b + 2 * THIRD)


def _in_gap_arcs(rec: ComajorRecord, x: Angle) -> bool:
    (s1, e1), (s2, e2) = _gap_arcs(rec)
    return in_closed_arc(x, s1, e1) or in_closed_arc(x, s2, e2)


def _eta_angle(rec: ComajorRecord, x: Angle) -> Angle:
    if rec.lam_type == "B":
        for _ in range(rec.half_return):
            x = triple(x)
        return tau(x)
    if rec.lam_type == "D":
        for _ in range(rec.image_period):
            x = triple(x)
        return x
    raise ValueError("Misiurewicz records have no critical Fatou gap")


def on_gap_boundary(rec: ComajorRecord, x: Angle) -> bool:
    """x lies on the boundary of U iff its whole eta-orbit stays in A1 u A2."""
    seen = set()
    while x not in seen:
        if not _in_gap_arcs(rec, x):
            return False
        seen.add(x)
        x = _eta_angle(rec, x)
    return True


def critical_gap(lam: Lamination) -> GapBoundary:
    rec = lam.comajor_record
    if rec.lam_type == "Misiurewicz":
        raise ValueError("Misiurewicz laminations have no critical Fatou gap")
    M, M2 = rec.major, rec.sibling_major
    chains = []
    for s, e in _gap_arcs(rec):
        inside = [
            c for c in lam.leaves
            if c not in (M, M2) and in_closed_arc(c.a, s, e) and in_closed_arc(c.b, s, e)
        ]
        # orient each leaf along the arc, then keep the maximal ones
        spans = []
        for c in inside:
            p, q = (c.a, c.b) if (c.a.value - s.value) % 1 <= (c.b.value - s.value) % 1 else (c.b, c.a)
            spans.append(((p.value - s.value) % 1, (q.value - s.value) % 1, c))
        spans.sort(key=lambda t: (t[0], -t[1]))
        chain, reach = [], Fraction(-1)
        for lo, hi, c in spans:
            if hi > reach:
                chain.append(c)
                reach = hi
        chains.append(chain)
    edges = [M]
    unresolved = []
    for k, chain in enumerate(chains):
        for c in chain:
            if on_gap_boundary(rec, c.a) and on_gap_boundary(rec, c.b):
                edges.append(c)
            else:
                unresolved.append(c)
        if k == 0:
            edges.append(M2)
    vertices = []
    for c in edges:
        for x in _oriented(c, rec):
            if not vertices or vertices[-1] != x:
                vertices.append(x)
    if len(vertices) > 1 and vertices[0] == vertices[-1]:
        vertices.pop()
    period = rec.image_period
    return GapBoundary(edges, vertices, period, rec.lam_type, rec, unresolved)


def _oriented(c: Chord, rec: ComajorRecord) -> tuple[Angle, Angle]:
    """Endpoints of a gap edge in the positive boundary order starting at a+1/3."""
    start = rec.comajor.short_arc()[0] + THIRD
    d = lambda x: (x.value - start.value) % 1
    if c == rec.major:
        return (c.b if d(c.b) > d(c.a) else c.a), start
    return tuple(sorted(c.endpoints, key=d))


def eta(gap: GapBoundary, x):
    """First (half-)return map of the critical gap, on vertices or edges."""
    rec = gap.record
    if isinstance(x, Chord):
        if not (on_gap_boundary(rec, x.a) and on_gap_boundary(rec, x.b)):
            raise NotOnBoundary(f"{x} is not an edge of the critical gap")
        return Chord(_eta_angle(rec, x.a), _eta_angle(rec, x.b))
    x = as_angle(x)
    if not on_gap_boundary(rec, x):
        raise NotOnBoundary(f"{x} is not on the critical gap boundary")
    return _eta_angle(rec, x)


# --- semiconjugacy to doubling ------------------------------------------------


def itinerary(gap: GapBoundary, v: AngleLike) -> tuple[list[int], list[int]]:
    """Preperiodic and periodic bits of v: bit k is 0 when eta^k(v) is in A1."""
    v = as_angle(v)
    if not on_gap_boundary(gap.record, v):
        raise InsufficientDepth(f"{v} is not a resolved vertex of the critical gap")
    seq, index = [], {}
    while v not in index:
        index[v] = len(seq)
        seq.append(gap.half_of(v))
        v = _eta_angle(gap.record, v)
    r = index[v]
    return seq[:r], seq[r:]


def _bits_value(pre: list[int], cyc: list[int]) -> Fraction:
    val = Fraction(0)
    for k, bit in enumerate(pre):
        val += Fraction(bit, 2 ** (k + 1))
    p = len(cyc)
    word = int("".join(map(str, cyc)), 2)
    val += Fraction(word, (2 ** p - 1) * 2 ** len(pre))
    return val


def phi(gap: GapBoundary, v: AngleLike) -> Angle:
    """Collapse of the gap boundary onto the circle conjugating eta to doubling."""
    pre, cyc = itinerary(gap, v)
    return Angle(_bits_value(pre, cyc))


def _binary_expansion(s: Angle) -> tuple[list[int], list[int]]:
    info = orbit_info(s, degree=2)
    bits = [int(2 * x.value >= 1) for x in info.orbit]
    return bits[: info.preperiod], bits[info.preperiod:]


def _inverse_branch(rec: ComajorRecord, z: Angle, bit: int) -> Angle:
    """The unique boundary point in A1 (bit 0) or A2 (bit 1) that eta sends to z."""
    arc = _gap_arcs(rec)[bit]
    if rec.lam_type == "B":
        k, shift = rec.half_return, HALF
    else:
        k, shift = rec.image_period, Fraction(0)
    base = z.value - shift
    K = 3 ** k
    found = []
    lo, hi = arc[0].value, arc[0].value + (arc[1].value - arc[0].value) % 1
    # y = (base + j)/K inside [lo, hi] (lifted)
    for j in range(ceil(lo * K - base), floor(hi * K - base) + 1):
        y = Angle((base + j) / K)
        if on_gap_boundary(rec, y):
            found.append(y)
    if len(found) != 1:
        raise InsufficientDepth(f"inverse branch {bit} at {z}: {len(found)} candidates")
    return found[0]


def _periodic_point(rec: ComajorRecord, word: list[int]) -> Angle:
    """The boundary point of U whose eta-itinerary is the repeated ``word``."""
    (s1, e1), (s2, e2) = _gap_arcs(rec)
    M = rec.major
    left = s1  # a+1/3, fixed by eta
    right = M.a if M.b == left else M.b  # b+2/3, fixed by eta
    lo_pt, hi_pt = left, right
    for bit in reversed(word):
        lo_pt = _inverse_branch(rec, lo_pt, bit)
        hi_pt = _inverse_branch(rec, hi_pt, bit)
    p = len(word)
    if rec.lam_type == "B":
        K = 3 ** (rec.half_return * p) - 1
        offset = Fraction(p, 2)
    else:
        K = 3 ** (rec.image_period * p) - 1
        offset = Fraction(0)
    lo = lo_pt.value
    hi = lo + (hi_pt.value - lo) % 1
    # (3^{..} - 1) y = j - offset  (mod 1)
    j0, j1 = ceil(lo * K + offset), floor(hi * K + offset)
    if j1 - j0 + 1 > MAX_CANDIDATES:
        raise InsufficientDepth(f"{j1 - j0 + 1} candidates for itinerary {word}")
    for j in range(j0, j1 + 1):
        y = Angle((j - offset) / K)
        if not on_gap_boundary(rec, y):
            continue
        pre, cyc = _itinerary_raw(rec, y)
        if not pre and _same_cycle(cyc, word):
            return y
    raise InsufficientDepth(f"no boundary point with itinerary {word}")


def _itinerary_raw(rec, v):
    (s1, e1), _ = _gap_arcs(rec)
    seq, index = [], {}
    while v not in index:
        index[v] = len(seq)
        seq.append(0 if in_closed_arc(v, s1, e1) else 1)
        v = _eta_angle(rec, v)
    r = index[v]
    return seq[:r], seq[r:]


def _same_cycle(cyc: list[int], word: list[int]) -> bool:
    """Whether repeating ``cyc`` and repeating ``word`` give the same sequence."""
    n = lcm(len(cyc), len(word))
    return cyc * (n // len(cyc)) == word * (n // len(word))


def phi_preimage(gap: GapBoundary, s: AngleLike) -> Angle:
    """The boundary point of U mapped to s by phi (s must avoid the orbit of 0)."""
    s = as_angle(s)
    info = orbit_info(s, degree=2)
    if Angle(0) in info.orbit:
        raise ValueError(f"{s} eventually doubles to 0; its fiber is an edge, not a point")
    pre, cyc = _binary_expansion(s)
    x = _periodic_point(gap.record, cyc)
    for bit in reversed(pre):
        x = _inverse_branch(gap.record, x, bit)
    return x


def quadratic_major_of(leaf: Chord) -> Chord:
    """The major (length >= 1/3) of a quadratic leaf.

    Leaves of length at least 1/3 are returned unchanged.  A shorter leaf is
    read as a minor and replaced by its doubling preimage whose endpoints
    lie in the forward orbit of the minor's endpoints.
    """
    if chord_length(leaf) >= THIRD:
        return leaf
    x, y = leaf.a.value, leaf.b.value
    orbit = set(orbit_info(leaf.a, 2).orbit) | set(orbit_info(leaf.b, 2).orbit)
    for c in (Chord(Angle(x / 2), Angle((y + 1) / 2)), Chord(Angle((x + 1) / 2), Angle(y / 2))):
        if c.a in orbit and c.b in orbit:
            return c
    raise ValueError(f"{leaf} is not the minor of a periodic quadratic major")


def induce(gap: GapBoundary, leaf: Chord) -> Chord:
    """Lift a quadratic major into U and return its sibling under the comajor.

    A leaf shorter than 1/3 is taken to be a quadratic minor and its major
    is lifted instead (see ``quadratic_major_of``).
    """
    if leaf.degenerate:
        raise ValueError("cannot induce from a degenerate chord")
    leaf = quadratic_major_of(leaf)
    ends = []
    for s in leaf:
        x = phi_preimage(gap, s)
        ends.append(x - (THIRD if gap.half_of(x) == 0 else 2 * THIRD))
    return Chord(*ends)


# --- rotational data ----------------------------------------------------------


def _rotation_cycles(degree: int, p: int, q: int) -> list[list[Fraction]]:
    """All period-q cycles of x -> degree*x mod 1 that rotate by p/q."""
    K = degree ** q - 1
    seen, out = set(), []
    for j in range(K):
        x = Fraction(j, K)
        if x in seen:
            continue
        cyc = [x]
        y = (degree * x) % 1
        while y != x:
            cyc.append(y)
            y = (degree * y) % 1
        seen.update(cyc)
        if len(cyc) != q:
            continue
        srt = sorted(cyc)
        if _rotates_by(srt, p, q, degree):
            out.append(srt)
    return out


def quadratic_rotation_major(rotation: Fraction | str) -> Chord:
    """Leaf naming the quadratic rotational major with rotation number p/q.

    The leaf is given by its image (the minor): it joins the two points of
    the doubling cycle adjacent to the critical value, e.g. {1/7, 2/7} for
    1/3.  ``quadratic_major_of`` recovers the longest edge itself.
    """
    r = Fraction(rotation)
    if not 0 < r < 1:
        raise ValueError("rotation number must lie in (0, 1)")
    p, q = r.numerator, r.denominator
    cycles = _rotation_cycles(2, p, q)
    if len(cycles) != 1:
        raise RuntimeError(f"expected one rotation cycle for {r}, found {len(cycles)}")
    cyc = cycles[0]
    if q == 2:
        return Chord(Angle(cyc[0]), Angle(cyc[1]))
    return _minor_of(cyc)


def _minor_of(cyc: list[Fraction]) -> Chord:
    edges = [(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]
    longest = max(edges, key=lambda e: chord_length(Chord(Angle(e[0]), Angle(e[1]))))
    return Chord(double(Angle(longest[0])), double(Angle(longest[1])))


def rotation_cycle_edges(rotation: Fraction | str, degree: int = 2) -> list[Chord]:
    r = Fraction(rotation)
    out = []
    for cyc in _rotation_cycles(degree, r.numerator, r.denominator):
        n = len(cyc)
        out.extend(Chord(Angle(cyc[i]), Angle(cyc[(i + 1) % n])) for i in range(n))
    return out


def main_gap_edge(rotation: Fraction | str) -> list[ComajorRecord]:
    """Comajors attached to tau-symmetric invariant rotational sets H.

    For every such H with rotation number p/q the longest edges of H are
    the periodic majors; both markings are returned.  At 1/2 the invariant
    diameter {0, 1/2} is included as the degenerate case.
    """
    r = Fraction(rotation)
    if not 0 < r < 1:
        raise ValueError("rotation number must lie in (0, 1)")
    p, q = r.numerator, r.denominator
    sets = []
    for cyc in _rotation_cycles(3, p, q):
        H = sorted(set(cyc) | {(x + HALF) % 1 for x in cyc})
        if _rotates_by(H, p, q) and H not in sets:
            sets.append(H)
    if r == HALF:
        sets.append([Fraction(0), HALF])
    if not sets:
        raise LookupError(f"no symmetric invariant rotational set with rotation {r}")
    records = []
    for H in sets:
        for comajor in _comajors_of_set(H):
            rec = classify(comajor)
            if rec not in records:
                records.append(rec)
    return sorted(records, key=ComajorRecord.sort_key)


def _rotates_by(H: list[Fraction], p: int, q: int, degree: int = 3) -> bool:
    """Whether multiplication by ``degree`` permutes the sorted set H as a rotation by p/q."""
    n = len(H)
    if n % q:
        return False
    pos = {x: i for i, x in enumerate(H)}
    want = p * n // q
    for i, x in enumerate(H):
        y = (degree * x) % 1
        if y not in pos or (pos[y] - i) % n != want:
            return False
    return True


def _comajors_of_set(H: list[Fraction]) -> list[Chord]:
    n = len(H)
    edges = [Chord(Angle(H[i]), Angle(H[(i + 1) % n])) for i in range(n)]
    if n == 2:
        edges = [edges[0]]
    top = max(chord_length(e) for e in edges)
    out = []
    for M in (e for e in edges if chord_length(e) == top):
        for i in (1, 2):
            for j in (1, 2):
                c = Chord(M.a + Fraction(i, 3), M.b + Fraction(j, 3))
                if c.degenerate or chord_length(c) > Fraction(1, 6):
                    continue
                if M not in majors_of(c):
                    continue
                if is_legal(c):
                    out.append(c)
    return sorted(set(out))


