"""Comajors of symmetric cubic laminations.

A symmetric pair {c, tau(c)} of chords is a comajor pair exactly when it is
legal, so the atlas is built by filtering candidate pairs through the
legality test.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from pathlib import Path
from typing import Literal

import numpy as np

from . import _kernels
from .circle import (
    SIXTH,
    THIRD,
    Angle,
    AngleLike,
    Chord,
    as_angle,
    chord_length,
    chord_tau,
    chord_triple,
    orbit_info,
    tau,
    triple,
)

LamType = Literal["B", "D", "Misiurewicz"]
PeriodMode = Literal["divisors", "upto", "exact"]


class NotAComajorError(ValueError):
    """Input chord cannot be a comajor (degenerate where forbidden, too long, illegal)."""


def _check_comajor_length(c: Chord) -> None:
    if c.degenerate:
        raise NotAComajorError(f"{c} is degenerate")
    if chord_length(c) > SIXTH:
        raise NotAComajorError(f"{c} is longer than 1/6")


def majors_of(c: Chord) -> tuple[Chord, Chord]:
    """The two sibling majors M = {a+1/3, b+2/3} and M' = {a+2/3, b+1/3}
    where (a, b) is the short arc of the comajor."""
    _check_comajor_length(c)
    a, b = c.short_arc()
    return Chord(a + THIRD, b + 2 * THIRD), Chord(a + 2 * THIRD, b + THIRD)


@dataclass(frozen=True)
class StripSet:
    major: Chord
    sibling_major: Chord
    tau_major: Chord
    tau_sibling: Chord
    boundary_arcs: tuple[tuple[Angle, Angle], ...]

    def arc_lengths(self) -> list[Fraction]:
        return [(e.value - s.value) % 1 for s, e in self.boundary_arcs]


def short_strips(c: Chord) -> StripSet:
    M, M2 = majors_of(c)
    a, b = c.short_arc()
    arcs = [(a + THIRD, b + THIRD), (a + 2 * THIRD, b + 2 * THIRD)]
    arcs += [(tau(s), tau(e)) for s, e in arcs]
    return StripSet(M, M2, chord_tau(M), chord_tau(M2), tuple(arcs))


@dataclass(frozen=True)
class LegalityReport:
    legal: bool
    reason: str = ""
    witness: tuple[Chord, ...] = ()

    def __bool__(self):
        return self.legal


def leaf_orbit(c: Chord) -> list[Chord]:
    """Forward orbit c, sigma(c), ... up to the first repetition."""
    seen = []
    seen_set = set()
    while c not in seen_set:
        seen.append(c)
        seen_set.add(c)
        c = chord_triple(c)
    return seen


def _common_denominator(*angles: Angle) -> int:
    return lcm(6, *(a.denominator for a in angles))


def is_legal(c: Chord) -> LegalityReport:
    """Decide whether {c, tau(c)} is a legal pair; report a witness on failure."""
    if c.degenerate:
        return LegalityReport(True, "degenerate")
    if chord_length(c) > SIXTH:
        raise NotAComajorError(f"{c} is longer than 1/6 and cannot be a comajor")
    D = _common_denominator(c.a, c.b)
    a = c.a.numerator * (D // c.a.denominator)
    b = c.b.numerator * (D // c.b.denominator)
    code, i, j = _kernels.code_for(a, b, D)
    if code == _kernels.LEGAL:
        return LegalityReport(True)
    # rebuild only the witness leaves; the full orbit can be long
    n = _orbit_length(a, b, D)

    def leaf(k: int) -> Chord:
        m = pow(3, k % n, D)
        x = Chord(Angle(m * a % D, D), Angle(m * b % D, D))
        return x if k < n else chord_tau(x)

    if code == _kernels.CROSSING:
        return LegalityReport(False, "forward images cross", (leaf(i), leaf(j)))
    return LegalityReport(False, "forward image meets the short strips", (leaf(i),))


def _orbit_length(a: int, b: int, D: int) -> int:
    seen = set()
    x, y = a, b
    while (key := (min(x, y), max(x, y))) not in seen:
        seen.add(key)
        x, y = 3 * x % D, 3 * y % D
    return len(seen)


@dataclass(frozen=True)
class ComajorRecord:
    comajor: Chord
    tau_comajor: Chord
    major: Chord
    sibling_major: Chord
    image_period: int
    preperiod_of_comajor: int
    lam_type: LamType
    half_return: int | None = None

    @property
    def gap_period(self) -> int | None:
        """Period of the critical Fatou gap (None for Misiurewicz records)."""
        if self.lam_type == "Misiurewicz":
            return None
        return self.image_period

    @property
    def period(self) -> int:
        return self.image_period

    def sort_key(self):
        s, _ = self.comajor.short_arc()
        return (self.image_period, min(self.comajor.a, self.comajor.b).value, s.value)

    def to_json(self) -> dict:
        return {
            "pair": self.comajor.to_json(),
            "type": self.lam_type,
            "major": self.major.to_json(),
            "period": self.image_period,
            "preperiod": self.preperiod_of_comajor,
        }


def _pointwise_return(M: Chord, fn, limit: int) -> int | None:
    """Smallest k in 1..limit such that tripling k times and then applying
    ``fn`` fixes both endpoints of M."""
    x, y = M.a, M.b
    for k in range(1, limit + 1):
        x, y = triple(x), triple(y)
        if fn(x) == M.a and fn(y) == M.b:
            return k
    return None


def classify(c: Chord) -> ComajorRecord:
    """Attach majors, periods and the B/D/Misiurewicz type to a legal comajor."""
    _check_comajor_length(c)
    report = is_legal(c)
    if not report:
        raise NotAComajorError(f"{c} is not legal: {report.reason}")
    ia, ib = orbit_info(c.a), orbit_info(c.b)
    if ia.preperiod == 0 or ib.preperiod == 0:
        raise NotAComajorError(f"{c} has a periodic endpoint")
    if (ia.preperiod, ia.period) != (ib.preperiod, ib.period):
        raise NotAComajorError(f"endpoints of {c} have different orbit types")
    k, n = ia.preperiod, ia.period
    M, M2 = majors_of(c)
    if k >= 2:
        return ComajorRecord(c, chord_tau(c), M, M2, n, k, "Misiurewicz")
    if orbit_info(M.a).preperiod != 0 or orbit_info(M.b).preperiod != 0:
        M, M2 = M2, M
    m = _pointwise_return(M, tau, n - 1)
    if m is not None:
        return ComajorRecord(c, chord_tau(c), M, M2, n, 1, "B", half_return=m)
    return ComajorRecord(c, chord_tau(c), M, M2, n, 1, "D")


# --- enumeration -------------------------------------------------------------


def _allowed_periods(max_period: int, mode: PeriodMode) -> list[int]:
    if max_period < 1:
        return []
    if mode == "divisors":
        return [d for d in range(1, max_period + 1) if max_period % d == 0]
    if mode == "upto":
        return list(range(1, max_period + 1))
    if mode == "exact":
        return [max_period]
    raise ValueError(f"unknown period mode {mode!r}")


def periodic_angles(period: int) -> list[Fraction]:
    """All angles of exact period ``period`` under tripling."""
    q = 3 ** period - 1
    out = []
    for i in range(q):
        x = Fraction(i, q)
        if orbit_info(Angle(x)).period == period:
            out.append(x)
    return out


def preperiodic_angles(preperiod: int, period: int) -> list[Fraction]:
    """All angles of exact preperiod and exact period under tripling."""
    layer = periodic_angles(period)
    periodic = set(layer)
    for _ in range(preperiod):
        nxt = []
        for y in layer:
            for e in range(3):
                x = (y + e) / 3
                if x not in periodic:
                    nxt.append(x)
        layer = nxt
    return sorted(layer)


def _legal_pairs(values: list[Fraction], D: int) -> list[tuple[int, int]]:
    """All legal chords among ``values`` (numerators over D) of length <= 1/6."""
    if len(values) < 2:
        return []
    P = np.array(sorted(int(v * D) for v in values), dtype=np.int64)
    ext = np.concatenate([P, P + D])
    w = D // 6
    A, B = [], []
    for i, a in enumerate(P):
        j1 = int(np.searchsorted(ext, a + w, side="right"))
        j1 = min(j1, i + len(P))
        bs = ext[i + 1:j1] % D
        if len(bs):
            A.append(np.full(len(bs), a, dtype=np.int64))
            B.append(bs)
    if not A:
        return []
    A = np.concatenate(A)
    B = np.concatenate(B)
    if D < _kernels.INT64_SAFE:
        ok = _kernels.legal_batch_jit(A, B, D)
    else:  # pragma: no cover - only for enormous bounds
        ok = _kernels.legal_batch(A.astype(object), B.astype(object), D)
    return list(zip(A[ok].tolist(), B[ok].tolist()))


@dataclass
class Atlas:
    bound: tuple[int, int]
    records: tuple[ComajorRecord, ...]
    misiurewicz_classes: tuple[frozenset, ...] = ()
    period_mode: PeriodMode = "divisors"
    _by_angle: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.records = tuple(sorted(self.records, key=ComajorRecord.sort_key))
        self.misiurewicz_classes = tuple(
            sorted((frozenset(c) for c in self.misiurewicz_classes), key=lambda s: sorted(x.value for x in s))
        )
        self._by_angle = {}
        for r in self.records:
            for x in r.comajor:
                self._by_angle.setdefault(x, []).append(r)

    def __len__(self):
        return len(self.records)

    @property
    def comajors(self) -> list[Chord]:
        return [r.comajor for r in self.records]

    def fatou_records(self) -> list[ComajorRecord]:
        return [r for r in self.records if r.lam_type != "Misiurewicz"]

    def records_at(self, theta: AngleLike) -> list[ComajorRecord]:
        return list(self._by_angle.get(as_angle(theta), ()))

    def periods(self) -> list[int]:
        return _allowed_periods(self.bound[0], self.period_mode)

    def to_json(self) -> dict:
        return {
            "bound": {"period": self.bound[0], "preperiod": self.bound[1], "mode": self.period_mode},
            "comajors": [r.to_json() for r in self.records],
            "misiurewicz": [[str(x) for x in sorted(c, key=lambda a: a.value)] for c in self.misiurewicz_classes],
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1))

    @classmethod
    def from_json(cls, data: dict) -> "Atlas":
        bound = data["bound"]
        records = []
        for item in data["comajors"]:
            c = Chord.from_json(item["pair"])
            M = Chord.from_json(item["major"])
            _, M2 = majors_of(c)
            if M2 == M:
                M2 = majors_of(c)[0]
            lam_type = item["type"]
            m = None
            if lam_type == "B":
                m = _pointwise_return(M, tau, item["period"] - 1)
            records.append(
                ComajorRecord(c, chord_tau(c), M, M2, item["period"], item.get("preperiod", 1), lam_type, m)
            )
        classes = [frozenset(Angle(x) for x in cls_) for cls_ in data.get("misiurewicz", [])]
        return cls((bound["period"], bound["preperiod"]), tuple(records), tuple(classes), bound.get("mode", "divisors"))

    @classmethod
    def load(cls, path: str | Path) -> "Atlas":
        return cls.from_json(json.loads(Path(path).read_text()))

    def __eq__(self, other):
        if not isinstance(other, Atlas):
            return NotImplemented
        return self.to_json() == other.to_json()


def enumerate_comajors(max_period: int, max_preperiod: int = 1, period_mode: PeriodMode = "divisors") -> Atlas:
    """Exhaustively enumerate comajors with preperiod <= max_preperiod.

    ``period_mode`` selects which eventual periods are included: divisors of
    ``max_period`` (default), every period up to it, or exactly it.
    """
    periods = _allowed_periods(max_period, period_mode)
    records: list[ComajorRecord] = []
    classes: list[frozenset] = []
    for k in range(1, max(max_preperiod, 0) + 1):
        for n in periods:
            values = preperiodic_angles(k, n)
            D = 3 ** k * (3 ** n - 1)
            pairs = _legal_pairs(values, D)
            for a, b in pairs:
                records.append(classify(Chord(Angle(a, D), Angle(b, D))))
            if k >= 2:
                classes.extend(_components(pairs, D))
    return Atlas((max_period, max_preperiod), tuple(records), tuple(classes), period_mode)


def _components(pairs: list[tuple[int, int]], D: int) -> list[frozenset]:
    parent: dict[int, int] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict[int, set] = {}
    for x in list(parent):
        groups.setdefault(find(x), set()).add(Angle(x, D))
    return [frozenset(g) for g in groups.values()]


def class_of(theta: AngleLike, atlas: Atlas) -> frozenset:
    """The equivalence class of theta under the comajor lamination."""
    t = as_angle(theta)
    info = orbit_info(t)
    if info.period not in atlas.periods() or info.preperiod > atlas.bound[1]:
        raise ValueError(f"{t} (preperiod {info.preperiod}, period {info.period}) is outside the atlas bound")
    if info.preperiod == 0:
        return frozenset({t})
    if info.preperiod == 1:
        recs = atlas.records_at(t)
        if len(recs) != 1:
            raise ValueError(f"{t} is an endpoint of {len(recs)} comajors, expected one")
        return frozenset(recs[0].comajor.endpoints)
    for cls_ in atlas.misiurewicz_classes:
        if t in cls_:
            return cls_
    raise ValueError(f"no class found for {t}")
