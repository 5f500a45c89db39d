"""Exact arithmetic on the circle R/Z.

Angles are reduced rationals in [0, 1).  Nothing in this module touches
floating point; legality decisions built on top of it are bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Union

AngleLike = Union["Angle", Fraction, int, str]

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)
SIXTH = Fraction(1, 6)


class Angle:
    """A rational point of the circle, stored as a reduced fraction in [0, 1)."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: int | Fraction | str | "Angle" = 0, denominator: int = 1):
        if isinstance(numerator, Angle):
            p, q = numerator.numerator, numerator.denominator * denominator
        elif isinstance(numerator, str):
            f = Fraction(numerator.strip()) / denominator
            p, q = f.numerator, f.denominator
        elif isinstance(numerator, Fraction):
            f = numerator / denominator
            p, q = f.numerator, f.denominator
        else:
            p, q = int(numerator), int(denominator)
        if q == 0:
            raise ZeroDivisionError("angle with zero denominator")
        if q < 0:
            p, q = -p, -q
        g = gcd(p, q)
        p, q = (p // g) % (q // g), q // g
        object.__setattr__(self, "numerator", p)
        object.__setattr__(self, "denominator", q)

    def __setattr__(self, name, value):
        raise AttributeError("Angle is immutable")

    @classmethod
    def parse(cls, text: str) -> "Angle":
        return cls(text)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return self.numerator / self.denominator

    def __eq__(self, other):
        if isinstance(other, Angle):
            return self.numerator == other.numerator and self.denominator == other.denominator
        if isinstance(other, (int, Fraction)):
            return self == Angle(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __lt__(self, other: "Angle"):
        return self.value < as_angle(other).value

    def __le__(self, other: "Angle"):
        return self.value <= as_angle(other).value

    def __add__(self, other):
        return Angle(self.value + as_angle_value(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Angle(self.value - as_angle_value(other))

    def __str__(self):
        if self.numerator == 0:
            return "0"
        return f"{self.numerator}/{self.denominator}"

    def __repr__(self):
        return f"Angle({self})"


def as_angle(x: AngleLike) -> Angle:
    return x if isinstance(x, Angle) else Angle(x)


def as_angle_value(x) -> Fraction:
    if isinstance(x, Angle):
        return x.value
    return Fraction(x)


def triple(theta: AngleLike) -> Angle:
    """The tripling map sigma_3."""
    t = as_angle(theta)
    return Angle(3 * t.numerator, t.denominator)


def double(theta: AngleLike) -> Angle:
    t = as_angle(theta)
    return Angle(2 * t.numerator, t.denominator)


def tau(theta: AngleLike) -> Angle:
    """Half turn theta -> theta + 1/2."""
    return as_angle(theta) + HALF


@dataclass(frozen=True)
class OrbitInfo:
    preperiod: int
    period: int
    orbit: tuple[Angle, ...]

    @property
    def cycle(self) -> tuple[Angle, ...]:
        return self.orbit[self.preperiod:]


def orbit_info(theta: AngleLike, degree: int = 3) -> OrbitInfo:
    """Exact preperiod and period of theta under multiplication by ``degree``."""
    t = as_angle(theta)
    q = t.denominator
    seen: dict[int, int] = {}
    orbit = []
    p = t.numerator
    while p not in seen:
        seen[p] = len(orbit)
        orbit.append(Angle(p, q))
        p = (degree * p) % q
    k = seen[p]
    return OrbitInfo(k, len(orbit) - k, tuple(orbit))


def arc_length(a: AngleLike, b: AngleLike) -> Fraction:
    """Length of the positively oriented arc from a to b, in [0, 1)."""
    return (as_angle_value(b) - as_angle_value(a)) % 1


def in_open_arc(x: AngleLike, a: AngleLike, b: AngleLike) -> bool:
    """True iff x lies in the positively oriented open arc (a, b)."""
    d = arc_length(a, x)
    return 0 < d < arc_length(a, b)


def in_closed_arc(x: AngleLike, a: AngleLike, b: AngleLike) -> bool:
    return arc_length(a, x) <= arc_length(a, b)


class Chord:
    """Unordered pair of angles; equal endpoints give a degenerate chord."""

    __slots__ = ("a", "b")

    def __init__(self, a: AngleLike, b: AngleLike | None = None):
        a = as_angle(a)
        b = a if b is None else as_angle(b)
        if b < a:
            a, b = b, a
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("Chord is immutable")

    @property
    def endpoints(self) -> tuple[Angle, Angle]:
        return (self.a, self.b)

    @property
    def degenerate(self) -> bool:
        return self.a == self.b

    @property
    def is_diameter(self) -> bool:
        return arc_length(self.a, self.b) == HALF

    def short_arc(self) -> tuple[Angle, Angle]:
        """(start, end) of the shorter positively oriented arc joining the endpoints.

        For a diameter the arc starting at the smaller endpoint is returned.
        """
        if arc_length(self.a, self.b) <= HALF:
            return (self.a, self.b)
        return (self.b, self.a)

    def image(self, fn=None) -> "Chord":
        fn = fn or triple
        return Chord(fn(self.a), fn(self.b))

    def __eq__(self, other):
        if not isinstance(other, Chord):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __lt__(self, other: "Chord"):
        return (self.a.value, self.b.value) < (other.a.value, other.b.value)

    def __iter__(self):
        return iter((self.a, self.b))

    def __str__(self):
        return f"{{{self.a}, {self.b}}}"

    def __repr__(self):
        return f"Chord({self.a}, {self.b})"

    def to_json(self) -> list[str]:
        return [str(self.a), str(self.b)]

    @classmethod
    def from_json(cls, pair: Iterable[str]) -> "Chord":
        a, b = pair
        return cls(Angle(a), Angle(b))


def chord_tau(ch: Chord) -> Chord:
    return Chord(tau(ch.a), tau(ch.b))


def chord_triple(ch: Chord) -> Chord:
    return Chord(triple(ch.a), triple(ch.b))


def chord_length(ch: Chord) -> Fraction:
    """Normalized length of the shorter arc; 1/2 for a diameter, 0 if degenerate."""
    d = arc_length(ch.a, ch.b)
    return min(d, 1 - d)


def gamma(x: Fraction | int) -> Fraction:
    """Length of the tripled chord as a function of the chord length."""
    x = Fraction(x)
    if not 0 <= x <= HALF:
        raise ValueError(f"gamma is defined on [0, 1/2], got {x}")
    if x <= SIXTH:
        return 3 * x
    return abs(3 * x - 1)


def crosses(l1: Chord, l2: Chord) -> bool:
    """True iff the chords meet inside the open disk.

    Shared endpoints and degenerate chords never count as crossing.
    """
    if l1.degenerate or l2.degenerate:
        return False
    p, q = l1.a, l1.b
    r, s = l2.a, l2.b
    if r in (p, q) or s in (p, q):
        return False
    return in_open_arc(r, p, q) != in_open_arc(s, p, q)


def is_under(inner: Chord, outer: Chord) -> bool:
    """True iff the short arc of ``inner`` is contained in the short arc of ``outer``."""
    if inner.is_diameter or outer.is_diameter:
        raise ValueError("is_under is undefined for diameters")
    s, e = outer.short_arc()
    if inner.degenerate:
        return in_closed_arc(inner.a, s, e)
    s2, e2 = inner.short_arc()
    return in_closed_arc(s2, s, e) and in_closed_arc(e2, s, e) and arc_length(s, s2) <= arc_length(s, e2)


def find_crossing(chords: Iterable[Chord]) -> tuple[Chord, Chord] | None:
    """Return some crossing pair among ``chords``, or None.

    Sweep over endpoints in circular order with a stack; O(n log n).
    Chords sharing an endpoint are allowed.
    """
    items = [c for c in set(chords) if not c.degenerate]
    if len(items) < 2:
        return None
    events = []
    for idx, c in enumerate(items):
        a, b = c.a.value, c.b.value
        length = b - a
        # At a shared point close chords before opening new ones; among
        # openings the longer chord opens first, among closings the shorter
        # chord closes first.
        events.append((a, 1, -length, idx))
        events.append((b, 0, length, idx))
    events.sort()
    stack: list[int] = []
    open_set = set()
    for _, kind, _, idx in events:
        if kind == 1:
            stack.append(idx)
            open_set.add(idx)
        else:
            top = stack.pop()
            if top != idx:
                return (items[top], items[idx])
            open_set.discard(idx)
    return None


def angle_key(theta: Angle) -> Fraction:
    return theta.value
