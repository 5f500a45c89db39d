"""Slow reference legality checker, kept independent of the integer kernel.

Predicates are written directly from the definitions: crossing by
alternating circular order, strip contact by the two closed regions the
strip leaves behind.  Used to cross-check the production checker.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

def _pos(x: int, start: int, L: int) -> int:
    return (x - start) % L


def _strictly_between(x, a, b, L) -> bool:
    """x in the open counterclockwise arc from a to b."""
    return 0 < _pos(x, a, L) < _pos(b, a, L)


def _between(x, a, b, L) -> bool:
    """x in the closed counterclockwise arc from a to b."""
    return _pos(x, a, L) <= _pos(b, a, L)


def _cross(p, q, L) -> bool:
    (a, b), (c, d) = p, q
    if a == b or c == d or len({a, b, c, d}) < 4:
        return False
    return _strictly_between(c, a, b, L) != _strictly_between(d, a, b, L)


def naive_cross(p, q) -> bool:
    """Crossing of two chords given as pairs of Fractions."""
    L = lcm(*(Fraction(x).denominator for x in (*p, *q)))
    return _cross(tuple(int(x * L) % L for x in p), tuple(int(x * L) % L for x in q), L)


def _orbit(a: int, b: int, L: int) -> list[tuple[int, int]]:
    out, seen = [], set()
    leaf = (min(a, b), max(a, b))
    while leaf not in seen:
        out.append(leaf)
        seen.add(leaf)
        x, y = 3 * leaf[0] % L, 3 * leaf[1] % L
        leaf = (min(x, y), max(x, y))
    return out


def _meets_open_strip(leaf, s: int, e: int, L: int) -> bool:
    """Does ``leaf`` meet the open strip between the two majors of the
    comajor with short arc (s, e)?

    The strip has corners s+1/3, e+1/3, s+2/3, e+2/3 in circular order.  Its
    complement in the closed disk is two closed regions, each cut off by one
    major; a chord avoids the open strip iff both ends sit in one of them.
    """
    t = L // 3
    a1, b1, a2, b2 = (s + t) % L, (e + t) % L, (s + 2 * t) % L, (e + 2 * t) % L
    x, y = leaf
    in_first = _between(x, b2, a1, L) and _between(y, b2, a1, L)
    in_second = _between(x, b1, a2, L) and _between(y, b1, a2, L)
    return not (in_first or in_second)


def naive_is_legal(a, b) -> bool:
    """Legality of {a, b} and its half-turn image, straight from the definition.

    Angles are Fractions; internally everything is an integer numerator
    over the smallest denominator that also carries halves and thirds.
    """
    a, b = Fraction(a) % 1, Fraction(b) % 1
    if a == b:
        return True
    L = lcm(6, a.denominator, b.denominator)
    x, y = int(a * L), int(b * L)
    s, e = (x, y) if _pos(y, x, L) * 2 <= L else (y, x)
    if _pos(e, s, L) * 6 > L:
        return False
    h = L // 2
    orbit = _orbit(x, y, L)
    family = orbit + [tuple(sorted(((p + h) % L, (q + h) % L))) for p, q in orbit]
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            if _cross(family[i], family[j], L):
                return False
    ts, te = (s + h) % L, (e + h) % L
    for leaf in orbit[1:]:
        if _meets_open_strip(leaf, s, e, L) or _meets_open_strip(leaf, ts, te, L):
            return False
    return True


def pairs_up_to(max_denominator: int):
    """All chords {i/q, j/q} with q <= max_denominator and arc length in (0, 1/6],
    each listed once in lowest terms."""
    seen = set()
    for q in range(1, max_denominator + 1):
        w = q // 6
        for i in range(q):
            for d in range(1, w + 1):
                x, y = Fraction(i, q), Fraction((i + d) % q, q)
                key = (min(x, y), max(x, y))
                if key not in seen:
                    seen.add(key)
                    yield key
