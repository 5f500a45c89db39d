"""Integer legality kernel.

All angles are numerators over a common denominator ``D`` divisible by 6, so
tripling, the half turn and the thirds of the circle are integer operations.
The functions are plain Python; when numba is importable the batch entry
point is compiled, otherwise it runs as is.
"""

from types import FunctionType

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

LEGAL = 0
CROSSING = 1
STRIP = 2
TOO_LONG = 3


def _in_open(x, a, b, D):
    d = (x - a) % D
    return 0 < d < (b - a) % D


def _crosses(p, q, r, s, D):
    if p == q or r == s:
        return False
    if r == p or r == q or s == p or s == q:
        return False
    return _in_open(r, p, q, D) != _in_open(s, p, q, D)


def _leaf_orbit(a, b, D):
    cap = 64
    xs = _alloc(cap)
    ys = _alloc(cap)
    n = 0
    x, y = a, b
    while True:
        lo = x if x < y else y
        hi = y if x < y else x
        for i in range(n):
            if xs[i] == lo and ys[i] == hi:
                return xs[:n], ys[:n]
        if n == cap:
            cap *= 2
            xs2 = _alloc(cap)
            ys2 = _alloc(cap)
            xs2[:n] = xs[:n]
            ys2[:n] = ys[:n]
            xs, ys = xs2, ys2
        xs[n] = lo
        ys[n] = hi
        n += 1
        x = (3 * x) % D
        y = (3 * y) % D


def _meets_strip(x, y, a, b, t, D):
    """Does the chord {x, y} meet the interior of the strip between
    M = {a+t, b+2t} and M' = {a+2t, b+t}?  Here t = D/3, short arc (a, b)."""
    a1 = (a + t) % D
    b1 = (b + t) % D
    a2 = (a + 2 * t) % D
    b2 = (b + 2 * t) % D
    if _in_open(x, a1, b1, D) or _in_open(x, a2, b2, D):
        return True
    if _in_open(y, a1, b1, D) or _in_open(y, a2, b2, D):
        return True
    if x == y:
        return False
    if _crosses(x, y, a1, b2, D) or _crosses(x, y, a2, b1, D):
        return True
    # Chords joining two corners of the strip lie inside it unless they are
    # the bounding majors themselves.
    xc = x == a1 or x == b1 or x == a2 or x == b2
    yc = y == a1 or y == b1 or y == a2 or y == b2
    if xc and yc:
        if (x == a1 and y == b2) or (x == b2 and y == a1):
            return False
        if (x == a2 and y == b1) or (x == b1 and y == a2):
            return False
        return True
    return False


def legality_code(a, b, D):
    """Return (code, i, j) for the chord {a/D, b/D}.

    code is LEGAL, CROSSING (leaves i, j of the combined orbit list cross;
    indices >= n refer to tau-images), STRIP (image i meets the short
    strips) or TOO_LONG.  Degenerate chords are legal.
    """
    if a == b:
        return LEGAL, -1, -1
    h = D // 2
    t = D // 3
    if (b - a) % D > h:
        a, b = b, a
    if 6 * ((b - a) % D) > D:
        return TOO_LONG, -1, -1
    xs, ys = _leaf_orbit(a, b, D)
    n = xs.shape[0]
    m = 2 * n
    ux = _alloc(m)
    uy = _alloc(m)
    for i in range(n):
        ux[i] = xs[i]
        uy[i] = ys[i]
        ux[n + i] = (xs[i] + h) % D
        uy[n + i] = (ys[i] + h) % D
    for i in range(m):
        for j in range(i + 1, m):
            if _crosses(ux[i], uy[i], ux[j], uy[j], D):
                return CROSSING, i, j
    ta = (a + h) % D
    tb = (b + h) % D
    for i in range(1, n):
        if _meets_strip(xs[i], ys[i], a, b, t, D) or _meets_strip(xs[i], ys[i], ta, tb, t, D):
            return STRIP, i, -1
    return LEGAL, -1, -1


def legal_batch(a_arr, b_arr, D):
    out = np.empty(a_arr.shape[0], dtype=np.bool_)
    for k in range(a_arr.shape[0]):
        code, _, _ = legality_code(a_arr[k], b_arr[k], D)
        out[k] = code == LEGAL
    return out


def _alloc(cap):
    return np.empty(cap, dtype=object)


def _compile():
    """Compile int64 copies of the kernel functions; the Python originals
    stay untouched and handle arbitrarily large denominators."""
    g = dict(globals())
    g["_alloc"] = numba.njit(lambda cap: np.empty(cap, dtype=np.int64))
    for name in ("_in_open", "_crosses", "_leaf_orbit", "_meets_strip", "legality_code", "legal_batch"):
        fn = globals()[name]
        g[name] = numba.njit(cache=False)(FunctionType(fn.__code__, g, name))
    return g["legality_code"], g["legal_batch"]


if numba is not None:
    legality_code_jit, legal_batch_jit = _compile()
else:  # pragma: no cover
    legality_code_jit, legal_batch_jit = legality_code, legal_batch

INT64_SAFE = 2 ** 60


def code_for(a, b, D):
    if D < INT64_SAFE:
        return legality_code_jit(a, b, D)
    return legality_code(a, b, D)
