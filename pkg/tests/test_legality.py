"""Production legality checker against the slow reference checker."""

from fractions import Fraction
from math import lcm

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symcubic import _kernels
from symcubic.circle import Angle, Chord, chord_tau
from symcubic.comajor import NotAComajorError, is_legal
from symcubic.oracle import naive_cross, naive_is_legal, pairs_up_to


def _batch(pairs):
    out = {}
    groups = {}
    for x, y in pairs:
        groups.setdefault(lcm(6, x.denominator, y.denominator), []).append((x, y))
    for D, items in groups.items():
        A = np.array([int(x * D) for x, _ in items], dtype=np.int64)
        B = np.array([int(y * D) for _, y in items], dtype=np.int64)
        for item, ok in zip(items, _kernels.legal_batch_jit(A, B, D)):
            out[item] = bool(ok)
    return out


def test_oracle_on_known_pairs():
    assert naive_is_legal(Fraction(5, 48), Fraction(7, 48))
    assert naive_is_legal(Fraction(7, 78), Fraction(4, 39))
    assert naive_is_legal(Fraction(1, 6), Fraction(1, 3))
    assert not naive_is_legal(Fraction(1, 48), Fraction(2, 48))
    assert naive_cross((Fraction(0), Fraction(1, 2)), (Fraction(1, 4), Fraction(3, 4)))


def test_small_denominators_all_entry_points():
    pairs = list(pairs_up_to(60))
    batch = _batch(pairs)
    for x, y in pairs:
        want = naive_is_legal(x, y)
        assert bool(is_legal(Chord(Angle(x), Angle(y)))) == want, (x, y)
        assert batch[(x, y)] == want, (x, y)


def test_python_kernel_matches_compiled():
    for x, y in list(pairs_up_to(40)):
        D = lcm(6, x.denominator, y.denominator)
        a, b = int(x * D), int(y * D)
        assert _kernels.legality_code(a, b, D)[0] == _kernels.legality_code_jit(a, b, D)[0]


def test_big_denominator_uses_python_path():
    # preperiod 1, period 40: the denominator exceeds the int64 range
    x = Fraction(1, 3 * (3 ** 40 - 1))
    c = Chord(Angle(x), Angle(x + Fraction(1, 3 ** 41)))
    D = lcm(6, c.a.denominator, c.b.denominator)
    assert D > _kernels.INT64_SAFE
    assert bool(is_legal(c)) == naive_is_legal(c.a.value, c.b.value)


def test_illegal_report_has_witness():
    rep = is_legal(Chord("1/48", "2/48"))
    assert not rep
    assert rep.reason == "forward images cross"
    assert len(rep.witness) == 2
    a, b = rep.witness
    assert naive_cross((a.a.value, a.b.value), (b.a.value, b.b.value))


def test_strip_witness():
    bad = [Chord(Angle(x), Angle(y)) for x, y in pairs_up_to(30)]
    reasons = {is_legal(c).reason for c in bad if not is_legal(c)}
    assert "forward image meets the short strips" in reasons


def test_long_chord_is_rejected():
    with pytest.raises(NotAComajorError):
        is_legal(Chord("0", "1/4"))


def test_degenerate_is_legal():
    assert is_legal(Chord("1/5"))


small = st.integers(2, 600).flatmap(
    lambda q: st.tuples(st.just(q), st.integers(0, q - 1), st.integers(1, max(1, q // 6)))
)


@given(small)
def test_random_pairs_agree_with_oracle(t):
    q, i, d = t
    if 6 * d > q:
        return
    x, y = Fraction(i, q), Fraction((i + d) % q, q)
    assert bool(is_legal(Chord(Angle(x), Angle(y)))) == naive_is_legal(x, y)


@given(small)
def test_legality_is_tau_symmetric(t):
    q, i, d = t
    if 6 * d > q:
        return
    c = Chord(Angle(i, q), Angle(i + d, q))
    assert bool(is_legal(c)) == bool(is_legal(chord_tau(c)))
