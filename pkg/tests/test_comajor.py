import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symcubic.circle import Angle, Chord, chord_length, chord_tau, find_crossing, orbit_info, triple
from symcubic.comajor import (
    Atlas,
    NotAComajorError,
    class_of,
    classify,
    enumerate_comajors,
    majors_of,
    periodic_angles,
    preperiodic_angles,
    short_strips,
)


def test_majors_of_type_b():
    M, M2 = majors_of(Chord("5/48", "7/48"))
    assert {M, M2} == {Chord("7/16", "13/16"), Chord("23/48", "37/48")}
    rec = classify(Chord("5/48", "7/48"))
    assert rec.major == Chord("7/16", "13/16")
    assert triple(rec.major.a) in (Angle(5, 16), Angle(7, 16))


def test_short_strips_arcs():
    strips = short_strips(Chord("5/48", "7/48"))
    assert all(length <= Fraction(1, 6) for length in strips.arc_lengths())
    assert len(strips.arc_lengths()) == 4


def test_classify_figure_records(type_b, type_d):
    assert (type_b.lam_type, type_b.gap_period, type_b.half_return) == ("B", 4, 2)
    assert type_b.major == Chord("7/16", "13/16")
    assert (type_d.lam_type, type_d.gap_period) == ("D", 3)
    assert type_d.major == Chord("11/26", "10/13")


def test_classify_main(main_record):
    assert main_record.lam_type == "D"
    assert main_record.image_period == 1
    assert main_record.major == Chord("0", "1/2")


def test_classify_misiurewicz():
    rec = classify(Chord("1/36", "35/36"))
    assert rec.lam_type == "Misiurewicz"
    assert rec.preperiod_of_comajor == 2
    assert rec.gap_period is None


def test_classify_rejects():
    with pytest.raises(NotAComajorError):
        classify(Chord("1/48", "1/24"))
    with pytest.raises(NotAComajorError):
        classify(Chord("0", "1/8"))  # periodic endpoint
    with pytest.raises(NotAComajorError):
        classify(Chord("0", "1/2"))


def test_angle_lists():
    assert periodic_angles(1) == [Fraction(0), Fraction(1, 2)]
    assert len(periodic_angles(2)) == 6
    pre = preperiodic_angles(1, 1)
    assert pre == [Fraction(1, 6), Fraction(1, 3), Fraction(2, 3), Fraction(5, 6)]
    for x in preperiodic_angles(2, 2):
        info = orbit_info(Angle(x))
        assert (info.preperiod, info.period) == (2, 2)


@pytest.mark.parametrize("n", range(1, 7))
def test_atlas_counts(n):
    atlas = enumerate_comajors(n)
    assert len(atlas) == 3 ** n - 1
    ends = [x for c in atlas.comajors for x in c]
    assert len(ends) == len(set(ends))


def test_atlas_period_one():
    atlas = enumerate_comajors(1)
    assert atlas.comajors == [Chord("1/6", "1/3"), Chord("2/3", "5/6")]


def test_atlas_modes():
    assert len(enumerate_comajors(4, period_mode="exact")) == 80 - 8
    # exact periods 1, 2, 3, 4 contribute 2, 6, 24, 72
    assert len(enumerate_comajors(4, period_mode="upto")) == 104
    assert enumerate_comajors(4).periods() == [1, 2, 4]


def test_atlas_json_round_trip(tmp_path):
    atlas = enumerate_comajors(4, 2)
    path = tmp_path / "atlas.json"
    atlas.save(path)
    again = Atlas.load(path)
    assert again == atlas
    assert [r.half_return for r in again.records] == [r.half_return for r in atlas.records]
    data = json.loads(path.read_text())
    assert data["bound"] == {"period": 4, "preperiod": 2, "mode": "divisors"}


def test_misiurewicz_classes():
    atlas = enumerate_comajors(2, 2)
    assert class_of("1/36", atlas) == frozenset({Angle(1, 36), Angle(35, 36)})
    assert class_of("1/4", atlas) == frozenset({Angle(1, 4)})
    with pytest.raises(ValueError):
        class_of("1/80", atlas)
    sizes = sorted(len(c) for c in enumerate_comajors(4, 3).misiurewicz_classes)
    assert set(sizes) == {2, 4}


def test_atlas6_preperiod2_noncrossing():
    atlas = enumerate_comajors(6, 2)
    assert len(atlas) == 1040
    assert find_crossing(atlas.comajors) is None


@settings(max_examples=25)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 3 ** n - 2))))
def test_record_invariants(t):
    n, k = t
    rec = enumerate_comajors(n).records[k]
    assert chord_length(rec.comajor) <= Fraction(1, 6)
    assert rec.tau_comajor == chord_tau(rec.comajor)
    M = rec.major
    assert Chord(triple(M.a), triple(M.b)) == Chord(triple(rec.comajor.a), triple(rec.comajor.b))
    assert orbit_info(M.a).preperiod == 0
    assert rec.image_period == orbit_info(triple(rec.comajor.a)).period
    if rec.lam_type == "B":
        assert rec.image_period == 2 * rec.half_return
