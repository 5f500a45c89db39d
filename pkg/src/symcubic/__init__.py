"""Combinatorics and dynamics of the symmetric cubic family z^3 - 3c^2 z."""

from .circle import (
    Angle,
    Chord,
    OrbitInfo,
    arc_length,
    chord_length,
    chord_tau,
    chord_triple,
    crosses,
    double,
    find_crossing,
    gamma,
    in_closed_arc,
    in_open_arc,
    is_under,
    orbit_info,
    tau,
    triple,
)
from .comajor import (
    Atlas,
    ComajorRecord,
    LegalityReport,
    NotAComajorError,
    class_of,
    classify,
    enumerate_comajors,
    is_legal,
    majors_of,
    short_strips,
)
from .lamination import (
    GapBoundary,
    Lamination,
    LaminationError,
    build_lamination,
    critical_gap,
    eta,
    induce,
    main_gap_edge,
    phi,
    quadratic_rotation_major,
)

__version__ = "0.1.0"

__all__ = [
    "Angle", "Chord", "OrbitInfo", "arc_length", "chord_length", "chord_tau", "chord_triple", "crosses",
    "double", "find_crossing", "gamma", "in_closed_arc", "in_open_arc", "is_under", "orbit_info", "tau",
    "triple", "Atlas", "ComajorRecord", "LegalityReport", "NotAComajorError", "class_of", "classify",
    "enumerate_comajors", "is_legal", "majors_of", "short_strips", "GapBoundary", "Lamination",
    "LaminationError", "build_lamination", "critical_gap", "eta", "induce", "main_gap_edge", "phi",
    "quadratic_rotation_major",
]
