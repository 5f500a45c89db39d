import io
import math
import re

import numpy as np
import pytest
from PIL import Image

from symcubic.circle import Chord
from symcubic.comajor import enumerate_comajors
from symcubic.dynamics import GridResult, PlaneGrid, julia_grid, membership_grid, trace_param_ray
from symcubic.lamination import build_lamination
from symcubic.render import (
    CrossingChordsError,
    Palette,
    RenderError,
    RenderSpec,
    geodesic_arc,
    render_lamination,
    render_plane,
    shade,
)

ARC = re.compile(r'd="M ([-\d.]+) ([-\d.]+) A ([-\d.]+) \3 0 0 1 ([-\d.]+) ([-\d.]+)"')


def _svg_center(x1, y1, r, x2, y2, large=0, sweep=1):
    """Center of an SVG arc from endpoint parameters (circular case)."""
    hx, hy = (x1 - x2) / 2, (y1 - y2) / 2
    k = math.sqrt(max(0.0, (r * r - hx * hx - hy * hy) / (hx * hx + hy * hy)))
    if large == sweep:
        k = -k
    return k * hy + (x1 + x2) / 2, -k * hx + (y1 + y2) / 2


def test_svg_is_deterministic(type_b):
    lam = build_lamination(type_b, 2)
    assert render_lamination(lam) == render_lamination(lam)


def test_geodesic_is_orthogonal():
    for q in (7, 13, 48, 80):
        for i in range(q):
            for d in (1, 2, 5):
                arc = geodesic_arc(Chord(f"{i}/{q}", f"{(i + d) % q}/{q}"))
                if arc is None:
                    continue
                assert abs(abs(arc.center) ** 2 - 1 - arc.radius ** 2) < 1e-9
                assert abs(abs(arc.start - arc.center) - arc.radius) < 1e-9
                assert abs(abs(arc.end - arc.center) - arc.radius) < 1e-9


def test_diameters_and_points_have_no_arc():
    assert geodesic_arc(Chord("1/6", "2/3")) is None
    assert geodesic_arc(Chord("1/5", "1/5")) is None


def test_svg_arcs_bulge_inward():
    atlas = enumerate_comajors(3)
    spec = RenderSpec(pixels=(400, 400))
    svg = render_lamination(atlas, spec)
    scale, cx, cy = 0.47 * 400, 200, 200
    arcs = ARC.findall(svg)
    assert len(arcs) == len(atlas)
    for x1, y1, r, x2, y2 in (map(float, a) for a in arcs):
        sx, sy = _svg_center(x1, y1, r, x2, y2)
        # the SVG center must coincide with the geodesic's center, outside the disk
        z = complex((sx - cx) / scale, (cy - sy) / scale)
        assert abs(z) > 1
        assert abs(abs(z) ** 2 - 1 - (r / scale) ** 2) < 5e-3


def test_atlas_and_chord_list_agree():
    atlas = enumerate_comajors(1)
    assert render_lamination(atlas) == render_lamination([r.comajor for r in atlas.records])
    assert render_lamination(atlas).count("<path") == 2


def test_empty_source_draws_circle():
    svg = render_lamination([])
    assert svg.count("<circle") == 1 and "<path" not in svg
    assert svg.startswith("<?xml")


def test_straight_mode():
    svg = render_lamination([Chord("1/6", "1/3")], RenderSpec(chord_mode="straight"))
    assert " L " in svg and " A " not in svg


def test_crossing_chords_rejected():
    with pytest.raises(CrossingChordsError) as info:
        render_lamination([Chord("0", "1/2"), Chord("1/4", "3/4")])
    assert set(info.value.pair) == {Chord("0", "1/2"), Chord("1/4", "3/4")}
    assert "cross" in str(info.value)


def test_spec_validation():
    with pytest.raises(RenderError):
        RenderSpec(target="torus")
    with pytest.raises(RenderError):
        RenderSpec(pixels=(0, 10))
    with pytest.raises(RenderError):
        RenderSpec(width=-1)
    with pytest.raises(RenderError):
        RenderSpec(marks=[complex("nan")])
    with pytest.raises(RenderError):
        render_lamination([], RenderSpec(target="parameter-plane"))


def test_palette_json(tmp_path):
    pal = Palette({"chord": "#ff0000"}, green_range=(-10, 0), stroke=2)
    p = tmp_path / "pal.json"
    import json
    p.write_text(json.dumps(pal.to_json()))
    back = Palette.load(p)
    assert back == pal and back.rgb("chord") == (255, 0, 0)
    assert back.colors["circle"] == "#000000"
    with pytest.raises(RenderError):
        Palette({"chord": "red"})
    with pytest.raises(RenderError):
        Palette(green_range=(1, 0))


def test_palette_colors_svg():
    svg = render_lamination([Chord("1/6", "1/3")], RenderSpec(palette=Palette({"chord": "#123456"})))
    assert 'stroke="#123456"' in svg


def test_png_parameter_plane():
    res = membership_grid(PlaneGrid(0j, 3.0, 96, 64), 200)
    ray = trace_param_ray("1/6", 1e-3)
    spec = RenderSpec.for_grid(res, rays=[ray], marks=[0.5 + 0.29j])
    data = render_plane(res, spec)
    assert data == render_plane(res, spec)
    img = Image.open(io.BytesIO(data))
    assert img.mode == "RGB" and img.size == (96, 64)
    px = np.asarray(img)
    assert tuple(px[32, 48]) == (0, 0, 0)  # the origin is a member
    assert (px == Palette().rgb("ray")).all(axis=-1).any()


def test_png_julia():
    res = julia_grid(0.3, PlaneGrid(0j, 3.0, 40), 100)
    img = Image.open(io.BytesIO(render_plane(res)))
    assert img.size == (40, 40)


def test_png_geometry_mismatch():
    res = membership_grid(PlaneGrid(0j, 3.0, 32), 50)
    with pytest.raises(RenderError, match="pixels"):
        render_plane(res, RenderSpec(target="parameter-plane", width=3.0, pixels=(64, 64)))
    with pytest.raises(RenderError):
        render_plane(res, RenderSpec(target="dynamical-plane", width=3.0, pixels=(32, 32)))


def test_shade_is_monotone_in_green():
    g = PlaneGrid(0j, 1.0, 3, 1)
    res = GridResult(g, np.array([[True, True, False]]), np.zeros((1, 3), int),
                     np.array([[1e-6, 1.0, 0.0]]))
    img = shade(res)
    assert tuple(img[0, 2]) == (0, 0, 0)
    near, far = np.array(Palette().rgb("exterior_near")), np.array(Palette().rgb("exterior_far"))
    assert np.abs(img[0, 0] - near).sum() < np.abs(img[0, 1] - near).sum()
    assert np.abs(img[0, 1] - far).sum() < np.abs(img[0, 0] - far).sum()
