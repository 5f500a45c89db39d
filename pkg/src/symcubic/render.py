"""Disk diagrams of chord sets (SVG) and escape-time pictures (PNG).

Image coordinates follow the mathematical orientation: the positive
imaginary axis points up.  Both renderers are byte-deterministic for a
fixed input and RenderSpec.
"""

from __future__ import annotations

import cmath
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal

import numpy as np
from PIL import Image, ImageDraw

from .circle import Chord, find_crossing
from .comajor import Atlas
from .dynamics import GridResult, PlaneGrid, RayTrace
from .lamination import Lamination

Target = Literal["lamination", "parameter-plane", "dynamical-plane"]


class RenderError(ValueError):
    pass


class CrossingChordsError(RenderError):
    def __init__(self, first: Chord, second: Chord):
        super().__init__(f"chords {first} and {second} cross")
        self.pair = (first, second)


DEFAULT_PALETTE = {
    "background": "#ffffff",
    "circle": "#000000",
    "chord": "#1f4e9c",
    "interior": "#000000",
    "exterior_near": "#f4f0e6",
    "exterior_far": "#2b3a67",
    "ray": "#d62828",
    "marker": "#2a9d8f",
}


def _rgb(value) -> tuple[int, int, int]:
    if isinstance(value, str):
        v = value.lstrip("#")
        if len(v) != 6:
            raise RenderError(f"bad color {value!r}")
        return tuple(int(v[i:i + 2], 16) for i in (0, 2, 4))
    r, g, b = value
    return int(r), int(g), int(b)


def _hex(value) -> str:
    r, g, b = _rgb(value)
    return f"#{r:02x}{g:02x}{b:02x}"


@dataclass
class Palette:
    colors: dict = field(default_factory=lambda: dict(DEFAULT_PALETTE))
    # log(green) range mapped onto exterior_near .. exterior_far
    green_range: tuple[float, float] = (-14.0, 1.0)
    stroke: float = 1.0

    def __post_init__(self):
        merged = dict(DEFAULT_PALETTE)
        merged.update(self.colors)
        for key, val in merged.items():
            _rgb(val)
        self.colors = merged
        lo, hi = self.green_range
        if not lo < hi:
            raise RenderError("green_range must be increasing")

    def rgb(self, key: str) -> tuple[int, int, int]:
        return _rgb(self.colors[key])

    @classmethod
    def from_json(cls, data: dict) -> "Palette":
        return cls(
            colors=dict(data.get("colors", {})),
            green_range=tuple(data.get("green_range", (-14.0, 1.0))),
            stroke=float(data.get("stroke", 1.0)),
        )

    @classmethod
    def load(cls, path: str | Path) -> "Palette":
        return cls.from_json(json.loads(Path(path).read_text()))

    def to_json(self) -> dict:
        return {"colors": dict(self.colors), "green_range": list(self.green_range), "stroke": self.stroke}


@dataclass
class RenderSpec:
    target: Target = "lamination"
    center: complex = 0j
    width: float = 4.0
    pixels: tuple[int, int] = (512, 512)
    rays: list[RayTrace] = field(default_factory=list)
    marks: list[complex] = field(default_factory=list)
    chord_mode: Literal["geodesic", "straight"] = "geodesic"
    palette: Palette = field(default_factory=Palette)

    def __post_init__(self):
        if self.target not in ("lamination", "parameter-plane", "dynamical-plane"):
            raise RenderError(f"unknown target {self.target!r}")
        if self.chord_mode not in ("geodesic", "straight"):
            raise RenderError(f"unknown chord mode {self.chord_mode!r}")
        nx, ny = self.pixels
        if nx <= 0 or ny <= 0:
            raise RenderError("pixel dimensions must be positive")
        if not self.width > 0:
            raise RenderError("width must be positive")
        self.center = complex(self.center)
        pts = [complex(m) for m in self.marks]
        for ray in self.rays:
            pts.extend(ray.points)
        if not all(math.isfinite(z.real) and math.isfinite(z.imag) for z in pts):
            raise RenderError("overlay points must be finite")

    def grid(self) -> PlaneGrid:
        nx, ny = self.pixels
        return PlaneGrid(self.center, self.width, nx, ny)

    @classmethod
    def for_grid(cls, result: GridResult, **kw) -> "RenderSpec":
        g = result.grid
        target = "parameter-plane" if result.kind == "parameter" else "dynamical-plane"
        return cls(target=target, center=g.center, width=g.width, pixels=(g.nx, g.rows), **kw)


# --- lamination diagrams -----------------------------------------------------


@dataclass(frozen=True)
class GeodesicArc:
    """Arc of the circle |z - center| = radius orthogonal to the unit circle,
    running between the unit-circle points start and end."""

    center: complex
    radius: float
    start: complex
    end: complex


def geodesic_arc(chord: Chord) -> GeodesicArc | None:
    """Hyperbolic geodesic joining the chord's endpoints; None for diameters
    (drawn as segments) and degenerate chords."""
    lo, hi = chord.short_arc()
    span = float((hi.value - lo.value) % 1) * 2 * math.pi
    if span == 0 or chord.is_diameter:
        return None
    mid = 2 * math.pi * float(lo) + span / 2
    half = span / 2
    center = cmath.rect(1 / math.cos(half), mid)
    return GeodesicArc(center, math.tan(half), _unit(lo), _unit(hi))


def _unit(theta) -> complex:
    return cmath.rect(1.0, 2 * math.pi * float(theta))


def _chords_of(source) -> list[Chord]:
    if isinstance(source, Lamination):
        chords = list(source.leaves)
    elif isinstance(source, Atlas):
        chords = [r.comajor for r in source.records]
    else:
        chords = [c if isinstance(c, Chord) else Chord(*c) for c in source]
    return sorted({c for c in chords if not c.degenerate})


def _fmt(x: float) -> str:
    s = f"{x:.4f}"
    return "0.0000" if s == "-0.0000" else s


def render_lamination(source: Lamination | Atlas | Iterable[Chord], spec: RenderSpec | None = None) -> str:
    """SVG 1.1 picture of the unit circle with every chord of ``source``."""
    spec = spec or RenderSpec()
    if spec.target != "lamination":
        raise RenderError(f"render_lamination needs a lamination spec, got {spec.target!r}")
    chords = _chords_of(source)
    bad = find_crossing(chords)
    if bad is not None:
        raise CrossingChordsError(*sorted(bad))
    nx, ny = spec.pixels
    scale = 0.47 * min(nx, ny)
    cx, cy = nx / 2, ny / 2
    pal = spec.palette
    stroke = pal.stroke * max(nx, ny) / 512

    def pt(z: complex) -> str:
        return f"{_fmt(cx + scale * z.real)} {_fmt(cy - scale * z.imag)}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{nx}" height="{ny}" '
        f'viewBox="0 0 {nx} {ny}">',
        f'<rect width="{nx}" height="{ny}" fill="{_hex(pal.colors["background"])}"/>',
        f'<g fill="none" stroke="{_hex(pal.colors["chord"])}" stroke-width="{_fmt(0.6 * stroke)}">',
    ]
    for ch in chords:
        arc = geodesic_arc(ch) if spec.chord_mode == "geodesic" else None
        p, q = _unit(ch.a), _unit(ch.b)
        if arc is None:
            out.append(f'<path d="M {pt(p)} L {pt(q)}"/>')
        else:
            r = _fmt(scale * arc.radius)
            # the geodesic runs clockwise around its outside center; clockwise
            # on screen is sweep-flag 1
            out.append(f'<path d="M {pt(arc.start)} A {r} {r} 0 0 1 {pt(arc.end)}"/>')
    out.append("</g>")
    out.append(
        f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(scale)}" fill="none" '
        f'stroke="{_hex(pal.colors["circle"])}" stroke-width="{_fmt(stroke)}"/>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# --- plane pictures ----------------------------------------------------------


def shade(result: GridResult, palette: Palette | None = None) -> np.ndarray:
    """RGB array: interior color on members, exterior graded by log green."""
    pal = palette or Palette()
    lo, hi = pal.green_range
    g = result.green
    with np.errstate(divide="ignore"):
        lg = np.where(result.escaped, np.log(np.where(g > 0, g, 1e-300)), lo)
    u = np.clip((lg - lo) / (hi - lo), 0.0, 1.0)[..., None]
    near = np.array(pal.rgb("exterior_near"), dtype=float)
    far = np.array(pal.rgb("exterior_far"), dtype=float)
    img = np.rint(near + (far - near) * u).astype(np.uint8)
    img[~result.escaped] = pal.rgb("interior")
    return img


def _check_geometry(result: GridResult, spec: RenderSpec) -> None:
    g = result.grid
    if (g.nx, g.rows) != tuple(spec.pixels):
        raise RenderError(f"grid is {g.nx}x{g.rows} pixels but spec asks for {spec.pixels[0]}x{spec.pixels[1]}")
    if g.center != spec.center or g.width != spec.width:
        raise RenderError("grid center/width differ from the RenderSpec")
    want = "parameter" if spec.target == "parameter-plane" else "dynamical"
    if spec.target == "lamination" or result.kind != want:
        raise RenderError(f"{result.kind} grid cannot be drawn as {spec.target}")


def render_plane_image(result: GridResult, spec: RenderSpec | None = None) -> Image.Image:
    spec = spec or RenderSpec.for_grid(result)
    _check_geometry(result, spec)
    pal = spec.palette
    img = Image.fromarray(shade(result, pal), "RGB")
    draw = ImageDraw.Draw(img)
    grid = result.grid
    lw = max(1, round(pal.stroke))
    for ray in spec.rays:
        pts = [grid.to_pixel(z) for z in ray.points]
        if len(pts) > 1:
            draw.line([(x + 0.5, y + 0.5) for x, y in pts], fill=pal.rgb("ray"), width=lw)
    arm = max(3, min(spec.pixels) // 100)
    for m in spec.marks:
        x, y = grid.to_pixel(complex(m))
        x, y = x + 0.5, y + 0.5
        draw.line([(x - arm, y - arm), (x + arm, y + arm)], fill=pal.rgb("marker"), width=lw)
        draw.line([(x - arm, y + arm), (x + arm, y - arm)], fill=pal.rgb("marker"), width=lw)
    return img


def render_plane(result: GridResult, spec: RenderSpec | None = None) -> bytes:
    """PNG (8-bit RGB) of a membership or Julia grid with overlays."""
    buf = io.BytesIO()
    render_plane_image(result, spec).save(buf, format="PNG", optimize=False)
    return buf.getvalue()
