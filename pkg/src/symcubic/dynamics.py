"""Numerical dynamics of the symmetric cubic family p_c(z) = z^3 - 3c^2 z.

Double precision throughout.  Parameter rays use the normalization
Psi(c) = B_c(2c) ~ cbrt(2) c at infinity (Psi(c) is the Boettcher value of
the cocritical point 2c of the critical point -c; since p_c = p_{-c} this
is the other marking of the same family).
"""

from __future__ import annotations

import cmath
import csv
import io
import math
import sys
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
import numpy as np

from .circle import Angle, AngleLike, as_angle
from .comajor import ComajorRecord

CBRT2 = 2 ** (1 / 3)
BAILOUT = 1e30


def _env_float(name: str, default: float) -> float:
    try:
        return float(os.environ.get(name, default))
    except ValueError:
        return default


NEWTON_TOL = _env_float("SYMCUBIC_NEWTON_TOL", 1e-13)
SCHEDULE_RATIO = _env_float("SYMCUBIC_SCHEDULE_RATIO", 0.85)
TARGET_LOG_RADIUS = 18.4  # work with |p^N| ~ e^18 so that B(p^N) = p^N to double precision


class DynamicsError(RuntimeError):
    pass


class ConvergenceError(DynamicsError):
    """Newton or continuation failed; ``last`` holds the last good value."""

    def __init__(self, msg: str, last=None):
        super().__init__(msg)
        self.last = last


class BranchAmbiguityError(DynamicsError):
    pass


# --- basic iteration ---------------------------------------------------------


def step(c: complex, z: complex) -> complex:
    return z * z * z - 3 * c * c * z


def escape_radius(c: complex) -> float:
    return max(4.0, 2.0 * abs(c))


@dataclass(frozen=True)
class EscapeResult:
    escaped: bool
    steps: int
    final: complex
    green_estimate: float


def _check_finite(*vals):
    for v in vals:
        if not cmath.isfinite(complex(v)):
            raise ValueError(f"non-finite input {v!r}")


def escape_time(c: complex, z0: complex, max_iter: int = 1000, radius: float | None = None) -> EscapeResult:
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    _check_finite(c, z0)
    R = escape_radius(c) if radius is None else radius
    z = complex(z0)
    for n in range(max_iter + 1):
        if abs(z) > R:
            return EscapeResult(True, n, z, math.log(abs(z)) / 3 ** n)
        if n < max_iter:
            z = step(c, z)
    return EscapeResult(False, max_iter, z, 0.0)


def green(c: complex, z: complex, max_iter: int = 1000) -> float:
    """Escape-rate potential; orbits are pushed to a large bailout so the
    estimate satisfies g(p(z)) = 3 g(z) to near machine precision."""
    res = escape_time(c, z, max_iter)
    if not res.escaped:
        return 0.0
    w, n = res.final, res.steps
    while abs(w) < BAILOUT:
        w = step(c, w)
        n += 1
    # log|p^n| = 3^n g + log|1 - 3c^2/w^2|/2 + ...; subtract the first correction
    corr = math.log(abs(1 - 3 * c * c / w ** 2)) / 2
    return (math.log(abs(w)) - corr) / 3 ** n


# --- Boettcher coordinates ---------------------------------------------------


BRANCH_ARG_LIMIT = 2 * math.pi / 3


def _bottcher_product(c: complex, z: complex, first: int = 0) -> complex:
    """B_c(z) by principal roots of the correction factors r_k = z_{k+1}/z_k^3.

    From index ``first`` on, a factor farther than 1/2 from 1 is accepted
    only while it stays clear of the negative reals (|arg r| < 2 pi/3);
    otherwise the branch is ambiguous and an error is raised.
    """
    log_b = cmath.log(z)
    w = z
    k = 0
    scale = 1.0 / 3
    while True:
        r = 1 - 3 * c * c / (w * w)
        if k >= first and abs(r - 1) >= 0.5 and (r == 0 or abs(cmath.phase(r)) >= BRANCH_ARG_LIMIT):
            raise BranchAmbiguityError(f"factor {r} at step {k} is near the negative reals")
        log_b += scale * cmath.log(r)
        w = r * w ** 3
        if abs(3 * c * c / (w * w)) * scale < 1e-18 or abs(w) > BAILOUT:
            break
        k += 1
        scale /= 3
    return cmath.exp(log_b)


def bottcher(c: complex, z: complex) -> complex:
    """B_c(z) for z outside the critical equipotential (principal branch)."""
    _check_finite(c, z)
    return _bottcher_product(c, z)


def bottcher_psi(c: complex) -> complex:
    """Psi(c) = B_c(2c); the first factor is exactly 1/4."""
    c = complex(c)
    _check_finite(c)
    if c == 0 or not escape_time(c, c, 2000).escaped:
        raise DynamicsError(f"c = {c} does not escape; Psi is undefined")
    z1 = 2 * c ** 3
    # B(2c) = 2c * (1/4)^{1/3} * (B(z1)/z1)^{1/3}, all principal
    return 2 * c * 0.25 ** (1 / 3) * (_bottcher_product(c, z1, first=0) / z1) ** (1 / 3)


# --- rays --------------------------------------------------------------------


@dataclass
class RayTrace:
    angle: Angle
    points: list[complex]
    potentials: list[float]
    final_potential: float
    landed_estimate: complex
    kind: str = "parameter"
    c: complex | None = None
    log_potentials: list[float] | None = None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["potential", "re", "im"])
        for t, p in zip(self.potentials, self.points):
            w.writerow([repr(t), repr(p.real), repr(p.imag)])
        return buf.getvalue()

    def to_json(self) -> dict:
        d = {
            "angle": str(self.angle),
            "kind": self.kind,
            "final_potential": self.final_potential,
            "landed_estimate": complex_json(self.landed_estimate),
            "points": [{"potential": t, **complex_json(p)} for t, p in zip(self.potentials, self.points)],
        }
        if self.c is not None:
            d["c"] = complex_json(self.c)
        return d


def complex_json(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def complex_from_json(d: dict) -> complex:
    return complex(d["re"], d["im"])


def _depth_for(t: float) -> int:
    return _depth_for_log(-math.log(t))


def _depth_for_log(s: float) -> int:
    """Smallest n with 3^n e^{-s} >= TARGET_LOG_RADIUS."""
    n = max(0, math.ceil((math.log(TARGET_LOG_RADIUS) + s) / math.log(3)))
    while n > 0 and (n - 1) * math.log(3) - s >= math.log(TARGET_LOG_RADIUS):
        n -= 1
    return n


def _phase(theta: Angle, n: int) -> float:
    """3^n theta mod 1, computed exactly."""
    return float(Fraction(3 ** n * theta.numerator % theta.denominator, theta.denominator))


def _param_orbit(c: complex, n: int) -> tuple[complex, complex]:
    """p_c^n(2c) and its derivative in c."""
    z, dz = 2 * c, 2.0 + 0j
    for _ in range(n):
        z, dz = z ** 3 - 3 * c * c * z, (3 * z * z - 3 * c * c) * dz - 6 * c * z
    return z, dz


def _dyn_orbit(c: complex, z: complex, n: int) -> tuple[complex, complex]:
    dz = 1.0 + 0j
    for _ in range(n):
        z, dz = z ** 3 - 3 * c * c * z, (3 * z * z - 3 * c * c) * dz
    return z, dz


def _wrap(x: complex) -> complex:
    im = (x.imag + math.pi) % (2 * math.pi) - math.pi
    return complex(x.real, im)


def _newton_log(orbit, x0: complex, target: complex, max_iter: int = 40) -> complex:
    """Solve log(orbit(x)) = target (imaginary part mod 2 pi)."""
    x = x0
    for _ in range(max_iter):
        try:
            z, dz = orbit(x)
        except OverflowError:
            raise ConvergenceError("orbit overflowed during Newton", x) from None
        if z == 0 or dz == 0 or not cmath.isfinite(z) or not cmath.isfinite(dz):
            raise ConvergenceError("orbit degenerate during Newton", x)
        f = _wrap(cmath.log(z) - target)
        dx = f * z / dz
        x -= dx
        if abs(dx) <= NEWTON_TOL * max(1.0, abs(x)):
            try:
                z, dz = orbit(x)
            except OverflowError:
                raise ConvergenceError("orbit overflowed during Newton", x) from None
            f = _wrap(cmath.log(z) - target)
            # residual floor set by rounding of x itself
            floor = 1e3 * sys.float_info.epsilon * abs(x * dz / z)
            if abs(f) < max(1e-7, floor):
                return x
            raise ConvergenceError("Newton stalled away from the ray", x)
    raise ConvergenceError("Newton did not converge", x)


def _target(theta: Angle, s: float) -> tuple[int, complex]:
    n = _depth_for_log(s)
    return n, complex(math.exp(n * math.log(3) - s), 2 * math.pi * _phase(theta, n))


def _trace(orbit_n, theta: Angle, x_start: complex, t_start: float, pot_end: float, ratio: float,
           kind: str, c=None, log_pot_end: float | None = None) -> RayTrace:
    """Continuation along decreasing potentials t_k = t_start * ratio^k.

    Potentials are handled through s = -log t, so traces can go far below
    the smallest double.  A failed step is retried with the step halved
    (in log potential) at most twice.  ``log_pot_end`` = -ln(pot_end)
    may be given instead of pot_end for targets below the double range.
    """
    if log_pot_end is None:
        if not pot_end > 0:
            raise ValueError("pot_end must be positive")
        s_end = -math.log(pot_end)
    else:
        s_end = float(log_pot_end)
        pot_end = math.exp(-s_end)
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie in (0, 1)")
    if s_end < -math.log(t_start):
        raise ValueError(f"pot_end {pot_end:.3g} lies above the starting potential {t_start:.3g}")
    h0 = -math.log(ratio)
    pts, logs = [x_start], [-math.log(t_start)]
    while logs[-1] < s_end - 1e-12:
        h = h0
        for attempt in range(3):
            s_new = min(logs[-1] + h, s_end)
            x = pts[-1]
            if len(pts) > 1:
                x = x + (pts[-1] - pts[-2]) * (s_new - logs[-1]) / (logs[-1] - logs[-2])
            n, target = _target(theta, s_new)
            try:
                x_new = _newton_log(lambda y: orbit_n(y, n), x, target)
            except ConvergenceError:
                x_new = None
            if x_new is not None and len(pts) > 1:
                expected = abs(pts[-1] - pts[-2]) * (s_new - logs[-1]) / (logs[-1] - logs[-2])
                if abs(x_new - pts[-1]) > 8 * expected + 1e-9:
                    x_new = None  # jumped to another branch of the ray equation
            if x_new is not None:
                break
            h /= 2
        else:
            raise ConvergenceError(f"ray {theta} diverged at potential {math.exp(-logs[-1]):.3e}", pts[-1])
        pts.append(x_new)
        logs.append(s_new)
    pots = [math.exp(-v) for v in logs]
    return RayTrace(theta, pts, pots, pot_end, pts[-1], kind, c, logs)


def trace_param_ray(theta: AngleLike, pot_end: float = 1e-5, ratio: float | None = None,
                    start_modulus: float = 10.0, log_pot_end: float | None = None) -> RayTrace:
    """Parameter ray of angle theta from |c| ~ start_modulus down to potential pot_end."""
    theta = as_angle(theta)
    ratio = SCHEDULE_RATIO if ratio is None else ratio
    w = start_modulus * CBRT2 * cmath.exp(2j * math.pi * float(theta))
    c0 = w / CBRT2
    t0 = math.log(abs(w))
    first = _newton_log(lambda y: _param_orbit(y, _depth_for(t0)), c0,
                        complex(3 ** _depth_for(t0) * t0, 2 * math.pi * _phase(theta, _depth_for(t0))))
    return _trace(_param_orbit, theta, first, t0, pot_end, ratio, "parameter", log_pot_end=log_pot_end)


def trace_dyn_ray(c: complex, theta: AngleLike, pot_end: float = 1e-5, ratio: float | None = None,
                  start_modulus: float | None = None, check_connected: bool = True,
                  log_pot_end: float | None = None) -> RayTrace:
    """Dynamical ray R_theta(c) from far out down to potential pot_end."""
    theta = as_angle(theta)
    c = complex(c)
    if check_connected and escape_time(c, c, 1000).escaped:
        raise DynamicsError(f"critical orbit of c = {c} escapes; pass check_connected=False to override")
    ratio = SCHEDULE_RATIO if ratio is None else ratio
    if start_modulus is None:
        start_modulus = 4 * escape_radius(c)
    z0 = start_modulus * cmath.exp(2j * math.pi * float(theta))
    t0 = math.log(start_modulus)
    orbit = lambda y, n: _dyn_orbit(c, y, n)
    n0 = _depth_for(t0)
    first = _newton_log(lambda y: orbit(y, n0), z0, complex(3 ** n0 * t0, 2 * math.pi * _phase(theta, n0)))
    return _trace(orbit, theta, first, t0, pot_end, ratio, "dynamical", c, log_pot_end)


# --- multipliers, centers and roots ------------------------------------------


def multipliers(c: complex, z: complex, n: int, kind: str = "D", tol: float = 1e-6,
                half_return: int | None = None):
    """(rho, ray multiplier, half multiplier or None) of the cycle through z.

    For kind "B" the cycle has period n = 2m and the half multiplier is
    -(p^m)'(z), provided -p^m(z) = z.
    """
    c, z = complex(c), complex(z)
    if kind == "B":
        m = half_return if half_return is not None else n // 2
        w, dw = _dyn_orbit(c, z, m)
        if abs(-w - z) > tol * max(1.0, abs(z)):
            raise DynamicsError(f"-p^{m}(z) differs from z by {abs(w + z):.2e}")
        half = -dw
        return half * half, half * half, half
    w, dw = _dyn_orbit(c, z, n)
    if abs(w - z) > tol * max(1.0, abs(z)):
        raise DynamicsError(f"p^{n}(z) differs from z by {abs(w - z):.2e}")
    return dw, dw, None


def _return_map(rec: ComajorRecord):
    """(k, sign): the first (half-)return is z -> sign * p^k(z)."""
    if rec.lam_type == "B":
        return rec.half_return, -1
    if rec.lam_type == "D":
        return rec.image_period, 1
    raise ValueError("Misiurewicz records have no hyperbolic component")


def _center_residual(c: complex, k: int, sign: int):
    """sign*p_c^k(c) - c and its c-derivative."""
    z, dz = c, 1.0 + 0j
    for _ in range(k):
        z, dz = z ** 3 - 3 * c * c * z, (3 * z * z - 3 * c * c) * dz - 6 * c * z
    return sign * z - c, sign * dz - 1


def _newton_center(c: complex, k: int, sign: int, max_iter: int = 100) -> complex | None:
    for _ in range(max_iter):
        f, df = _center_residual(c, k, sign)
        if df == 0 or not cmath.isfinite(f):
            return None
        dc = f / df
        c -= dc
        if abs(c) > 3:
            return None
        if abs(dc) < 1e-15 * max(1.0, abs(c)):
            break
    f, _ = _center_residual(c, k, sign)
    return c if abs(f) < 1e-12 else None


def _exact_return(c: complex, k: int, sign: int) -> bool:
    """No earlier (half-)return of the critical point."""
    z = c
    for j in range(1, k):
        z = step(c, z)
        if abs(z - c) < 1e-8 or abs(z + c) < 1e-8:
            return False
    return True


@dataclass
class ComponentSolve:
    comajor: ComajorRecord
    center: complex
    root: complex
    period_used: int
    kind: str
    root_cycle_point: complex = 0j
    root_multiplier: complex = 1 + 0j
    center_residual: float = 0.0

    def to_json(self) -> dict:
        return {
            "comajor": self.comajor.comajor.to_json(),
            "kind": self.kind,
            "period": self.period_used,
            "center": complex_json(self.center),
            "root": complex_json(self.root),
            "root_multiplier": complex_json(self.root_multiplier),
            "center_residual": self.center_residual,
        }


def _is_main(rec: ComajorRecord) -> bool:
    return rec.lam_type == "D" and rec.image_period == 1


def find_center(record: ComajorRecord, seed: complex | None = None, pot_end: float = 1e-5) -> complex:
    """Center of the hyperbolic component whose root the characteristic rays land at.

    Without a seed the two characteristic parameter rays are traced, and
    Newton is started from a ring of points around their endpoints; the
    center whose component root is closest to the ray endpoints wins.
    """
    if _is_main(record):
        return 0j
    k, sign = _return_map(record)
    n = record.image_period
    if seed is not None:
        c = _newton_center(complex(seed), k, sign)
        if c is None or not _exact_return(c, k, sign):
            raise ConvergenceError(f"Newton from {seed} did not reach a period-{n} center", c)
        _verify_center(c, n)
        return c
    ends = [trace_param_ray(x, pot_end).landed_estimate for x in record.comajor]
    mid = sum(ends) / 2
    best = None
    found = set()
    for radius in (1e-3, 3e-3, 1e-2, 3e-2, 1e-1):
        for j in range(16):
            s = mid + radius * cmath.exp(2j * math.pi * (j + 0.5) / 16)
            c = _newton_center(s, k, sign)
            if c is None or not _exact_return(c, k, sign):
                continue
            key = (round(c.real, 9), round(c.imag, 9))
            if key in found:
                continue
            found.add(key)
            try:
                r, _, _ = _root_from_center(c, k, sign)
            except ConvergenceError:
                continue
            d = abs(r - mid)
            if best is None or d < best[0]:
                best = (d, c)
        if best is not None and best[0] < 1e-2:
            break
    if best is None:
        raise ConvergenceError(f"no center found near {mid}")
    _verify_center(best[1], n)
    return best[1]


def _verify_center(c: complex, n: int) -> None:
    z = c
    for _ in range(n):
        z = step(c, z)
    if abs(z - c) > 1e-12:
        raise ConvergenceError(f"center residual {abs(z - c):.2e} exceeds 1e-12", c)


def _root_system(c, z, k, sign, lam):
    """Residuals and Jacobian of {sign p^k(z) - z, sign (p^k)'(z) - lam}."""
    w, wz, wzz, wc, wzc = z, 1.0 + 0j, 0j, 0j, 0j
    for _ in range(k):
        # derivatives of p(w) = w^3 - 3c^2 w along the orbit
        pw = 3 * w * w - 3 * c * c
        pww = 6 * w
        pc = -6 * c * w
        pwc = -6 * c
        nwz = pw * wz
        nwzz = pww * wz * wz + pw * wzz
        nwc = pw * wc + pc
        nwzc = pww * wc * wz + pwc * wz + pw * wzc
        w = w ** 3 - 3 * c * c * w
        wz, wzz, wc, wzc = nwz, nwzz, nwc, nwzc
    F = np.array([sign * w - z, sign * wz - lam])
    J = np.array([[sign * wc, sign * wz - 1], [sign * wzc, sign * wzz]])
    return F, J


def _solve_root_system(c, z, k, sign, lam, max_iter=60):
    for _ in range(max_iter):
        F, J = _root_system(c, z, k, sign, lam)
        try:
            d = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            raise ConvergenceError("singular Jacobian", c)
        c, z = c + d[0], z + d[1]
        if abs(d[0]) + abs(d[1]) < 1e-15 * max(1.0, abs(c) + abs(z)):
            break
    F, _ = _root_system(c, z, k, sign, lam)
    if not (abs(F[0]) < 1e-10 and abs(F[1]) < 1e-10):
        raise ConvergenceError(f"root system residual {abs(F[0]):.1e}, {abs(F[1]):.1e}", c)
    return complex(c), complex(z)


def _root_from_center(center: complex, k: int, sign: int, steps: int = 64):
    """Follow the multiplier from 0 to 1 starting at the superattracting cycle."""
    c, z = complex(center), complex(center)
    lam_path = [(j / steps) for j in range(1, steps + 1)]
    prev = None
    for lam in lam_path:
        guess_c, guess_z = c, z
        if prev is not None:
            guess_c, guess_z = 2 * c - prev[0], 2 * z - prev[1]
        try:
            nc, nz = _solve_root_system(guess_c, guess_z, k, sign, lam)
        except ConvergenceError:
            nc, nz = _solve_root_system(c, z, k, sign, lam)
        prev = (c, z)
        c, z = nc, nz
    return c, z, complex(sign * _dyn_orbit(c, z, k)[1])


def find_root(record: ComajorRecord, center: complex | None = None) -> complex:
    return solve_component(record, center).root


def solve_component(record: ComajorRecord, center: complex | None = None) -> ComponentSolve:
    if _is_main(record):
        raise DynamicsError("the main component has a center but no root")
    k, sign = _return_map(record)
    if center is None:
        center = find_center(record)
    root, z, mult = _root_from_center(center, k, sign)
    z_c = center
    for _ in range(record.image_period):
        z_c = step(center, z_c)
    return ComponentSolve(record, center, root, record.image_period, record.lam_type, z, mult, abs(z_c - center))


# --- landing -----------------------------------------------------------------


@dataclass
class LandingReport:
    angles: list[Angle]
    endpoints: list[complex]
    spread: float
    root: complex | None
    root_distance: float | None
    tol: float
    pot_end: float
    passed: bool
    note: str = ""
    log_pot_end: float | None = None

    def potential_text(self) -> str:
        if self.log_pot_end is not None:
            return f"exp(-{self.log_pot_end:g})"
        return f"{self.pot_end:.3g}"

    def to_json(self) -> dict:
        return {
            "angles": [str(a) for a in self.angles],
            "endpoints": [complex_json(z) for z in self.endpoints],
            "spread": self.spread,
            "root": None if self.root is None else complex_json(self.root),
            "root_distance": self.root_distance,
            "tol": self.tol,
            "pot_end": self.pot_end,
            "log_pot_end": self.log_pot_end,
            "passed": self.passed,
            "note": self.note,
        }


def verify_landing(target, pot_end: float = 1e-5, tol: float = 1e-3,
                   log_pot_end: float | None = None) -> LandingReport:
    """Trace the parameter rays of a Fatou record or a Misiurewicz class and
    check that they land together (and, for Fatou records, at the root)."""
    if isinstance(target, ComajorRecord):
        angles = list(target.comajor)
    else:
        angles = sorted((as_angle(x) for x in target), key=lambda a: a.value)
    traces = [trace_param_ray(a, pot_end, log_pot_end=log_pot_end) for a in angles]
    pot_end = traces[0].final_potential if traces else pot_end
    ends = [t.landed_estimate for t in traces]
    spread = max((abs(x - y) for x in ends for y in ends), default=0.0)
    root = dist = None
    note = ""
    if isinstance(target, ComajorRecord) and target.lam_type != "Misiurewicz":
        if _is_main(target):
            radius = math.sqrt(1 / 3)
            dist = max(abs(abs(e) - radius) for e in ends)
            note = "main component: distance to the circle of radius sqrt(1/3)"
        else:
            root = find_root(target)
            dist = max(abs(e - root) for e in ends)
    passed = spread <= tol and (dist is None or dist <= tol)
    return LandingReport(angles, ends, spread, root, dist, tol, pot_end, passed, note, log_pot_end)


# --- grids -------------------------------------------------------------------


@dataclass(frozen=True)
class PlaneGrid:
    """Pixel grid.  Pixel (row j, column k) samples the point

        center + width*(2k + 1 - nx)/(2 nx) + i*height*(ny - 1 - 2j)/(2 ny),

    so row 0 is the top edge and pixels are square."""

    center: complex
    width: float
    nx: int
    ny: int | None = None

    @property
    def height(self) -> float:
        return self.width * self.rows / self.nx

    @property
    def rows(self) -> int:
        return self.nx if self.ny is None else self.ny

    def samples(self) -> np.ndarray:
        if self.nx <= 0 or self.rows <= 0 or self.width <= 0:
            raise ValueError("grid dimensions and width must be positive")
        # odd integer numerators keep the offsets exactly antisymmetric, so a
        # grid centered at 0 is mapped onto itself by c -> -c, conj(c), i*c
        kx = 2 * np.arange(self.nx) + 1 - self.nx
        ky = self.rows - 1 - 2 * np.arange(self.rows)
        x = self.center.real + self.width * kx / (2 * self.nx)
        y = self.center.imag + self.height * ky / (2 * self.rows)
        return x[None, :] + 1j * y[:, None]

    def to_pixel(self, z: complex) -> tuple[float, float]:
        col = ((z.real - self.center.real) / self.width + 0.5) * self.nx - 0.5
        row = (0.5 - (z.imag - self.center.imag) / self.height) * self.rows - 0.5
        return col, row


@dataclass
class GridResult:
    grid: PlaneGrid
    escaped: np.ndarray
    steps: np.ndarray
    green: np.ndarray
    kind: str = "parameter"
    c: complex | None = None

    @property
    def members(self) -> np.ndarray:
        return ~self.escaped


def _iterate_grid(c: np.ndarray, z: np.ndarray, max_iter: int):
    R = np.maximum(4.0, 2.0 * np.abs(c))
    escaped = np.zeros(z.shape, dtype=bool)
    steps = np.full(z.shape, max_iter, dtype=np.int64)
    final = np.zeros(z.shape, dtype=complex)
    zz, cc = z.copy(), np.broadcast_to(c, z.shape).copy()
    Rr = np.broadcast_to(R, z.shape).copy()
    idx = np.arange(z.size).reshape(z.shape)
    flat_idx = idx.ravel()
    zz, cc, Rr = zz.ravel(), cc.ravel(), Rr.ravel()
    for n in range(max_iter + 1):
        out = np.abs(zz) > Rr
        if out.any():
            hit = flat_idx[out]
            escaped.ravel()[hit] = True
            steps.ravel()[hit] = n
            final.ravel()[hit] = zz[out]
            keep = ~out
            zz, cc, Rr, flat_idx = zz[keep], cc[keep], Rr[keep], flat_idx[keep]
        if n == max_iter or zz.size == 0:
            break
        zz = zz * zz * zz - 3 * cc * cc * zz
    g = np.zeros(z.shape)
    # log|z| / 3^n, written so that late escapes underflow instead of overflowing
    g[escaped] = np.exp(np.log(np.log(np.abs(final[escaped]))) - steps[escaped] * math.log(3))
    return escaped, steps, g


def _grid_blocks(c: np.ndarray, z: np.ndarray, max_iter: int, threads: int | None):
    """Iterate a grid, splitting the rows across a thread pool."""
    threads = threads or os.cpu_count() or 1
    rows = z.shape[0]
    if threads <= 1 or rows < 2 * threads:
        return _iterate_grid(c, z, max_iter)
    bounds = np.linspace(0, rows, threads + 1).astype(int)
    with ThreadPoolExecutor(threads) as pool:
        parts = list(pool.map(lambda ab: _iterate_grid(c[ab[0]:ab[1]], z[ab[0]:ab[1]], max_iter),
                              zip(bounds[:-1], bounds[1:])))
    return tuple(np.concatenate([p[i] for p in parts]) for i in range(3))


def membership_grid(grid: PlaneGrid, max_iter: int = 1000, threads: int | None = None) -> GridResult:
    """Escape of the critical orbit c -> p_c(c) -> ... for every pixel."""
    c = grid.samples()
    esc, st, g = _grid_blocks(c, c, max_iter, threads)
    return GridResult(grid, esc, st, g, "parameter")


def julia_grid(c: complex, grid: PlaneGrid, max_iter: int = 1000, threads: int | None = None) -> GridResult:
    z = grid.samples()
    esc, st, g = _grid_blocks(np.full(z.shape, complex(c)), z, max_iter, threads)
    return GridResult(grid, esc, st, g, "dynamical", complex(c))
