"""Command-line entry point: ``symcubic <subcommand> ...``.

Exit status is 0 on success, 1 when a verification fails (an illegal pair,
a landing check outside tolerance, a numerical solver that gives up) and 2
on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import dynamics, render
from .circle import Angle, Chord, is_under, orbit_info
from .comajor import NotAComajorError, class_of, classify, enumerate_comajors, is_legal
from .lamination import build_lamination, critical_gap, induce, main_gap_edge

EPILOG = """\
environment:
  SYMCUBIC_NEWTON_TOL       relative Newton step tolerance for rays (default 1e-13)
  SYMCUBIC_SCHEDULE_RATIO   geometric ratio of the ray potential schedule (default 0.85)

exit status: 0 success, 1 verification failure, 2 usage error
"""


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload or {}


# --- argument parsing helpers -----------------------------------------------


def angle(text: str) -> Angle:
    try:
        return Angle(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational angle: {text!r}")


def complex_arg(text: str) -> complex:
    """Accept ``re,im`` or a Python complex literal such as ``0.4+0.4j``."""
    try:
        if "," in text:
            re, im = text.split(",")
            return complex(float(re), float(im))
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _chord(args) -> Chord:
    return Chord(args.a, args.b)


def _record(args):
    c = _chord(args)
    try:
        return classify(c)
    except NotAComajorError as e:
        raise VerificationFailure(str(e), {"pair": c.to_json(), "legal": False})


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=1))
    else:
        print(text)


def _cx(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}i"


# --- subcommands --------------------------------------------------------------


def _type_phrase(rec) -> str:
    if rec.lam_type == "Misiurewicz":
        return f"Misiurewicz, preperiod {rec.preperiod_of_comajor}, period {rec.image_period}"
    return f"type {rec.lam_type}, period {rec.image_period}"


def cmd_legal(args):
    c = _chord(args)
    try:
        report = is_legal(c)
    except NotAComajorError as e:
        raise VerificationFailure(f"illegal: {e}", {"pair": c.to_json(), "legal": False, "reason": str(e)})
    if not report:
        witness = [w.to_json() for w in report.witness]
        raise VerificationFailure(
            f"illegal: {report.reason}; witness " + ", ".join(str(w) for w in report.witness),
            {"pair": c.to_json(), "legal": False, "reason": report.reason, "witness": witness},
        )
    payload = {"pair": c.to_json(), "legal": True}
    text = "legal"
    try:
        rec = classify(c)
    except NotAComajorError as e:
        payload["note"] = str(e)
    else:
        payload.update(type=rec.lam_type, period=rec.image_period)
        text = f"legal, {_type_phrase(rec)}"
    _emit(args, payload, text)


def cmd_classify(args):
    rec = _record(args)
    payload = rec.to_json()
    payload.update(legal=True, gap_period=rec.gap_period, half_return=rec.half_return,
                   sibling_major=rec.sibling_major.to_json())
    if rec.lam_type == "Misiurewicz":
        text = f"legal, {_type_phrase(rec)}, major {rec.major}"
    else:
        text = f"legal, type {rec.lam_type}, periodic major {rec.major}, gap period {rec.gap_period}"
    _emit(args, payload, text)


def cmd_atlas(args):
    atlas = enumerate_comajors(args.max_period, args.max_preperiod, args.period_mode)
    if args.out:
        atlas.save(args.out)
    n_fatou = len(atlas.fatou_records())
    payload = {"comajors": len(atlas), "fatou": n_fatou, "misiurewicz_classes": len(atlas.misiurewicz_classes),
               "out": args.out}
    if not args.out:
        payload["atlas"] = atlas.to_json()
    text = f"{len(atlas)} comajors ({n_fatou} Fatou, {len(atlas.misiurewicz_classes)} Misiurewicz classes)"
    if args.out:
        text += f" written to {args.out}"
    _emit(args, payload, text)


def _lamination(args):
    rec = _record(args)
    if rec.lam_type == "Misiurewicz":
        raise UsageError("laminations are built for Fatou comajors only")
    return build_lamination(rec, args.depth)


def cmd_lam(args):
    lam = _lamination(args)
    lam.check()
    gap = critical_gap(lam)
    if args.json:
        lam.save(args.json)
    if args.svg:
        spec = render.RenderSpec(chord_mode=args.chords)
        with open(args.svg, "w") as fh:
            fh.write(render.render_lamination(lam, spec))
    payload = {"comajor": lam.comajor_record.comajor.to_json(), "depth": lam.depth, "leaves": len(lam),
               "gap_edges": len(gap.edges), "gap_kind": gap.kind, "checked": True}
    _emit(args, payload, f"{len(lam)} leaves at depth {lam.depth}; critical gap has {len(gap.edges)} edges; "
                         "unlinked, symmetric, forward invariant")


def cmd_maingap(args):
    try:
        recs = main_gap_edge(Fraction(args.rotation))
    except (ValueError, ZeroDivisionError, LookupError) as e:
        raise UsageError(str(e))
    payload = {"rotation": args.rotation, "comajors": [r.to_json() for r in recs]}
    lines = [f"{r.comajor}  {_type_phrase(r)}, major {r.major}" for r in recs]
    _emit(args, payload, "\n".join(lines))


def cmd_induce(args):
    lam = _lamination(args)
    gap = critical_gap(lam)
    quad = Chord(args.quad[0], args.quad[1])
    out = induce(gap, quad)
    try:
        legal = bool(is_legal(out))
    except NotAComajorError:
        legal = False
    under = not out.is_diameter and is_under(out, lam.comajor_record.comajor)
    payload = {"quadratic": quad.to_json(), "induced": out.to_json(), "legal": legal, "under_comajor": under}
    text = f"{out}  ({'legal' if legal else 'illegal'}, {'under' if under else 'not under'} "\
           f"{lam.comajor_record.comajor})"
    if not (legal and under):
        raise VerificationFailure(text, payload)
    _emit(args, payload, text)


def _plane_spec(args, target, rays, marks):
    palette = render.Palette.load(args.palette) if args.palette else render.Palette()
    n = args.pixels
    return render.RenderSpec(target=target, center=args.center, width=args.width, pixels=(n, n),
                             rays=rays, marks=marks, palette=palette)


def cmd_param_render(args):
    grid = dynamics.PlaneGrid(args.center, args.width, args.pixels)
    res = dynamics.membership_grid(grid, args.max_iter, args.threads)
    rays = [dynamics.trace_param_ray(t, args.pot_end) for t in args.rays]
    png = render.render_plane(res, _plane_spec(args, "parameter-plane", rays, args.mark))
    with open(args.out, "wb") as fh:
        fh.write(png)
    _emit(args, {"out": args.out, "members": int(res.members.sum()), "pixels": args.pixels},
          f"wrote {args.out} ({int(res.members.sum())} member pixels)")


def cmd_julia_render(args):
    grid = dynamics.PlaneGrid(args.center, args.width, args.pixels)
    res = dynamics.julia_grid(args.c, grid, args.max_iter, args.threads)
    rays = [dynamics.trace_dyn_ray(args.c, t, args.pot_end) for t in args.rays]
    png = render.render_plane(res, _plane_spec(args, "dynamical-plane", rays, args.mark))
    with open(args.out, "wb") as fh:
        fh.write(png)
    _emit(args, {"out": args.out, "filled_pixels": int(res.members.sum()), "pixels": args.pixels},
          f"wrote {args.out} ({int(res.members.sum())} filled pixels)")


def cmd_ray(args):
    if (args.param is None) == (args.dyn is None):
        raise UsageError("give exactly one of --param THETA or --dyn C THETA")
    if args.param is not None:
        tr = dynamics.trace_param_ray(angle(args.param), args.pot_end, log_pot_end=args.log_pot_end)
    else:
        c, theta = complex_arg(args.dyn[0]), angle(args.dyn[1])
        tr = dynamics.trace_dyn_ray(c, theta, args.pot_end, log_pot_end=args.log_pot_end)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(tr.to_csv())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(tr.to_json(), fh)
    payload = {"angle": str(tr.angle), "kind": tr.kind, "points": len(tr.points),
               "final_potential": tr.final_potential, "landed_estimate": dynamics.complex_json(tr.landed_estimate)}
    _emit(args, payload, f"{tr.kind} ray {tr.angle}: {len(tr.points)} points, "
                         f"endpoint {_cx(tr.landed_estimate)} at potential {tr.final_potential:.3g}")


def cmd_center(args):
    rec = _record(args)
    c = dynamics.find_center(rec, args.seed)
    _emit(args, {"comajor": rec.comajor.to_json(), "center": dynamics.complex_json(c)}, f"center {_cx(c)}")


def cmd_root(args):
    rec = _record(args)
    if rec.lam_type == "Misiurewicz":
        raise UsageError("Misiurewicz comajors have no hyperbolic component")
    if rec.lam_type == "D" and rec.image_period == 1:
        raise UsageError("the main component has a center but no root")
    sol = dynamics.solve_component(rec, args.seed)
    _emit(args, sol.to_json(), f"center {_cx(sol.center)}\nroot {_cx(sol.root)}\n"
                               f"root multiplier {_cx(sol.root_multiplier)}")


def cmd_verify_landing(args):
    if args.cls is not None:
        if args.a is not None:
            raise UsageError("give either a comajor A B or --class THETA")
        info = orbit_info(args.cls)
        if info.preperiod < 2:
            raise UsageError("--class expects a Misiurewicz angle (preperiod at least 2)")
        atlas = enumerate_comajors(info.period, info.preperiod, "exact")
        target = class_of(args.cls, atlas)
    else:
        if args.a is None or args.b is None:
            raise UsageError("give a comajor A B or --class THETA")
        target = _record(args)
    rep = dynamics.verify_landing(target, args.pot_end, args.tol, log_pot_end=args.log_pot_end)
    lines = [f"{a}: {_cx(z)}" for a, z in zip(rep.angles, rep.endpoints)]
    lines.append(f"spread {rep.spread:.3e}")
    if rep.root_distance is not None:
        what = "distance to root" if rep.root is not None else "distance to |c| = sqrt(1/3)"
        lines.append(f"{what} {rep.root_distance:.3e}")
    lines.append(f"{'PASS' if rep.passed else 'FAIL'} at potential {rep.potential_text()}, tol {rep.tol:g}")
    if not rep.passed:
        raise VerificationFailure("\n".join(lines), rep.to_json())
    _emit(args, rep.to_json(), "\n".join(lines))


def cmd_selftest(args):
    from .selftest import run_all

    results = run_all(stop_on_failure=True, out=None if args.format == "json" else sys.stdout)
    payload = {"results": [{"name": n, "passed": ok, "detail": d} for n, ok, d in results]}
    if not all(ok for _, ok, _ in results):
        bad = next(n for n, ok, _ in results if not ok)
        raise VerificationFailure(f"selftest failed: {bad}", payload)
    if args.format == "json":
        print(json.dumps(payload, indent=1))
    else:
        print(f"all {len(results)} checks passed")


# --- parser ------------------------------------------------------------------


def _pair(p):
    p.add_argument("a", type=angle, help="first comajor endpoint, e.g. 5/48")
    p.add_argument("b", type=angle, help="second comajor endpoint")


def _plane_flags(p, width):
    p.add_argument("--center", type=complex_arg, default=0j, help="image center as re,im (default 0,0)")
    p.add_argument("--width", type=positive_float, default=width, help="width of the region")
    p.add_argument("--pixels", type=positive_int, default=512, help="image side in pixels")
    p.add_argument("--max-iter", type=positive_int, default=1000)
    p.add_argument("--rays", type=angle, nargs="*", default=[], help="ray angles to overlay")
    p.add_argument("--pot-end", type=positive_float, default=1e-5)
    p.add_argument("--mark", type=complex_arg, action="append", default=[], help="marked point (repeatable)")
    p.add_argument("--palette", help="JSON style file")
    p.add_argument("--out", required=True, help="output PNG")


def build_parser() -> argparse.ArgumentParser:
    def common_flags(default):
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--format", choices=("text", "json"), default=default("text"), help="report format")
        p.add_argument("--threads", type=positive_int, default=default(None),
                       help="worker threads for grid work (default: logical cores)")
        return p

    # subcommands accept the flags too, without clobbering values given earlier
    common = common_flags(lambda v: argparse.SUPPRESS)
    parser = argparse.ArgumentParser(prog="symcubic", parents=[common_flags(lambda v: v)], epilog=EPILOG,
                                     formatter_class=argparse.RawDescriptionHelpFormatter,
                                     description="Combinatorics and dynamics of symmetric cubic polynomials.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_, epilog=EPILOG,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.set_defaults(func=fn)
        return p

    _pair(add("legal", cmd_legal, "legality of a symmetric pair"))
    _pair(add("classify", cmd_classify, "majors, type and period of a comajor"))

    p = add("atlas", cmd_atlas, "enumerate comajors")
    p.add_argument("--max-period", type=positive_int, required=True)
    p.add_argument("--max-preperiod", type=positive_int, default=1)
    p.add_argument("--period-mode", choices=("divisors", "upto", "exact"), default="divisors")
    p.add_argument("--out", help="write atlas JSON here")

    p = add("lam", cmd_lam, "pull back the lamination of a comajor")
    _pair(p)
    p.add_argument("--depth", type=positive_int, default=8)
    p.add_argument("--svg", help="write a disk diagram")
    p.add_argument("--json", help="write the leaves as JSON")
    p.add_argument("--chords", choices=("geodesic", "straight"), default="geodesic")

    p = add("maingap", cmd_maingap, "comajors on the main gap with a rotation number")
    p.add_argument("rotation", help="rotation number p/q in (0,1)")

    p = add("induce", cmd_induce, "tuned comajor from a quadratic major")
    _pair(p)
    p.add_argument("--quad", type=angle, nargs=2, required=True, metavar=("P1", "P2"))
    p.add_argument("--depth", type=positive_int, default=8)

    _plane_flags(add("param-render", cmd_param_render, "picture of the connectedness locus"), 4.0)
    p = add("julia-render", cmd_julia_render, "picture of a filled Julia set")
    p.add_argument("--c", type=complex_arg, required=True, help="parameter as re,im")
    _plane_flags(p, 3.0)

    p = add("ray", cmd_ray, "trace a parameter or dynamical ray")
    p.add_argument("--param", metavar="THETA")
    p.add_argument("--dyn", nargs=2, metavar=("C", "THETA"))
    p.add_argument("--pot-end", type=positive_float, default=1e-5)
    p.add_argument("--log-pot-end", type=positive_float, default=None,
                   help="trace down to potential exp(-S); overrides --pot-end")
    p.add_argument("--csv")
    p.add_argument("--json")

    for name, fn, help_ in (("center", cmd_center, "center of the hyperbolic component"),
                            ("root", cmd_root, "root of the hyperbolic component")):
        p = add(name, fn, help_)
        _pair(p)
        p.add_argument("--seed", type=complex_arg, default=None, help="Newton seed (re,im)")

    p = add("verify-landing", cmd_verify_landing, "check that characteristic rays land together")
    p.add_argument("a", type=angle, nargs="?")
    p.add_argument("b", type=angle, nargs="?")
    p.add_argument("--class", dest="cls", type=angle, metavar="THETA", help="Misiurewicz angle")
    p.add_argument("--pot-end", type=positive_float, default=1e-5)
    p.add_argument("--log-pot-end", type=positive_float, default=None)
    p.add_argument("--tol", type=positive_float, default=1e-3)

    add("selftest", cmd_selftest, "run the invariant suites")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        args.func(args)
    except UsageError as e:
        print(f"symcubic {args.command}: {e}", file=sys.stderr)
        return 2
    except VerificationFailure as e:
        if args.format == "json":
            print(json.dumps({"passed": False, "message": str(e), **e.payload}, indent=1))
        else:
            print(str(e))
        return 1
    except (dynamics.DynamicsError, render.RenderError) as e:
        print(f"symcubic {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        last = getattr(e, "last", None)
        if last is not None:
            print(f"last good value: {last}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"symcubic {args.command}: {e}", file=sys.stderr)
        return 2
    return 0


def main_entry() -> None:  # pragma: no cover
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
