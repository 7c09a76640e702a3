"""Command-line surface.

Subcommands construct single orbits, run family-wide invariant reports,
trace and classify center loci, dump raw trajectories, and check the radii
extremes.  Every number is written with 17 significant digits so output
files round-trip to the exact double and identical configurations produce
byte-identical files.

Exit codes: 0 all good, 1 usage or input error, 2 an invariant check
failed, 3 results are fine but the aspect ratio was flagged as
ill-conditioned (nearly circular).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .billiard import (
    Ellipse,
    billiard_constants,
    chord_caustic_parameter,
    caustic_kind,
    joachimsthal,
    make_ray,
    trajectory,
)
from .invariants import (
    classify_locus,
    extremal_radii,
    inradius_to_circumradius,
    invariant_report,
    locus_trace,
    sweep_extremal_radii,
)
from .orbits import TAU, orbit_at_parameter
from .triangles import CenterKind, center, metrics

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2
EXIT_FLAGGED = 3

EXTREMES_ATOL = 1e-6

_LOCUS_KINDS = ("X1", "X2", "X3", "X5", "X6", "X9", "intouch")


def _fmt(x: float) -> str:
    """Round-trip-safe decimal form (17 significant digits)."""
    return format(float(x), ".17g")


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _fmt(value)
    return str(value)


def _csv_text(header: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row[key]) for key in header])
    return buf.getvalue()


def _json_text(payload) -> str:
    out = io.StringIO()
    _write_json(out, payload, 0)
    out.write("\n")
    return out.getvalue()


def _write_json(out, value, depth: int) -> None:
    # hand-rolled so floats keep the same 17-digit form as the CSV cells
    pad = "  " * depth
    inner = "  " * (depth + 1)
    if isinstance(value, dict):
        if not value:
            out.write("{}")
            return
        out.write("{\n")
        for i, (key, item) in enumerate(value.items()):
            out.write(f"{inner}{json.dumps(key)}: ")
            _write_json(out, item, depth + 1)
            out.write(",\n" if i < len(value) - 1 else "\n")
        out.write(pad + "}")
    elif isinstance(value, (list, tuple)):
        if not value:
            out.write("[]")
            return
        out.write("[\n")
        for i, item in enumerate(value):
            out.write(inner)
            _write_json(out, item, depth + 1)
            out.write(",\n" if i < len(value) - 1 else "\n")
        out.write(pad + "]")
    elif isinstance(value, bool):
        out.write("true" if value else "false")
    elif isinstance(value, float):
        out.write(_fmt(value))
    elif isinstance(value, int):
        out.write(str(value))
    elif value is None:
        out.write("null")
    else:
        out.write(json.dumps(value))


def _emit(args, config: dict, header: list[str], rows: list[dict],
          extra: dict | None = None) -> None:
    if args.format == "csv":
        text = _csv_text(header, rows)
    else:
        payload = {"config": config}
        if extra:
            payload.update(extra)
        payload["rows"] = rows
        text = _json_text(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _base_config(args, command: str) -> dict:
    return {"command": command, "a": args.a, "b": args.b,
            "format": args.format}


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on bad flags; usage errors are 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=float, required=True,
                        help="semi-major axis (a > b)")
    common.add_argument("--b", type=float, required=True,
                        help="semi-minor axis")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output encoding (default csv)")
    common.add_argument("--out", default=None, metavar="PATH",
                        help="write output to PATH instead of stdout")

    parser = _Parser(prog="ebilliards",
                     description="Triangular orbit families in an elliptic "
                                 "billiard: orbits, invariants, loci.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", parents=[common],
                       help="one orbit with metrics and centers")
    p.add_argument("--t", type=float, default=0.0,
                   help="boundary parameter of the first vertex")

    p = sub.add_parser("report", parents=[common],
                       help="family-wide invariant conservation report")
    p.add_argument("--samples", type=int, default=360)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0,
                   help="seed for the randomized map-validation rows")

    p = sub.add_parser("locus", parents=[common],
                       help="trace a center locus and classify it")
    p.add_argument("--kind", required=True, choices=_LOCUS_KINDS)
    p.add_argument("--samples", type=int, default=360)

    p = sub.add_parser("trajectory", parents=[common],
                       help="raw bounce trajectory with conserved columns")
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--y0", type=float, required=True)
    p.add_argument("--dx", type=float, required=True)
    p.add_argument("--dy", type=float, required=True)
    p.add_argument("--bounces", type=int, default=50)

    p = sub.add_parser("extremes", parents=[common],
                       help="closed-form radius extremes vs a sweep")
    p.add_argument("--samples", type=int, default=720)

    sub.add_parser("constants", parents=[common],
                   help="derived constants of the orbit family")
    return parser


def cmd_constants(args) -> int:
    e = Ellipse(args.a, args.b)
    cons = billiard_constants(e)
    row = {
        "a": e.a,
        "b": e.b,
        "c2": cons.c2,
        "delta": cons.delta,
        "gamma": cons.gamma,
        "perimeter": cons.L,
        "caustic_a": cons.a_c,
        "caustic_b": cons.b_c,
        "cosine_circle_radius": cons.r_star,
        "inradius_to_circumradius": inradius_to_circumradius(e),
        "caustic_axis_ratio_sum": cons.a_c / e.a + cons.b_c / e.b,
        "caustic_axis_ratio_sum_inverted": e.a / cons.a_c + e.b / cons.b_c,
        "near_circular": e.near_circular,
    }
    _emit(args, _base_config(args, "constants"), list(row), [row])
    return EXIT_FLAGGED if e.near_circular else EXIT_OK


def cmd_orbit(args) -> int:
    e = Ellipse(args.a, args.b)
    t = args.t % TAU
    orbit = orbit_at_parameter(e, t)
    m = metrics(orbit.vertices)
    row = {
        "t": t,
        "cos_alpha": orbit.cos_alpha,
        "p1_x": float(orbit.p1[0]), "p1_y": float(orbit.p1[1]),
        "p2_x": float(orbit.p2[0]), "p2_y": float(orbit.p2[1]),
        "p3_x": float(orbit.p3[0]), "p3_y": float(orbit.p3[1]),
        "s1": m.s1, "s2": m.s2, "s3": m.s3,
        "perimeter": m.perimeter,
        "area": m.area,
        "inradius": m.r,
        "circumradius": m.R,
        "nine_point_radius": m.r9,
        "theta1": m.theta1, "theta2": m.theta2, "theta3": m.theta3,
    }
    for kind in CenterKind:
        point = center(orbit.vertices, kind)
        row[f"{kind.value.lower()}_x"] = float(point[0])
        row[f"{kind.value.lower()}_y"] = float(point[1])
    config = _base_config(args, "orbit")
    config["t"] = t
    _emit(args, config, list(row), [row])
    return EXIT_FLAGGED if e.near_circular else EXIT_OK


def cmd_report(args) -> int:
    e = Ellipse(args.a, args.b)
    reports = invariant_report(
        e, n_samples=args.samples, tolerance=args.tolerance, seed=args.seed
    )
    header = ["name", "closed_form", "samples", "min", "max", "mean",
              "spread_rel", "tolerance", "absolute", "ill_conditioned",
              "passed", "note"]
    rows = [
        {
            "name": r.name,
            "closed_form": r.closed_form,
            "samples": r.samples,
            "min": r.vmin,
            "max": r.vmax,
            "mean": r.mean,
            "spread_rel": r.spread_rel,
            "tolerance": r.tolerance,
            "absolute": r.absolute,
            "ill_conditioned": r.ill_conditioned,
            "passed": r.passed,
            "note": r.note,
        }
        for r in reports
    ]
    config = _base_config(args, "report")
    config.update({"samples": args.samples, "tolerance": args.tolerance,
                   "seed": args.seed})
    _emit(args, config, header, rows)
    if not all(r.passed for r in reports):
        return EXIT_FAILURE
    return EXIT_FLAGGED if e.near_circular else EXIT_OK


def cmd_locus(args) -> int:
    e = Ellipse(args.a, args.b)
    kind = args.kind if args.kind == "intouch" else CenterKind[args.kind]
    points = locus_trace(e, kind, args.samples)
    label, fit = classify_locus(points, e.a)
    ts = np.arange(args.samples) * (TAU / args.samples)
    rows = []
    if args.kind == "intouch":
        header = ["t", "vertex", "x", "y"]
        for i, p in enumerate(points):
            rows.append({"t": float(ts[i // 3]), "vertex": i % 3 + 1,
                         "x": float(p[0]), "y": float(p[1])})
    else:
        header = ["t", "x", "y"]
        for i, p in enumerate(points):
            rows.append({"t": float(ts[i]), "x": float(p[0]),
                         "y": float(p[1])})
    fit_info = {
        "classification": label,
        "residual_rms": fit.residual_rms if fit else 0.0,
        "coefficients": list(fit.coefficients) if fit else None,
    }
    config = _base_config(args, "locus")
    config.update({"kind": args.kind, "samples": args.samples})
    _emit(args, config, header, rows, extra={"fit": fit_info})
    if args.format == "csv":
        # the CSV table stays strictly tabular; summary goes to the terminal
        stream = sys.stdout if args.out else sys.stderr
        stream.write(
            f"classification={label} residual_rms={_fmt(fit_info['residual_rms'])}\n"
        )
    return EXIT_FLAGGED if e.near_circular else EXIT_OK


def cmd_trajectory(args) -> int:
    e = Ellipse(args.a, args.b)
    if args.bounces < 1:
        raise ValueError("need at least one bounce")
    ray = make_ray(e, (args.x0, args.y0), (args.dx, args.dy))
    states = trajectory(e, ray, args.bounces)
    header = ["bounce", "x", "y", "dir_x", "dir_y", "joachimsthal",
              "caustic_parameter", "branch"]
    rows = []
    for i in range(1, len(states)):
        prev_pt = states[i - 1].origin
        cur = states[i]
        lam = chord_caustic_parameter(e, prev_pt, cur.origin)
        rows.append({
            "bounce": i,
            "x": float(cur.origin[0]),
            "y": float(cur.origin[1]),
            "dir_x": float(cur.direction[0]),
            "dir_y": float(cur.direction[1]),
            "joachimsthal": joachimsthal(e, cur),
            "caustic_parameter": lam,
            "branch": caustic_kind(e, lam),
        })
    config = _base_config(args, "trajectory")
    config.update({"x0": args.x0, "y0": args.y0, "dx": args.dx,
                   "dy": args.dy, "bounces": args.bounces})
    _emit(args, config, header, rows)
    return EXIT_FLAGGED if e.near_circular else EXIT_OK


def cmd_extremes(args) -> int:
    e = Ellipse(args.a, args.b)
    closed = extremal_radii(e)
    sweep = sweep_extremal_radii(e, args.samples)
    rows = []
    for name, cf in (("r_min", closed.r_min), ("r_max", closed.r_max),
                     ("R_min", closed.R_min), ("R_max", closed.R_max)):
        value = sweep[name]
        rows.append({
            "quantity": name,
            "closed_form": cf,
            "sweep_value": value,
            "sweep_t": sweep[f"t_{name}"],
            "within_tolerance": abs(value - cf) <= EXTREMES_ATOL,
        })
    header = ["quantity", "closed_form", "sweep_value", "sweep_t",
              "within_tolerance"]
    config = _base_config(args, "extremes")
    config["samples"] = args.samples
    _emit(args, config, header, rows)
    if not all(row["within_tolerance"] for row in rows):
        return EXIT_FAILURE
    return EXIT_FLAGGED if e.near_circular else EXIT_OK


_COMMANDS = {
    "constants": cmd_constants,
    "orbit": cmd_orbit,
    "report": cmd_report,
    "locus": cmd_locus,
    "trajectory": cmd_trajectory,
    "extremes": cmd_extremes,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except ValueError as exc:
        sys.stderr.write(f"ebilliards {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
