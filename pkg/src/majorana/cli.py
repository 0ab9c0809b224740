"""Command line interface: conversions, entropy, orbit geometry, channel
spectra clouds, and constellation optimization, with JSON/CSV/SVG output.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import lieb_solovej, orbit_geometry, sphere_opt, states
from .errors import InputError, MajoranaError, NumericalError
from .husimi import QuadratureConfig, wehrl_entropy
from .lieb_solovej import DensityMatrix, SpectraCloud, barycentric, spectrum

DEFAULT_SEED = 20260101


def _fmt(x: float) -> str:
    return repr(float(x))


def _parse_z(text: str) -> complex:
    if text.strip().lower() in ("inf", "infinity"):
        return complex("inf")
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise InputError(f"cannot parse {text!r} as a complex number (use 're,im' or 'inf')")


def _emit(obj, out_path):
    text = json.dumps(obj.to_dict(), indent=1) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# CSV / SVG builders (pure string functions, deterministic)


def spectra_csv(cloud: SpectraCloud) -> str:
    rank = cloud.steps + 1
    header = ["kind"] + [f"lambda{i+1}" for i in range(rank)] + ["bary_x", "bary_y"]
    lines = [",".join(header)]

    def row(kind, spec):
        top = spec.top(rank)
        cells = [kind] + [_fmt(v) for v in top]
        if rank == 3:
            x, y = barycentric(top)
            cells += [_fmt(x), _fmt(y)]
        else:
            cells += ["", ""]
        return ",".join(cells)

    for k, spec in cloud.number_images:
        lines.append(row(f"number_{k}", spec))
    for _k_low, _k_high, curve in cloud.segments:
        for spec in curve:
            lines.append(row("segment", spec))
    for spec in cloud.samples:
        lines.append(row("sample", spec))
    return "\n".join(lines) + "\n"


def _simplex_xy(top3, size=600, margin=40):
    x, y = barycentric(top3)
    span = size - 2 * margin
    return margin + x * span, size - margin - y * span


def spectra_svg(cloud: SpectraCloud, size=600) -> str:
    """Scatter of the cloud in the eigenvalue simplex.

    Every point is drawn at all permutations of its spectrum, which gives
    the symmetric six-fold layout.
    """
    from itertools import permutations

    margin = 40
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>']
    corners = [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)]
    pts = " ".join("%.2f,%.2f" % _simplex_xy(c, size, margin) for c in corners)
    parts.append(f'<polygon points="{pts}" fill="none" stroke="black" stroke-width="1"/>')

    def scatter(spec, radius, color):
        out = []
        for perm in sorted(set(permutations(spec.top(3)))):
            x, y = _simplex_xy(perm, size, margin)
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{radius}" fill="{color}"/>')
        return out

    for spec in cloud.samples:
        parts.extend(scatter(spec, 1.0, "black"))
    for _kl, _kh, curve in cloud.segments:
        for spec in curve:
            parts.extend(scatter(spec, 1.2, "#3366cc"))
    for _k, spec in cloud.number_images:
        parts.extend(scatter(spec, 3.0, "red"))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def sphere_svg(c: states.Constellation, size=400) -> str:
    """Orthographic view of a constellation; far-side stars drawn hollow."""
    r = size / 2 - 20
    cx = cy = size / 2
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>',
             f'<circle cx="{cx}" cy="{cy}" r="{r}" fill="none" stroke="black"/>']
    for v in c.unit_vectors():
        x, y = cx + r * v[0], cy - r * v[1]
        if v[2] >= 0:
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="5" fill="black"/>')
        else:
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="5" fill="none" '
                         'stroke="black"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def table_csv(records) -> str:
    header = ("n,objective,family_type,matches_table,best_value,"
              "wehrl_at_optimum,thomson_at_optimum,tammes_at_optimum")
    lines = [header]
    for rec in records:
        vals = rec["values_at_optimum"]
        lines.append(",".join([
            str(rec["n"]), rec["objective"], rec["family_type"],
            str(rec["matches_table"]).lower(), _fmt(rec["best_value"]),
            _fmt(vals["wehrl"]), _fmt(vals["thomson"]), _fmt(vals["tammes"])]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_convert(args):
    if bool(args.state) == bool(args.stars):
        raise InputError("give exactly one of --state or --stars")
    if args.state:
        s = states.load_state(args.state).require_normalized(1e-9).normalized()
        _emit(states.state_to_constellation(s), args.out)
    else:
        c = states.load_constellation(args.stars)
        _emit(states.constellation_to_state(c), args.out)
    return 0


def _cmd_coherent(args):
    z = _parse_z(args.z)
    _emit(states.coherent_state(z, args.n), args.out)
    return 0


def _quad_from_args(args):
    return QuadratureConfig(n_theta=args.qtheta, n_phi=args.qphi, tol=args.qtol,
                            max_refinements=args.qmax_refine)


def _cmd_wehrl(args):
    if args.state:
        s = states.load_state(args.state).require_normalized(1e-9)
    elif args.coherent:
        if args.n is None:
            raise InputError("--coherent needs --n")
        s = states.coherent_state(_parse_z(args.z), args.n)
    else:
        raise InputError("give --state or --coherent")
    res = wehrl_entropy(s, _quad_from_args(args))
    print(f"wehrl_entropy = {_fmt(res.value)} (achieved tolerance {res.achieved_tol:.3e}, "
          f"grid {res.n_theta}x{res.n_phi})")
    return 0


def _cmd_geometry(args):
    ks = [args.k] if args.k is not None else list(range(args.n + 1))
    lines = ["n,k,g_closed,w_closed,g_numeric,w_numeric,g_error,w_error"]
    for k in ks:
        g_c, w_c = orbit_geometry.orbit_form_closed(args.n, k)
        g_n, w_n = orbit_geometry.orbit_form_richardson(args.n, k, args.delta)
        lines.append(",".join([str(args.n), str(k), _fmt(g_c), _fmt(w_c),
                               _fmt(g_n), _fmt(w_n),
                               _fmt(abs(g_n - g_c)), _fmt(abs(w_n - w_c))]))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_channel(args):
    s = states.load_state(args.state).require_normalized(1e-9)
    rho = lieb_solovej.phi_iter(DensityMatrix.pure(s), args.steps)
    spec = spectrum(rho)
    print("spectrum:", " ".join(_fmt(v) for v in spec.values))
    if args.out:
        payload = {"dim": rho.dim,
                   "matrix": [[[z.real, z.imag] for z in row] for row in rho.m]}
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
    return 0


def _cmd_spectra(args):
    print(f"seed = {args.seed}")
    cloud = lieb_solovej.spectra_cloud(args.n, args.steps, args.count, args.seed)
    os.makedirs(args.out, exist_ok=True)
    base = os.path.join(args.out, f"spectra_n{args.n}_steps{args.steps}")
    with open(base + ".csv", "w", encoding="utf-8") as fh:
        fh.write(spectra_csv(cloud))
    if args.svg:
        if args.steps != 2:
            raise InputError("the simplex scatter needs --steps 2")
        with open(base + ".svg", "w", encoding="utf-8") as fh:
            fh.write(spectra_svg(cloud))
    print(f"wrote {base}.csv" + (f" and {base}.svg" if args.svg else ""))
    return 0


def _cmd_optimize(args):
    print(f"seed = {args.seed}")
    records = sphere_opt.reproduce_table(
        n_values=[args.n], objectives=[args.objective],
        starts=args.starts, seed=args.seed)
    text = json.dumps(records[0], indent=1) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_table(args):
    print(f"seed = {args.seed}")
    records = sphere_opt.reproduce_table(
        n_values=range(args.n_min, args.n_max + 1),
        starts=args.starts, seed=args.seed)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "table.json"), "w", encoding="utf-8") as fh:
        json.dump(records, fh, indent=1)
        fh.write("\n")
    with open(os.path.join(args.out, "table.csv"), "w", encoding="utf-8") as fh:
        fh.write(table_csv(records))
    if args.svg:
        for rec in records:
            c = sphere_opt.candidate_family(rec["family_type"]).build(rec["params"]) \
                if rec["family_type"] != "other" else None
            if c is not None:
                name = f"sphere_n{rec['n']}_{rec['objective']}.svg"
                with open(os.path.join(args.out, name), "w", encoding="utf-8") as fh:
                    fh.write(sphere_svg(c))
    print(f"wrote {args.out}/table.json and {args.out}/table.csv")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="majorana",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="round trip states and constellations")
    p.add_argument("--state")
    p.add_argument("--stars")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("coherent", help="emit a coherent state")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--z", default="0")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_coherent)

    p = sub.add_parser("wehrl", help="Wehrl entropy of a state")
    p.add_argument("--state")
    p.add_argument("--coherent", action="store_true")
    p.add_argument("--n", type=int)
    p.add_argument("--z", default="0")
    p.add_argument("--qtheta", type=int, default=16)
    p.add_argument("--qphi", type=int, default=32)
    p.add_argument("--qtol", type=float, default=1e-9)
    p.add_argument("--qmax-refine", type=int, default=12)
    p.set_defaults(func=_cmd_wehrl)

    p = sub.add_parser("geometry", help="orbit metric/symplectic coefficients")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--delta", type=float, default=1e-3)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_geometry)

    p = sub.add_parser("channel", help="apply the dimension-raising channel")
    p.add_argument("--state", required=True)
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_channel)

    p = sub.add_parser("spectra", help="spectra cloud CSV (and SVG simplex)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--steps", type=int, default=2)
    p.add_argument("--count", type=int, default=5000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True)
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=_cmd_spectra)

    p = sub.add_parser("optimize", help="multistart constellation optimization")
    p.add_argument("--objective", choices=sphere_opt.OBJECTIVES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--starts", type=int, default=50)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("table", help="optimal shapes for n = 3..9, all objectives")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=9)
    p.add_argument("--starts", type=int, default=50)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True)
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=_cmd_table)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (InputError, MajoranaError, OSError, json.JSONDecodeError, KeyError,
            ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
