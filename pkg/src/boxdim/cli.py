"""Command-line entry point: ``boxdim <command> ...``.

Commands: generate, decompose, count, estimate, compare, ratio. Exit status is
0 when every requested verification passes, 1 when a verification fails or
the ratio iteration does not converge, 2 on usage, parse or I/O errors.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

from .dyadic import Dyadic
from .estimation import (converge_ratio, fit_loglog, fits_to_csv, make_schedule,
                         parse_schedule, ratio_table)
from .exceptions import BoxDimError, InsufficientDataError, NonConvergenceError
from .fracgeo import read_fracgeo, write_fracgeo
from .generators import (PrefractalSpec, bradley_stage, construction_decomposition,
                         format_trace, reference_prefractal, spiral_depth_for)
from .geometry import GeoSet, total_area
from .mesh import CELL_MODES, DIAGONALS, MESHES, MeshSpec, count_mesh, read_counts_csv, \
    write_counts_csv
from .report import run_compare
from .validation import check_offset

log = logging.getLogger("boxdim")

FRACTALS = ("bradley", "sierpinski", "koch", "cantor-dust", "filled-square", "segment")


def _add_mesh_options(p):
    p.add_argument("--schedule", required=True,
                   help="dyadic:J0:J1 | paper:K0:K1 | linear:D0:D1:N")
    p.add_argument("--cells", choices=CELL_MODES, default="closed")
    p.add_argument("--diagonal", choices=DIAGONALS, default="ne")
    p.add_argument("--offset", default="0,0", help="grid origin as X,Y")
    p.add_argument("--mode", choices=("auto", "exact", "approx"), default="auto")
    p.add_argument("--jobs", type=int, default=None, help="parallel workers for counting")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="boxdim",
        description="Box-counting dimension with square and triangle delta-meshes.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a prefractal as fracgeo v1")
    p.add_argument("--fractal", choices=FRACTALS, required=True)
    p.add_argument("--depth", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--trace", help="also write the stage trace (bradley only)")

    p = sub.add_parser("decompose", help="write and verify the 3*2^k+1 triangle cover")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("count", help="mesh counts of a fracgeo set over a schedule")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--mesh", choices=MESHES, required=True)
    p.add_argument("--out", required=True)
    _add_mesh_options(p)

    p = sub.add_parser("estimate", help="fit counts.csv, write fit.csv")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("compare", help="square vs triangle mesh comparison")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="input")
    src.add_argument("--fractal", choices=FRACTALS)
    p.add_argument("--depth", type=int, default=None,
                   help="prefractal stage; bradley defaults to the delta/2 rule")
    p.add_argument("--out-dir", required=True)
    _add_mesh_options(p)

    p = sub.add_parser("ratio", help="iterate the spiral ratio estimate B(k)")
    p.add_argument("--tol", type=float, default=0.1)
    p.add_argument("--k-max", type=int, default=60)
    p.add_argument("--literal-paper", action="store_true",
                   help="stop at the first k with B >= 2")
    return parser


def _deltas(args, g: GeoSet):
    deltas = make_schedule(parse_schedule(args.schedule))
    if g.mode == "exact" and args.mode != "approx" and not all(
            isinstance(d, Dyadic) for d in deltas):
        log.warning("schedule %s has non-dyadic deltas; those are counted in approx mode",
                    args.schedule)
    return deltas


def _mode(args):
    return None if args.mode == "auto" else args.mode


def _ensure_parent(path):
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        raise FileNotFoundError(f"output directory does not exist: {parent}")


def cmd_generate(args):
    _ensure_parent(args.out)
    spec = PrefractalSpec(args.fractal, args.depth)
    g = reference_prefractal(spec)
    write_fracgeo(g, args.out)
    if args.trace:
        if args.fractal != "bradley":
            raise BoxDimError("--trace is only available for the bradley spiral")
        _ensure_parent(args.trace)
        with open(args.trace, "w", encoding="utf-8", newline="") as fh:
            fh.write(format_trace(bradley_stage(args.depth)[1]))
    print(f"wrote {len(g)} primitives to {args.out}")
    return 0


def cmd_decompose(args):
    _ensure_parent(args.out)
    k = args.depth
    tris = construction_decomposition(k)
    write_fracgeo(GeoSet("bradley-cover", tuple(tris), k, kind="bradley-cover"), args.out)
    area = total_area(tris)
    expected_area = Dyadic(3, 2) + Dyadic.pow2(-(k + 2))
    ok = len(tris) == 3 * 2 ** k + 1 and area == expected_area
    area_text = f"3/4 + 2^-{k + 2}" if area == expected_area else str(area)
    print(f"{len(tris)} triangles, area {area_text}, {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def cmd_count(args):
    _ensure_parent(args.out)
    g = read_fracgeo(args.input)
    offset = check_offset(args.offset)
    records = [count_mesh(g, MeshSpec(d, offset, args.cells, args.diagonal), args.mesh,
                          mode=_mode(args), n_jobs=args.jobs)
               for d in _deltas(args, g)]
    write_counts_csv(records, args.out)
    print(f"wrote {len(records)} {args.mesh} counts to {args.out}")
    return 0


def cmd_estimate(args):
    _ensure_parent(args.out)
    records = read_counts_csv(args.input)
    if not records:
        raise InsufficientDataError("counts file has no data rows")
    fits = []
    for mesh in MESHES:
        rows = [r for r in records if r.mesh == mesh]
        if rows:
            fits.append(fit_loglog(rows))
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(fits_to_csv(fits))
    for f in fits:
        print(f"{f.mesh}: slope {f.slope:.6f}, intercept {f.intercept:.6f}, "
              f"R^2 {f.r_squared:.6f} ({f.n_points} points)")
    return 0


def cmd_compare(args):
    deltas = make_schedule(parse_schedule(args.schedule))
    if args.input:
        g = read_fracgeo(args.input)
    else:
        depth = args.depth
        if depth is None:
            depth = spiral_depth_for(deltas[-1]) if args.fractal == "bradley" else 0
        g = reference_prefractal(PrefractalSpec(args.fractal, depth))
    _deltas(args, g)
    res = run_compare(g, deltas, args.out_dir, cell_mode=args.cells, diagonal=args.diagonal,
                      offset=check_offset(args.offset), mode=_mode(args), n_jobs=args.jobs,
                      schedule_label=args.schedule)
    for mesh, f in res.fits.items():
        print(f"{mesh}: slope {f.slope:.6f}, R^2 {f.r_squared:.6f}")
    for w in res.warnings:
        log.warning(w)
    print(f"mesh inequality: {'PASS' if res.ok else 'FAIL'}; outputs in {args.out_dir}")
    return 0 if res.ok else 1


def _print_ratio_rows(rows):
    print(f"{'k':>3} {'3*2^k+1':>22} {'B':>20}")
    for k, count, b in rows:
        print(f"{k:>3} {count:>22} {b:>20.15f}")


def cmd_ratio(args):
    try:
        k, value = converge_ratio(args.tol, args.k_max, literal=args.literal_paper)
    except NonConvergenceError as exc:
        _print_ratio_rows(exc.rows)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _print_ratio_rows(ratio_table(k))
    print(f"B = {value:.15f} at k = {k}")
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "decompose": cmd_decompose,
    "count": cmd_count,
    "estimate": cmd_estimate,
    "compare": cmd_compare,
    "ratio": cmd_ratio,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (BoxDimError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
