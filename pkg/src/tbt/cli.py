"""Command-line front end: ``tbt <command> ...``.

Every command writes a JSON document (to stdout, or to ``--json PATH``) and can
optionally draw its complex with ``--render dot|svg``.  Errors exit with the
code attached to their exception class.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .building import Lattice, Membrane, psi, retract
from .errors import TbtError
from .hull_algorithms import (
    apartment_intersection,
    max_convex_hull,
    membrane_intersection,
    min_convex_hull,
)
from .matrix_io import load_matrices, load_tropical, parse_point
from .plotting import embed, render_svg, to_dot
from .serialize import dumps, hull_to_json, intersection_to_json, polytope_to_json, triangulation_json
from .tropical_core import INF, normalize, to_json_point
from .tropical_polytope import (
    TropPolytope,
    cells_from_triangulation,
    dual_point_map,
    lattice_points,
    nearest_point,
    standard_triangulation,
)
from .valuated_matroid import ValuatedMatroid, blue_rule, from_matrix, in_linear_space, red_rule


def _collect(paths, rational):
    mats = []
    for p in paths:
        mats.extend(load_matrices(p, rational))
    return mats


class Drawing:
    """What ``--render`` draws: vertex points, simplices and an optional map into TP^2."""

    def __init__(self, points, simplices, via=None):
        self.points = list(points)
        self.simplices = list(simplices)
        self.via = via


def _hull_drawing(res):
    pts = [p.u for p in res.points]
    via = None
    if pts and len(pts[0]) > 3 and len(res.generators) == 3:
        P = TropPolytope(tuple(res.generators))
        via = lambda u: dual_point_map(P, u)  # noqa: E731
    simplices = res.complex.simplices if res.complex else []
    return Drawing(pts, simplices, via)


# --- commands -----------------------------------------------------------------------

def cmd_minconv(args):
    res = min_convex_hull(_collect(args.files, args.rational))
    return hull_to_json(res), _hull_drawing(res)


def cmd_maxconv(args):
    res = max_convex_hull(_collect(args.files, args.rational))
    return hull_to_json(res), _hull_drawing(res)


def cmd_retract(args):
    mats = load_matrices(args.membrane, args.rational)
    W = Membrane(mats[0].hstack(*mats[1:]))
    lats = [Lattice(M) for M in _collect(args.files, args.rational)]
    gens = [psi(W, L) for L in lats]
    P = TropPolytope(tuple(gens))
    pts = lattice_points(P)
    tri = standard_triangulation(pts)
    doc = {
        "membrane": [[str(x) for x in r] for r in W.columns.rows],
        "generators": [to_json_point(g) for g in gens],
        "retracted": [retract(W, L).to_json() for L in lats],
        "lattice_points": [to_json_point(p) for p in pts],
        "triangulation": triangulation_json(tri),
    }
    return doc, Drawing(tri.vertices, tri.simplices)


def cmd_tropical_hull(args):
    rows = load_tropical(args.file)[0]
    P = TropPolytope.from_matrix(rows)
    pts = lattice_points(P)
    tri = standard_triangulation(pts)
    cells = cells_from_triangulation(P, tri)
    via = None
    if P.d > 3 and P.n == 3:
        via = lambda x: dual_point_map(P, x)  # noqa: E731
    return polytope_to_json(P, pts, tri, cells), Drawing(tri.vertices, tri.simplices, via)


def _load_matroid(path, rational):
    path = Path(path)
    if path.suffix == ".json":
        data = json.loads(path.read_text())
        if isinstance(data, dict) and "values" in data:
            return ValuatedMatroid.from_json(data)
    mats = load_matrices(path, rational)
    return from_matrix(mats[0].hstack(*mats[1:]))


def cmd_project(args):
    x = parse_point(args.point)
    if args.linear_space:
        p = _load_matroid(args.file, args.rational)
        blue, red = blue_rule(p, x), red_rule(p, x)
        doc = {
            "point": to_json_point(x),
            "projection": to_json_point(blue),
            "red_rule": to_json_point(red),
            "agree": normalize(blue) == normalize(red),
            "in_linear_space": in_linear_space(p, blue),
        }
    else:
        P = TropPolytope.from_matrix(load_tropical(args.file)[0])
        y = nearest_point(P, x)
        doc = {"point": to_json_point(x), "projection": to_json_point(y)}
    return doc, None


def _intersection_drawing(res):
    if res.complex is None:
        return Drawing([], [])
    return Drawing(res.complex.vertices, res.complex.simplices)


def cmd_intersect_membranes(args):
    res = membrane_intersection(_collect(args.files, args.rational), margin=args.box_margin)
    return intersection_to_json(res), _intersection_drawing(res)


def cmd_intersect_apartments(args):
    res = apartment_intersection(_collect(args.files, args.rational), margin=args.box_margin)
    return intersection_to_json(res), _intersection_drawing(res)


# --- plumbing -------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the JSON result here instead of stdout")
    common.add_argument("--render", choices=("dot", "svg"), help="also draw the complex")
    common.add_argument("--render-path", metavar="PATH", help="drawing output (default: derived from --json)")
    common.add_argument("--rational", action="store_true", help="allow entries with nontrivial denominators")
    common.add_argument("--box-margin", type=int, default=2, metavar="N",
                        help="widen the default enumeration box by N (intersections)")

    parser = argparse.ArgumentParser(prog="tbt", description="Convexity and intersections in the Bruhat-Tits building.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("minconv", parents=[common], help="min-convex hull of lattices")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_minconv)

    p = sub.add_parser("maxconv", parents=[common], help="max-convex hull of lattices")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_maxconv)

    p = sub.add_parser("retract", parents=[common], help="retract lattices onto a membrane")
    p.add_argument("--membrane", required=True, metavar="FILE")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_retract)

    p = sub.add_parser("tropical-hull", parents=[common], help="tropical polytope spanned by matrix columns")
    p.add_argument("file")
    p.set_defaults(func=cmd_tropical_hull)

    p = sub.add_parser("project", parents=[common], help="nearest point of a tropical polytope or linear space")
    p.add_argument("--point", required=True, help="comma-separated integers or 'inf'")
    p.add_argument("--linear-space", action="store_true",
                   help="FILE is a matrix over K (or a valuated matroid JSON); project onto L_p")
    p.add_argument("file")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("intersect-membranes", parents=[common], help="intersection of membranes")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_intersect_membranes)

    p = sub.add_parser("intersect-apartments", parents=[common], help="intersection of apartments")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_intersect_apartments)
    return parser


def _render(drawing, fmt, path):
    if fmt == "dot":
        text = to_dot(drawing.points, drawing.simplices)
        Path(path).write_text(text)
        return
    coords = embed(drawing.points, drawing.simplices, drawing.via)
    labels = ["(" + ",".join("inf" if c == INF else str(c) for c in p) + ")" for p in drawing.points]
    render_svg(coords, drawing.simplices, path, labels=labels)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, drawing = args.func(args)
        text = dumps(doc)
        if args.json:
            Path(args.json).write_text(text)
        else:
            sys.stdout.write(text)
        if args.render:
            if drawing is None:
                print(f"tbt: {args.command} has nothing to draw", file=sys.stderr)
                return 1
            path = args.render_path
            if path is None:
                stem = Path(args.json).with_suffix("") if args.json else Path(f"tbt-{args.command}")
                path = f"{stem}.{args.render}"
            _render(drawing, args.render, path)
    except TbtError as exc:
        print(f"tbt: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"tbt: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
