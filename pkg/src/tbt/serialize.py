"""JSON documents for results.  Output ordering is deterministic."""

from __future__ import annotations

import json

from .tropical_core import INF, to_json_point


def _point(x):
    return [
        "inf" if c == INF else (int(c) if getattr(c, "denominator", 1) == 1 else str(c)) for c in x
    ]


def matrix_json(M):
    return [[str(x) for x in r] for r in M.rows]


def tropical_matrix_json(rows):
    return [_point(r) for r in rows]


def type_json(t):
    return [sorted(int(k) + 1 for k in s) for s in t]


def triangulation_json(tri):
    if tri is None:
        return None
    return {
        "vertices": [_point(v) for v in tri.vertices],
        "simplices": [list(s) for s in tri.simplices],
        "f_vector": list(tri.f_vector),
    }


def cell_complex_json(cc):
    if cc is None:
        return None
    return {
        "f_vector": list(cc.f_vector),
        "cells": [
            {"dimension": c.dimension, "type": type_json(c.type), "points": [_point(p) for p in c.points]}
            for c in cc.cells
        ],
    }


def hull_to_json(res):
    return {
        "membrane": matrix_json(res.membrane.columns),
        "generators": [_point(g) for g in res.generators],
        "first_pass": {
            "generators": [_point(g) for g in res.first_pass],
            "points": [_point(p) for p in res.first_pass_points],
            "added_columns": [[str(x) for x in c] for c in res.added_columns],
        },
        "points": [
            {
                "u": to_json_point(p.u),
                "basis": p.lattice_class.representative.to_json(),
                "matroid_bases": [[e + 1 for e in b] for b in p.matroid.bases],
            }
            for p in res.points
        ],
        "complex": triangulation_json(res.complex),
        "cells": cell_complex_json(res.cells),
    }


def intersection_to_json(res):
    return {
        "box": [list(b) for b in res.box],
        "unbounded": bool(res.unbounded),
        "inversion_domain": res.domain.to_json() if res.domain is not None else None,
        "points": [
            {"u": to_json_point(u), "basis": c.representative.to_json()}
            for u, c in zip(res.points, res.classes)
        ],
        "complex": triangulation_json(res.complex),
        "cells": cell_complex_json(res.cells),
    }


def polytope_to_json(P, points, tri, cells):
    return {
        "generators": [_point(g) for g in P.generators],
        "lattice_points": [_point(p) for p in points],
        "triangulation": triangulation_json(tri),
        "cells": cell_complex_json(cells),
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"
