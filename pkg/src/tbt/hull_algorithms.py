"""Convex hulls of lattices and intersections of membranes in the building.

Min-convex hulls are computed by retracting onto a membrane, enumerating the
fibres of the retraction over each lattice point, enlarging the membrane by
the fibres, and retracting once more.  Max-convex hulls go through duals.
Intersections of membranes are read off inside the tropical linear space of
the concatenated matrix; intersections of apartments also have a closed form
as an alcoved polytope (the inversion domain).
"""

from __future__ import annotations

import itertools
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .building import (
    Lattice,
    LatticeClass,
    Membrane,
    dual,
    intersect_all,
    lattice_from_point,
    lattice_spanned,
    member,
    psi,
)
from .errors import DimensionMismatch, FiberCapExceeded, InfeasiblePoint, RankDeficient
from .scalar_field import INF, KMatrix, matrix_inverse, require_invertible
from .tropical_core import first_zero, minplus_matmul, normalize, trop_combine
from .tropical_polytope import (
    Cell,
    CellComplex,
    StandardTriangulation,
    TropPolytope,
    barycenter,
    cells_from_triangulation,
    contains,
    lattice_points,
    standard_triangulation,
    type_of,
)
from .valuated_matroid import Cocircuit, OrdinaryMatroid, linear_space, matroid_at

log = logging.getLogger(__name__)


def _thread_count():
    try:
        return max(1, int(os.environ.get("TBT_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    """Order-preserving map, threaded when TBT_THREADS > 1."""
    items = list(items)
    n = _thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _as_lattice(M) -> Lattice:
    return M if isinstance(M, Lattice) else Lattice(require_invertible(M))


def _check_same_d(mats):
    ds = {m.nrows if isinstance(m, KMatrix) else m.d for m in mats}
    if len(ds) != 1:
        raise DimensionMismatch(f"inputs live in different dimensions {sorted(ds)}")


# --- retraction of a min-convex hull onto a membrane ------------------------------

def retract_min_hull(lattices: Sequence, W: Membrane) -> TropPolytope:
    """tconv of the psi-images of the inputs: the retraction of their min-convex hull onto W."""
    lats = [_as_lattice(M) for M in lattices]
    return TropPolytope(tuple(psi(W, L) for L in lats))


# --- fibres -----------------------------------------------------------------------

def minimal_coefficients(v: Sequence, ws: Sequence[Sequence]) -> tuple:
    """Least a with a_i + w_i >= v coordinatewise; raises unless it combines to v."""
    a = []
    for w in ws:
        gaps = [vj - wj for vj, wj in zip(v, w) if wj != INF]
        a.append(max(gaps))
    if trop_combine(a, ws) != tuple(v):
        raise InfeasiblePoint(f"{tuple(v)} is not a tropical combination of the generators")
    return tuple(a)


def anchored_representative(v: Sequence, ws: Sequence[Sequence]) -> tuple:
    """The representative of the projective point v whose minimal coefficients have minimum 0."""
    m = min(minimal_coefficients(v, ws))
    return tuple(c - m for c in v)


def _cap(lats, ws):
    d, s = lats[0].d, len(lats)
    finite = [c for w in ws for c in w if c != INF]
    spread = max(finite) - min(finite) if finite else 0
    return 4 * d * s + spread


def fiber(v: Sequence, ws: Sequence[Sequence], lattices: Sequence[Lattice], cap=None) -> list:
    """All distinct lattices z^{-a_1} L_1 ∩ ... ∩ z^{-a_s} L_s with combination a_i ⊙ w_i equal to v.

    Depth-first search from the minimal coefficient vector; a coordinate is
    incremented only while the result stays in C_v and the lattice strictly grows.
    """
    lats = list(lattices)
    ws = [tuple(w) for w in ws]
    v = tuple(v)
    a0 = minimal_coefficients(v, ws)
    if cap is None:
        cap = _cap(lats, ws)

    def lattice_at(a):
        return intersect_all([L.scaled(-ai) for L, ai in zip(lats, a)])

    found = {}
    seen = {a0}
    stack = [(a0, lattice_at(a0))]
    found[stack[0][1]] = a0
    while stack:
        a, L = stack.pop()
        for i in range(len(a)):
            b = a[:i] + (a[i] + 1,) + a[i + 1:]
            if b in seen:
                continue
            seen.add(b)
            if b[i] - a0[i] > cap:
                raise FiberCapExceeded(
                    f"coefficient {i} passed {cap} above its minimum at v={v}; lattices kept growing"
                )
            if trop_combine(b, ws) != v:
                continue
            Lb = lattice_at(b)
            if Lb == L or not (L <= Lb):
                continue
            found.setdefault(Lb, b)
            stack.append((b, Lb))
    return sorted(found, key=lambda L: found[L])


def minimal_new_generators(L: Lattice, inside: Lattice) -> list:
    """Columns of L's canonical basis that are needed to enlarge ``inside`` to L, chosen greedily."""
    picked = []
    current = inside
    for c in L.basis.columns():
        if current == L:
            break
        if member(c, current):
            continue
        picked.append(c)
        current = Lattice(current.basis.hstack(KMatrix.from_columns([c])))
    return picked


# --- min- and max-convex hulls -------------------------------------------------------

@dataclass
class HullPoint:
    u: tuple
    lattice_class: LatticeClass
    matroid: OrdinaryMatroid


@dataclass
class HullResult:
    membrane: Membrane
    generators: tuple  # psi-images of the inputs over the final membrane
    points: list = field(default_factory=list)  # HullPoint, sorted by u
    complex: StandardTriangulation | None = None
    cells: CellComplex | None = None
    first_pass: tuple = ()  # psi-images over the initial membrane
    first_pass_points: tuple = ()
    added_columns: tuple = ()

    @property
    def classes(self):
        return [p.lattice_class for p in self.points]

    def to_json(self):
        from .serialize import hull_to_json

        return hull_to_json(self)


def _hull_points(W: Membrane, gens, lats):
    P = TropPolytope(tuple(gens))
    pts = lattice_points(P)

    def build(u):
        L = lattice_from_point(W, u, check=False)
        return HullPoint(u, LatticeClass(L), matroid_at(W.matroid, u))

    hull = _pmap(build, pts)
    tri = standard_triangulation(pts)
    cells = cells_from_triangulation(P, tri)
    return P, hull, tri, cells


def min_convex_hull(matrices: Sequence, membrane: Membrane | None = None, cap=None) -> HullResult:
    """Min-convex hull of the lattices spanned by the given invertible matrices."""
    if not matrices:
        raise ValueError("at least one lattice is required")
    _check_same_d(matrices)
    lats = [_as_lattice(M) for M in matrices]
    if membrane is None:
        gens = [M.basis if isinstance(M, Lattice) else M for M in matrices]
        W = Membrane(gens[0].hstack(*gens[1:]))
    else:
        W = membrane
    ws = [psi(W, L) for L in lats]
    first_pts = lattice_points(TropPolytope(tuple(ws)))

    def fibre_columns(v):
        v = anchored_representative(v, ws)
        base = lattice_spanned(W, v)
        cols = []
        for L in fiber(v, ws, lats, cap=cap):
            if L != base:
                cols.extend(minimal_new_generators(L, base))
        return cols

    new_cols = []
    seen_cols = set(W.columns.columns())
    for cols in _pmap(fibre_columns, first_pts):
        for c in cols:
            if c not in seen_cols:
                seen_cols.add(c)
                new_cols.append(c)
    W2 = W.extended(new_cols) if new_cols else W
    ws2 = [psi(W2, L) for L in lats]
    _, hull, tri, cells = _hull_points(W2, ws2, lats)
    return HullResult(
        membrane=W2,
        generators=tuple(ws2),
        points=hull,
        complex=tri,
        cells=cells,
        first_pass=tuple(ws),
        first_pass_points=tuple(first_pts),
        added_columns=tuple(new_cols),
    )


def max_convex_hull(matrices: Sequence, cap=None) -> HullResult:
    """Max-convex hull: min-convex hull of the inverse transposes, dualised back."""
    _check_same_d(matrices)
    duals = [matrix_inverse(require_invertible(M)).transpose() for M in matrices]
    res = min_convex_hull(duals, cap=cap)
    res.points = [
        HullPoint(p.u, LatticeClass(dual(p.lattice_class.representative)), p.matroid)
        for p in res.points
    ]
    return res


# --- apartments: energy matrix and inversion domain ------------------------------------

def energy_matrix(M: KMatrix):
    """E(M) = val(M) ⊙ val(M^{-1}) in the min-plus algebra."""
    Minv = matrix_inverse(require_invertible(M))
    return minplus_matmul(M.valuation_matrix(), Minv.valuation_matrix())


def constant_term_test(M: KMatrix, check: bool = True) -> bool:
    """Scale each column so its least valuation is 0 and test invertibility of the constant term."""
    if check:
        require_invertible(M)
    shifts = [-min(x.valuation for x in col) for col in M.columns()]
    G = M.scale_columns_by_z(shifts)
    G0 = KMatrix([[x.constant_term() for x in row] for row in G.rows])
    return bool(G0.det())


def standard_lattice_in_apartment(M: KMatrix) -> bool:
    """Whether R^d lies in [M]: all energies nonnegative, cross-checked against the constant-term test."""
    E = energy_matrix(M)
    ok = all(e >= 0 for row in E for e in row)
    if ok != constant_term_test(M):
        raise AssertionError(f"energy and constant-term criteria disagree on {M!r}")
    return ok


@dataclass
class InversionDomain:
    """{u : u_j - u_i <= bounds[i][j]} in membrane coordinates of the first apartment:
    u stands for the lattice M_1 diag(z^{-u}) R^d."""

    bounds: tuple

    @property
    def d(self):
        return len(self.bounds)

    def closure(self):
        """Tightest implied bounds (shortest paths); None when the system is infeasible."""
        d = self.d
        b = [list(r) for r in self.bounds]
        for i in range(d):
            b[i][i] = min(b[i][i], 0)
        for k in range(d):
            for i in range(d):
                for j in range(d):
                    if b[i][k] + b[k][j] < b[i][j]:
                        b[i][j] = b[i][k] + b[k][j]
        if any(b[i][i] < 0 for i in range(d)):
            return None
        return tuple(tuple(r) for r in b)

    def is_empty(self):
        return self.closure() is None

    def is_bounded(self):
        c = self.closure()
        return c is not None and all(x != INF for r in c for x in r)

    def contains(self, u) -> bool:
        return all(
            u[j] - u[i] <= self.bounds[i][j] for i in range(self.d) for j in range(self.d)
        )

    def to_json(self):
        return [["inf" if x == INF else int(x) for x in r] for r in self.bounds]


def inversion_domain(matrices: Sequence[KMatrix]) -> InversionDomain:
    """Bounds min_k e_ij(M_1^{-1} M_k) over k >= 2."""
    if len(matrices) < 2:
        raise ValueError("at least two apartments are required")
    _check_same_d(matrices)
    M1inv = matrix_inverse(require_invertible(matrices[0]))
    d = matrices[0].nrows
    bounds = [[INF] * d for _ in range(d)]
    for Mk in matrices[1:]:
        E = energy_matrix(M1inv @ require_invertible(Mk))
        for i in range(d):
            for j in range(d):
                bounds[i][j] = min(bounds[i][j], E[i][j])
    return InversionDomain(tuple(tuple(r) for r in bounds))


def default_box(matrices: Sequence[KMatrix], margin: int = 2):
    """Box for the first input's coordinates, from the finite block-1 entries of all
    special cocircuits val(row k of M_i^{-1} M), widened by ``margin``."""
    _check_same_d(matrices)
    M = matrices[0].hstack(*matrices[1:])
    n1 = matrices[0].ncols
    blocks = _block_ranges(matrices)
    reps = []
    for i, Mi in enumerate(matrices):
        if Mi.ncols == Mi.nrows:
            rows = (matrix_inverse(Mi) @ M).valuation_matrix()
        else:
            rows = [c.vector for c in _block_cocircuits(M, blocks, i)]
        for r in rows:
            block = r[:n1]
            if any(x != INF for x in block):
                reps.append(first_zero(block) if block[0] != INF else None)
    reps = [r for r in reps if r is not None]
    box = [(0, 0)]
    for j in range(1, n1):
        vals = [r[j] for r in reps if r[j] != INF]
        lo, hi = (min(vals), max(vals)) if vals else (0, 0)
        box.append((lo - margin, hi + margin))
    return box


@dataclass
class IntersectionResult:
    classes: list  # LatticeClass, in the order of ``points``
    points: list  # coordinates in the first input's membrane, first-zero normalized
    complex: StandardTriangulation | None
    cells: CellComplex | None = None
    unbounded: bool = False
    domain: InversionDomain | None = None
    box: list = field(default_factory=list)

    def class_set(self):
        return set(self.classes)

    def to_json(self):
        from .serialize import intersection_to_json

        return intersection_to_json(self)


def _box_boundary(u, box):
    return any((lo != hi) and (c == lo or c == hi) for c, (lo, hi) in zip(u, box))


def apartment_intersection(matrices: Sequence[KMatrix], box=None, margin: int = 2) -> IntersectionResult:
    """Intersection of apartments as the standard triangulation of the inversion domain."""
    mats = [require_invertible(M) for M in matrices]
    dom = inversion_domain(mats)
    if box is None:
        box = default_box(mats, margin)
    d = dom.d
    pts = []
    if not dom.is_empty():
        for rest in itertools.product(*(range(lo, hi + 1) for lo, hi in box[1:])):
            u = (0,) + rest
            if dom.contains(u):
                pts.append(u)
    pts.sort()
    classes = [LatticeClass(Lattice(mats[0].scale_columns_by_z([-c for c in u]))) for u in pts]
    tri = standard_triangulation(pts) if pts else None
    cells = None
    if pts and dom.is_bounded():
        closure = dom.closure()
        gens = _alcove_vertices(closure)
        cells = cells_from_triangulation(TropPolytope(tuple(gens)), tri)
    if tri is not None:
        tri = _reindexed(tri, [normalize(u) for u in pts], pts)
    unbounded = not dom.is_empty() and not dom.is_bounded()
    return IntersectionResult(classes, pts, tri, cells, unbounded, dom, list(box))


def _reindexed(tri: StandardTriangulation, keys, points) -> StandardTriangulation:
    """The same complex with vertex i relabelled as points[i], where keys[i] is its old vertex."""
    where = {v: i for i, v in enumerate(tri.vertices)}
    new_index = {where[k]: i for i, k in enumerate(keys)}
    simplices = sorted(
        (tuple(sorted(new_index[i] for i in s)) for s in tri.simplices), key=lambda s: (len(s), s)
    )
    return StandardTriangulation(tuple(points), tuple(simplices))


def _alcove_vertices(closure):
    """Tropical generators of a bounded alcoved polytope {u_j - u_i <= c_ij}: the
    points g_k with (g_k)_j = c_kj (min over the columns), which span it."""
    d = len(closure)
    return [tuple(closure[k][j] for j in range(d)) for k in range(d)]


def _block_ranges(matrices):
    out, start = [], 0
    for Mi in matrices:
        out.append(range(start, start + Mi.ncols))
        start += Mi.ncols
    return out


def _block_cocircuits(M: KMatrix, blocks, i):
    """Cocircuits p(sigma *) of the concatenation for (d-1)-subsets sigma of block i."""
    d = M.nrows
    out = []
    for sigma in itertools.combinations(blocks[i], d - 1):
        vec = []
        for j in range(M.ncols):
            if j in sigma:
                vec.append(INF)
            else:
                vec.append(M.submatrix(sigma + (j,)).det().valuation)
        if any(x != INF for x in vec):
            out.append(Cocircuit(sigma, tuple(vec)))
    return out


def membrane_intersection(matrices: Sequence[KMatrix], box=None, margin: int = 2) -> IntersectionResult:
    """Intersection of membranes [M_1] ∩ ... ∩ [M_s], computed inside L_p of the concatenation.

    Lattice points of the first membrane in the box are mapped into L_p(M) and
    kept when they lie in every subpolytope L_p^M(M_i); simplices of the
    standard triangulation are kept when their barycentres do.
    """
    if not matrices:
        raise ValueError("at least one membrane is required")
    _check_same_d(matrices)
    for Mi in matrices:
        if Mi.rank() < Mi.nrows:
            raise RankDeficient("every input must have full row rank")
    M = matrices[0].hstack(*matrices[1:])
    W = Membrane(M)
    blocks = _block_ranges(matrices)
    subpolytopes = [
        TropPolytope(tuple(c.vector for c in _block_cocircuits(M, blocks, i)))
        for i in range(len(matrices))
    ]
    if box is None:
        box = default_box(list(matrices), margin)
    W1 = Membrane(matrices[0])
    n1 = W1.n
    if n1 == W1.d:
        cand = [(0,) + rest for rest in itertools.product(*(range(lo, hi + 1) for lo, hi in box[1:]))]
    else:
        cand = [first_zero(u) for u in lattice_points(linear_space(W1.matroid), box)]

    def image(u):
        L = lattice_from_point(W1, u, check=False)
        return u, L, psi(W, L)

    kept = []
    for u, L, x in _pmap(image, cand):
        if all(contains(P, x) for P in subpolytopes[1:]):
            kept.append((u, L, x))
    kept.sort(key=lambda t: t[0])
    pts = [t[0] for t in kept]
    classes = [LatticeClass(t[1]) for t in kept]
    tri = cells = None
    if kept:
        images = [normalize(t[2]) for t in kept]
        full = standard_triangulation(images)
        simplices = tuple(
            s for s in full.simplices
            if all(contains(P, barycenter([full.vertices[i] for i in s])) for P in subpolytopes)
        )
        tri = StandardTriangulation(full.vertices, simplices)
        cells = _cells_by_type(linear_space(W.matroid), tri)
        tri = _reindexed(tri, images, pts)
    unbounded = any(_box_boundary(u, box) for u in pts)
    return IntersectionResult(classes, pts, tri, cells, unbounded, None, list(box))


def _cells_by_type(P: TropPolytope, tri: StandardTriangulation) -> CellComplex:
    dims, members = {}, {}
    for s in tri.simplices:
        verts = [tri.vertices[i] for i in s]
        t = type_of(P, barycenter(verts))
        dims[t] = max(dims.get(t, -1), len(s) - 1)
        members.setdefault(t, set()).update(verts)
    cells = sorted(
        (Cell(t, dims[t], tuple(sorted(members[t]))) for t in dims),
        key=lambda c: (c.dimension, c.points),
    )
    return CellComplex(tuple(cells), tri)


def brute_force_apartment_intersection(matrices: Sequence[KMatrix], box) -> list:
    """Points u of the box whose lattice M_1 diag(z^{-u}) R^d lies in every [M_k],
    decided by the constant-term test on diag(z^{u}) M_1^{-1} M_k."""
    M1inv = matrix_inverse(require_invertible(matrices[0]))
    rel = [M1inv @ Mk for Mk in matrices[1:]]
    out = []
    for rest in itertools.product(*(range(lo, hi + 1) for lo, hi in box[1:])):
        u = (0,) + rest
        if all(constant_term_test(N.T.scale_columns_by_z(u).T, check=False) for N in rel):
            out.append(u)
    return out
