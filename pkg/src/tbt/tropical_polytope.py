"""Tropical polytopes: projection, types, lattice points, standard triangulation, cells."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx

from .errors import DimensionMismatch, PointNotInPolytope, UnboundedEnumeration
from .tropical_core import INF, delta, first_zero, normalize


@dataclass(frozen=True)
class TropPolytope:
    """``tconv`` of an ordered list of generators, each a point of TP^{d-1}.

    ``generators[k]`` is the k-th column of the d x n generator matrix.
    Generator order (and repetition) is kept because types depend on it.
    """

    generators: tuple

    def __post_init__(self):
        gens = tuple(tuple(g) for g in self.generators)
        if not gens:
            raise ValueError("a tropical polytope needs at least one generator")
        d = len(gens[0])
        if any(len(g) != d for g in gens):
            raise DimensionMismatch("generators of different lengths")
        for g in gens:
            normalize(g)  # rejects all-infinite generators
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence]):
        """Polytope spanned by the columns of a d x n matrix given by rows."""
        return cls(tuple(zip(*rows)))

    @property
    def d(self) -> int:
        return len(self.generators[0])

    @property
    def n(self) -> int:
        return len(self.generators)

    def matrix(self):
        """The d x n generator matrix as rows."""
        return tuple(zip(*self.generators))

    def transpose(self) -> "TropPolytope":
        """Polytope in TP^{n-1} spanned by the rows of the generator matrix."""
        return TropPolytope(self.matrix())

    def is_finite(self) -> bool:
        return all(c != INF for g in self.generators for c in g)


def _check_dim(P, x):
    if len(x) != P.d:
        raise DimensionMismatch(f"point of length {len(x)} for a polytope in TP^{P.d - 1}")


def nearest_point(P: TropPolytope, x: Sequence) -> tuple:
    """Coordinatewise-minimal point of P lying above x.

    y_i = min_k (v_ki + max_{j : v_kj finite} (x_j - v_kj)).
    """
    _check_dim(P, x)
    out = [INF] * P.d
    for v in P.generators:
        lam = None
        for xj, vj in zip(x, v):
            if vj == INF:
                continue
            t = xj - vj if xj != INF else INF
            if lam is None or t > lam:
                lam = t
        if lam is None or lam == INF:
            continue
        for i, vi in enumerate(v):
            if vi != INF and vi + lam < out[i]:
                out[i] = vi + lam
    if all(c == INF for c in out):
        raise PointNotInPolytope("no point of the polytope lies above x")
    return tuple(out)


def contains(P: TropPolytope, x: Sequence) -> bool:
    _check_dim(P, x)
    try:
        return nearest_point(P, x) == tuple(x)
    except PointNotInPolytope:
        return False


def type_of(P: TropPolytope, x: Sequence) -> tuple:
    """Type (S_1, ..., S_d) of a finite point x: S_i holds the generators k
    for which v_ki - x_i is minimal among v_kj - x_j."""
    _check_dim(P, x)
    sets = [set() for _ in range(P.d)]
    for k, v in enumerate(P.generators):
        diffs = [vi - xi if vi != INF else INF for vi, xi in zip(v, x)]
        m = min(diffs)
        for i, t in enumerate(diffs):
            if t == m:
                sets[i].add(k)
    return tuple(frozenset(s) for s in sets)


def transpose_type(t: Sequence[frozenset], n: int) -> tuple:
    """S'_j = {i : j in S_i} for a type with respect to n generators."""
    return tuple(frozenset(i for i, s in enumerate(t) if j in s) for j in range(n))


# --- lattice points ------------------------------------------------------------

def _in_box(x, box):
    return all(lo <= c <= hi for c, (lo, hi) in zip(x, box))


def _neighbour_steps(d):
    steps = []
    for r in range(1, d):
        for S in itertools.combinations(range(d), r):
            steps.append(tuple(1 if i in S else 0 for i in range(d)))
    return steps


def _normalize_box(box, d):
    box = [tuple(b) for b in box]
    if len(box) == d - 1:
        box = [(0, 0)] + box
    if len(box) != d:
        raise DimensionMismatch(f"box needs {d} (or {d - 1}) coordinate ranges")
    if box[0] != (0, 0):
        raise ValueError("box ranges refer to the representative with first coordinate 0")
    return box


def lattice_points(P: TropPolytope, box=None, method: str = "walk") -> list:
    """All finite lattice points of P, as sorted normalized tuples.

    ``box`` (required when a generator has an infinite entry) bounds the
    representative with first coordinate 0: a list of (lo, hi) per
    coordinate.  ``method="walk"`` grows the set along delta=1 steps from the
    generators, which suffices because the lattice points of a tropical
    lattice polytope (intersected with an alcoved box) form a connected graph;
    ``method="box"`` tests every point of the bounding box.
    """
    d = P.d
    if box is None:
        if not P.is_finite():
            raise UnboundedEnumeration("generators have infinite entries; supply a box")
        reps = [first_zero(g) for g in P.generators]
        box = [(min(r[i] for r in reps), max(r[i] for r in reps)) for i in range(d)]
    else:
        box = _normalize_box(box, d)
    if method == "box":
        found = [
            (0,) + rest
            for rest in itertools.product(*(range(lo, hi + 1) for lo, hi in box[1:]))
            if contains(P, (0,) + rest)
        ]
        return sorted(normalize(x) for x in found)
    if method != "walk":
        raise ValueError(f"unknown method {method!r}")

    seeds = []
    for g in P.generators:
        if all(c != INF for c in g):
            seeds.append(first_zero(g))
    centre = tuple((lo + hi) // 2 for lo, hi in box)
    seeds.append(first_zero(_project_into_box(P, centre, box)))
    seeds = [s for s in seeds if _in_box(s, box) and contains(P, s)]
    if not seeds:
        return lattice_points(P, box, method="box")

    steps = _neighbour_steps(d)
    seen = set(seeds)
    queue = deque(seeds)
    while queue:
        x = queue.popleft()
        for s in steps:
            y = tuple(a + b for a, b in zip(x, s))
            if y[0]:
                y = tuple(c - y[0] for c in y)
            if y in seen or not _in_box(y, box):
                continue
            if contains(P, y):
                seen.add(y)
                queue.append(y)
    return sorted(normalize(x) for x in seen)


def _project_into_box(P, x, box):
    try:
        y = nearest_point(P, x)
    except PointNotInPolytope:
        return x
    if any(c == INF for c in y):
        return x
    return y


# --- standard triangulation ----------------------------------------------------

@dataclass(frozen=True)
class StandardTriangulation:
    """Flag complex of the delta = 1 graph on a set of lattice points."""

    vertices: tuple
    simplices: tuple  # tuples of vertex indices, every clique of the edge graph

    @property
    def edges(self):
        return tuple(s for s in self.simplices if len(s) == 2)

    @property
    def dimension(self):
        return max(len(s) for s in self.simplices) - 1

    @property
    def f_vector(self):
        counts = [0] * (self.dimension + 1)
        for s in self.simplices:
            counts[len(s) - 1] += 1
        return tuple(counts)

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.vertices)))
        g.add_edges_from(self.edges)
        return g


def delta_graph(points: Sequence[Sequence]) -> nx.Graph:
    """Graph on point indices with an edge whenever delta equals 1."""
    pts = [normalize(p) for p in points]
    g = nx.Graph()
    g.add_nodes_from(range(len(pts)))
    if not pts:
        return g
    d = len(pts[0])
    index = {first_zero(p): i for i, p in enumerate(pts)}
    if len(pts) > 2 ** d:
        steps = _neighbour_steps(d)
        for p, i in index.items():
            for s in steps:
                q = first_zero(tuple(a + b for a, b in zip(p, s)))
                j = index.get(q)
                if j is not None and j > i:
                    g.add_edge(i, j)
    else:
        for i, j in itertools.combinations(range(len(pts)), 2):
            if delta(pts[i], pts[j]) == 1:
                g.add_edge(i, j)
    return g


def standard_triangulation(points: Iterable[Sequence]) -> StandardTriangulation:
    pts = sorted({normalize(p) for p in points})
    g = delta_graph(pts)
    simplices = sorted(
        (tuple(sorted(c)) for c in nx.enumerate_all_cliques(g)), key=lambda s: (len(s), s)
    )
    return StandardTriangulation(tuple(pts), tuple(simplices))


def barycenter(points: Sequence[Sequence]) -> tuple:
    k = len(points)
    return tuple(Fraction(sum(c), k) for c in zip(*points))


# --- cells -----------------------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    type: tuple
    dimension: int
    points: tuple  # lattice points of the closed cell


@dataclass(frozen=True)
class CellComplex:
    cells: tuple
    triangulation: StandardTriangulation = field(repr=False)

    @property
    def f_vector(self):
        top = max(c.dimension for c in self.cells)
        counts = [0] * (top + 1)
        for c in self.cells:
            counts[c.dimension] += 1
        return tuple(counts)

    def cell_of_type(self, t):
        for c in self.cells:
            if c.type == t:
                return c
        return None


def cell_complex(P: TropPolytope, box=None) -> CellComplex:
    """Cells of P found by typing the barycenter of every standard simplex."""
    tri = standard_triangulation(lattice_points(P, box))
    return cells_from_triangulation(P, tri)


def cells_from_triangulation(P: TropPolytope, tri: StandardTriangulation) -> CellComplex:
    dims: dict = {}
    members: dict = {}
    for s in tri.simplices:
        verts = [tri.vertices[i] for i in s]
        b = barycenter(verts)
        if not contains(P, b):
            continue
        t = type_of(P, b)
        dims[t] = max(dims.get(t, -1), len(s) - 1)
        members.setdefault(t, set()).update(verts)
    cells = sorted(
        (Cell(t, dims[t], tuple(sorted(members[t]))) for t in dims),
        key=lambda c: (c.dimension, c.points),
    )
    return CellComplex(tuple(cells), tri)


# --- row/column duality ------------------------------------------------------------

def dual_point_map(P: TropPolytope, x: Sequence) -> tuple:
    """P -> P': y_j = min_i (v_ij - x_i), landing in the row polytope in TP^{n-1}."""
    if not contains(P, x):
        raise PointNotInPolytope(f"{tuple(x)} is not in the polytope")
    return tuple(
        min(v[i] - x[i] if v[i] != INF else INF for i in range(P.d)) for v in P.generators
    )


def dual_point_map_inverse(P: TropPolytope, y: Sequence) -> tuple:
    """P' -> P: x_i = min_j (v_ij - y_j)."""
    if len(y) != P.n:
        raise DimensionMismatch(f"point of length {len(y)}, expected {P.n}")
    if not contains(P.transpose(), y):
        raise PointNotInPolytope(f"{tuple(y)} is not in the row polytope")
    return tuple(
        min(v[i] - yj if v[i] != INF else INF for v, yj in zip(P.generators, y))
        for i in range(P.d)
    )
