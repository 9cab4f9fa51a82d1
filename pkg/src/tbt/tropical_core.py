"""Min-plus arithmetic on extended integers and points of tropical projective space.

Points are plain tuples whose entries are ints (or Fractions, for barycenters)
or ``INF``.  Two tuples represent the same point iff they differ by a finite
constant on the finite entries and have the same infinite entries.
"""

from __future__ import annotations

import math
from typing import Sequence

from .errors import AllInfinite, DimensionMismatch, EmptyCombination, IncomparableAtInfinity

INF = math.inf


def is_inf(x) -> bool:
    return x == INF


def normalize(x: Sequence) -> tuple:
    """The unique representative with finite entries >= 0 and some entry 0."""
    finite = [c for c in x if c != INF]
    if not finite:
        raise AllInfinite("point has no finite coordinate")
    m = min(finite)
    return tuple(c if c == INF else c - m for c in x)


def first_zero(x: Sequence) -> tuple:
    """Representative whose first finite coordinate is 0."""
    for c in x:
        if c != INF:
            return tuple(v if v == INF else v - c for v in x)
    raise AllInfinite("point has no finite coordinate")


def same_point(x: Sequence, y: Sequence) -> bool:
    if len(x) != len(y):
        return False
    return normalize(x) == normalize(y)


def delta(x: Sequence, y: Sequence):
    """Tropical distance max_{i<j} |x_i + y_j - x_j - y_i|.

    Coordinates that are infinite in both points are ignored (inf - inf = 0);
    mismatched infinity patterns raise IncomparableAtInfinity.
    """
    if len(x) != len(y):
        raise DimensionMismatch(f"points of length {len(x)} and {len(y)}")
    diffs = []
    for a, b in zip(x, y):
        ai, bi = a == INF, b == INF
        if ai != bi:
            raise IncomparableAtInfinity("points lie in different strata at infinity")
        if not ai:
            diffs.append(a - b)
    if not diffs:
        raise AllInfinite("point has no finite coordinate")
    return max(diffs) - min(diffs)


def trop_combine(coefficients: Sequence, points: Sequence[Sequence]) -> tuple:
    """Tropical linear combination: coordinatewise min of a_k + w_k."""
    if len(coefficients) != len(points):
        raise DimensionMismatch("one coefficient per point is required")
    terms = [(a, w) for a, w in zip(coefficients, points) if a != INF]
    if not terms:
        raise EmptyCombination("every coefficient is infinite")
    d = len(terms[0][1])
    if any(len(w) != d for _, w in terms):
        raise DimensionMismatch("points of different lengths")
    out = []
    for i in range(d):
        out.append(min(w[i] + a for a, w in terms))
    if all(c == INF for c in out):
        raise AllInfinite("combination is the all-infinite vector")
    return tuple(out)


def trop_sum(points: Sequence[Sequence]) -> tuple:
    """Coordinatewise minimum of the given vectors (no normalization)."""
    return trop_combine([0] * len(points), points)


def minplus_matmul(A, B):
    """Min-plus product of two grids of extended integers."""
    n, m = len(A), len(B[0])
    inner = len(B)
    if any(len(r) != inner for r in A):
        raise DimensionMismatch("inner dimensions differ")
    return tuple(
        tuple(min(A[i][k] + B[k][j] for k in range(inner)) for j in range(m)) for i in range(n)
    )


def to_json_point(x):
    return ["inf" if c == INF else int(c) for c in x]


def from_json_point(data):
    return tuple(INF if c == "inf" else int(c) for c in data)
