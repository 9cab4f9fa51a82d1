"""Valuated matroids, cocircuits, tropical linear spaces and the Blue/Red projection rules.

Ground-set elements are 0-based column indices.  Subsets are sorted tuples
and are always iterated in lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .errors import BlueRedMismatch, DimensionMismatch, RankDeficient
from .scalar_field import KMatrix
from .tropical_core import INF, normalize
from .tropical_polytope import TropPolytope


@dataclass(frozen=True)
class ValuatedMatroid:
    n: int
    d: int
    values: Mapping  # sorted d-tuple -> int or INF

    def __post_init__(self):
        vals = {tuple(sorted(k)): v for k, v in dict(self.values).items()}
        for k in vals:
            if len(set(k)) != self.d or not all(0 <= e < self.n for e in k):
                raise ValueError(f"{k} is not a {self.d}-subset of range({self.n})")
        if all(v == INF for v in vals.values()):
            raise RankDeficient("valuated matroid is identically infinite")
        object.__setattr__(self, "values", vals)

    def __call__(self, subset) -> int | float:
        key = tuple(sorted(subset))
        if len(set(key)) != self.d:
            return INF
        return self.values.get(key, INF)

    def subsets(self):
        return combinations(range(self.n), self.d)

    def shifted(self, c):
        return ValuatedMatroid(self.n, self.d, {k: v + c for k, v in self.values.items()})

    def to_json(self):
        return {
            "n": self.n,
            "d": self.d,
            "values": [
                [[e + 1 for e in k], "inf" if v == INF else v] for k, v in sorted(self.values.items())
            ],
        }

    @classmethod
    def from_json(cls, data):
        vals = {
            tuple(e - 1 for e in k): (INF if v == "inf" else int(v)) for k, v in data["values"]
        }
        return cls(int(data["n"]), int(data["d"]), vals)


def from_matrix(M: KMatrix) -> ValuatedMatroid:
    """p(omega) = val det of the d x d column submatrix M_omega."""
    d, n = M.shape
    if n < d:
        raise RankDeficient(f"{d}x{n} matrix cannot have rank {d}")
    vals = {omega: M.submatrix(omega).det().valuation for omega in combinations(range(n), d)}
    if all(v == INF for v in vals.values()):
        raise RankDeficient(f"matrix has rank < {d}")
    return ValuatedMatroid(n, d, vals)


def uniform(n: int, d: int) -> ValuatedMatroid:
    return ValuatedMatroid(n, d, {k: 0 for k in combinations(range(n), d)})


def _min_twice(numbers) -> bool:
    finite = sorted(x for x in numbers if x != INF)
    return not finite or (len(finite) >= 2 and finite[0] == finite[1])


def check_axiom(p: ValuatedMatroid) -> bool:
    """Tropical Pluecker relations: for every (d-1)-set sigma and (d+1)-set tau,
    min_i p(sigma + tau_i) + p(tau - tau_i) is attained at least twice."""
    ground = range(p.n)
    for sigma in combinations(ground, p.d - 1):
        for tau in combinations(ground, p.d + 1):
            terms = [p(sigma + (t,)) + p(tau[:i] + tau[i + 1:]) for i, t in enumerate(tau)]
            if not _min_twice(terms):
                return False
    return True


@dataclass(frozen=True)
class Cocircuit:
    base: tuple
    vector: tuple


def cocircuits(p: ValuatedMatroid) -> list:
    """One cocircuit p(sigma *) per (d-1)-subset sigma having a finite entry."""
    out = []
    for sigma in combinations(range(p.n), p.d - 1):
        vec = tuple(p(sigma + (j,)) for j in range(p.n))
        if any(v != INF for v in vec):
            out.append(Cocircuit(sigma, vec))
    return out


def distinct_cocircuit_points(p: ValuatedMatroid) -> list:
    """Normalized cocircuits with projective duplicates removed, in first-seen order."""
    seen = {}
    for c in cocircuits(p):
        seen.setdefault(normalize(c.vector), c.base)
    return list(seen)


def linear_space(p: ValuatedMatroid) -> TropPolytope:
    """L_p as the tropical hull of all cocircuits in compactified TP^{n-1}."""
    return TropPolytope(tuple(c.vector for c in cocircuits(p)))


def in_linear_space(p: ValuatedMatroid, x: Sequence) -> bool:
    """Circuit criterion: for every (d+1)-set tau, min_i p(tau - tau_i) + x_{tau_i}
    is attained at least twice."""
    if len(x) != p.n:
        raise DimensionMismatch(f"point of length {len(x)}, ground set has {p.n}")
    for tau in combinations(range(p.n), p.d + 1):
        terms = [p(tau[:i] + tau[i + 1:]) + x[t] for i, t in enumerate(tau)]
        if not _min_twice(terms):
            return False
    return True


def blue_rule(p: ValuatedMatroid, x: Sequence) -> tuple:
    """w_i = min_sigma max_{j not in sigma} (p(sigma+i) - p(sigma+j) + x_j)."""
    if len(x) != p.n:
        raise DimensionMismatch(f"point of length {len(x)}, ground set has {p.n}")
    w = [INF] * p.n
    for sigma in combinations(range(p.n), p.d - 1):
        row = [p(sigma + (j,)) for j in range(p.n)]
        finite = [j for j in range(p.n) if row[j] != INF]
        if not finite:
            continue
        lam = max(x[j] - row[j] for j in finite)
        if lam == INF:
            continue
        for i in finite:
            if row[i] + lam < w[i]:
                w[i] = row[i] + lam
    return tuple(w)


def red_rule(p: ValuatedMatroid, x: Sequence) -> tuple:
    """x + v, where v collects the circuit gaps gamma_{tau,i} as maxima."""
    if len(x) != p.n:
        raise DimensionMismatch(f"point of length {len(x)}, ground set has {p.n}")
    v = [0] * p.n
    for tau in combinations(range(p.n), p.d + 1):
        terms = [p(tau[:i] + tau[i + 1:]) + x[t] for i, t in enumerate(tau)]
        finite = sorted((val, i) for i, val in enumerate(terms) if val != INF)
        if not finite:
            continue
        if len(finite) == 1:
            gap = INF
        elif finite[0][0] == finite[1][0]:
            continue
        else:
            gap = finite[1][0] - finite[0][0]
        t = tau[finite[0][1]]
        if gap > v[t]:
            v[t] = gap
    return tuple(a + b for a, b in zip(x, v))


def project(p: ValuatedMatroid, x: Sequence, check: bool = True) -> tuple:
    """Nearest point of L_p above x, by the Blue Rule, cross-checked by the Red Rule."""
    w = blue_rule(p, x)
    if check:
        r = red_rule(p, x)
        if w != r:
            raise BlueRedMismatch(dict(p.values), tuple(x), w, r)
    return w


@dataclass(frozen=True)
class OrdinaryMatroid:
    n: int
    bases: tuple  # sorted d-tuples, lexicographic

    def __post_init__(self):
        if not self.bases:
            raise ValueError("a matroid needs at least one basis")
        object.__setattr__(self, "bases", tuple(sorted(tuple(sorted(b)) for b in self.bases)))

    @property
    def rank(self):
        return len(self.bases[0])

    def first_basis(self):
        return self.bases[0]

    def satisfies_exchange(self) -> bool:
        bases = set(self.bases)
        for A in bases:
            for B in bases:
                for a in set(A) - set(B):
                    if not any(
                        tuple(sorted((set(A) - {a}) | {b})) in bases for b in set(B) - set(A)
                    ):
                        return False
        return True


def matroid_at(p: ValuatedMatroid, u: Sequence) -> OrdinaryMatroid:
    """Bases of M_u: the d-sets tau minimizing p(tau) - sum(u_tau)."""
    if len(u) != p.n:
        raise DimensionMismatch(f"point of length {len(u)}, ground set has {p.n}")
    if any(c == INF for c in u):
        raise ValueError("matroid_at needs a finite point")
    scores = {tau: v - sum(u[t] for t in tau) for tau, v in p.values.items() if v != INF}
    best = min(scores.values())
    return OrdinaryMatroid(p.n, tuple(t for t, s in scores.items() if s == best))
