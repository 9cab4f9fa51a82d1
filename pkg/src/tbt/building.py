"""Lattices in K^d, their classes, and membranes in the Bruhat-Tits building of SL_d(K).

A lattice is stored by its canonical basis: the unique lower-triangular
Hermite form over R = C[[z]].  Column j has zeros above row j, the pure
power ``z**k_j`` on the diagonal, and entries below the diagonal in row i
reduced modulo ``z**k_i`` (Laurent polynomials with exponents < k_i).
Canonical bases commute with scaling by powers of z.
"""

from __future__ import annotations

from functools import cached_property
from typing import Sequence

from .errors import DimensionMismatch, PointNotInLinearSpace, RankDeficient, SingularMatrix
from .scalar_field import (
    INF,
    ZERO,
    KMatrix,
    coerce,
    matrix_inverse,
    require_full_rank,
    require_invertible,
    smith_over_dvr,
    z_power,
)
from .tropical_core import normalize
from .valuated_matroid import ValuatedMatroid, from_matrix, in_linear_space, matroid_at


def _hermite_columns(columns, d):
    """Canonical basis (as a list of column lists) of the R-span of ``columns``."""
    cols = [list(c) for c in columns if any(c)]
    basis = []
    exps = []
    for i in range(d):
        best = None
        for idx, c in enumerate(cols):
            v = c[i].valuation
            if v != INF and (best is None or v < best[0]):
                best = (v, idx)
        if best is None:
            raise RankDeficient("generators do not span K^d")
        k, idx = best
        piv = cols.pop(idx)
        unit = piv[i].times_z(-k)
        if unit.num != (1,) or not unit.is_monomial():
            inv = unit.inverse()
            piv = [x * inv if x else x for x in piv]
        zk = z_power(-k)
        rest = []
        for c in cols:
            if c[i]:
                f = c[i] * zk
                c = [x - f * y if y else x for x, y in zip(c, piv)]
            if any(c):
                rest.append(c)
        cols = rest
        basis.append(piv)
        exps.append(k)
    for i in range(1, d):
        k = exps[i]
        zk = z_power(-k)
        for j in range(i):
            x = basis[j][i]
            if not x:
                continue
            r = x.truncate_below(k)
            if r == x:
                continue
            f = (x - r) * zk
            basis[j] = [a - f * b if b else a for a, b in zip(basis[j], basis[i])]
            basis[j][i] = r
    return basis


class Lattice:
    """Full-rank R-submodule of K^d, compared by canonical basis."""

    __slots__ = ("basis", "d", "__dict__")

    def __init__(self, generators: KMatrix):
        d = generators.nrows
        if generators.ncols < d:
            raise RankDeficient(f"{generators.ncols} vectors cannot span K^{d}")
        cols = _hermite_columns(generators.columns(), d)
        self.basis = KMatrix.from_columns(cols)
        self.d = d

    @classmethod
    def _from_canonical(cls, basis: KMatrix):
        obj = cls.__new__(cls)
        obj.basis = basis
        obj.d = basis.nrows
        return obj

    @classmethod
    def standard(cls, d):
        return cls._from_canonical(KMatrix.identity(d))

    @classmethod
    def from_columns(cls, cols):
        return cls(KMatrix.from_columns([[coerce(x) for x in c] for c in cols]))

    @cached_property
    def inverse_basis(self):
        return matrix_inverse(self.basis)

    @cached_property
    def min_entry_valuation(self):
        return min(x.valuation for r in self.basis.rows for x in r)

    def scaled(self, k: int) -> "Lattice":
        """z**k * Lambda."""
        return Lattice._from_canonical(self.basis.times_z(k))

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def __contains__(self, f):
        return member(f, self)

    def __le__(self, other):
        return all(member(c, other) for c in self.basis.columns())

    def __lt__(self, other):
        return self <= other and self != other

    def __repr__(self):
        return f"Lattice({[[str(x) for x in r] for r in self.basis.rows]})"

    def to_json(self):
        return [[str(x) for x in r] for r in self.basis.rows]


class LatticeClass:
    """Equivalence class of lattices under scaling by K*."""

    __slots__ = ("representative", "shift")

    def __init__(self, lattice: Lattice):
        m = lattice.min_entry_valuation
        self.representative = lattice.scaled(-m)
        self.shift = m  # lattice = z**shift * representative

    def __eq__(self, other):
        return isinstance(other, LatticeClass) and self.representative == other.representative

    def __hash__(self):
        return hash(self.representative)

    def __repr__(self):
        return f"LatticeClass({self.representative!r})"

    def to_json(self):
        return {"basis": self.representative.to_json(), "scaling_exponent": self.shift}


# --- norms and membership -------------------------------------------------------

def norm_value(L: Lattice, f: Sequence):
    """Integral additive norm N_L(f) = min val(B^{-1} f); infinite for f = 0."""
    if len(f) != L.d:
        raise DimensionMismatch(f"vector of length {len(f)} in K^{L.d}")
    coords = L.inverse_basis.apply(f)
    return min(c.valuation for c in coords)


def norm_value_by_scan(L: Lattice, f: Sequence, lo=-64, hi=64):
    """max{u : z^{-u} f in L} by scanning u; the direct definition of the norm."""
    f = [coerce(x) for x in f]
    if not any(f):
        return INF
    best = None
    for u in range(lo, hi + 1):
        if member([x.times_z(-u) for x in f], L):
            best = u
    if best is None or best == hi:
        raise ValueError("scan range too small")
    return best


def member(f: Sequence, L: Lattice) -> bool:
    return norm_value(L, f) >= 0


# --- module operations ----------------------------------------------------------

def lattice_sum(L1: Lattice, L2: Lattice) -> Lattice:
    if L1.d != L2.d:
        raise DimensionMismatch("lattices in different dimensions")
    return Lattice(L1.basis.hstack(L2.basis))


def intersect(L1: Lattice, L2: Lattice) -> Lattice:
    """Basis B1 U diag(z^max(e,0)) from the Smith form U diag(z^e) V of B1^{-1} B2."""
    if L1.d != L2.d:
        raise DimensionMismatch("lattices in different dimensions")
    U, e, _ = smith_over_dvr(L1.inverse_basis @ L2.basis)
    return Lattice((L1.basis @ U).scale_columns_by_z([max(k, 0) for k in e]))


def intersect_all(lattices: Sequence[Lattice]) -> Lattice:
    out = lattices[0]
    for L in lattices[1:]:
        out = intersect(out, L)
    return out


def dual(L: Lattice) -> Lattice:
    """Hom_R(L, R) inside the dual space, with basis the inverse transpose."""
    return Lattice(L.inverse_basis.transpose())


def relative_exponents(L1: Lattice, L2: Lattice):
    """Smith exponents of B1^{-1} B2: elementary divisors of L2 relative to L1."""
    return smith_over_dvr(L1.inverse_basis @ L2.basis).exponents


def adjacent(c1, c2) -> bool:
    """Adjacency of classes: relative exponents, shifted to start at 0, are 0/1, not all 0."""
    L1 = c1.representative if isinstance(c1, LatticeClass) else c1
    L2 = c2.representative if isinstance(c2, LatticeClass) else c2
    e = relative_exponents(L1, L2)
    m = min(e)
    shifted = [k - m for k in e]
    return all(k in (0, 1) for k in shifted) and any(shifted)


# --- membranes -------------------------------------------------------------------

class Membrane:
    """Membrane [M] spanned by the n columns of a rank-d matrix."""

    def __init__(self, columns: KMatrix):
        self.columns = require_full_rank(columns)

    @property
    def d(self):
        return self.columns.nrows

    @property
    def n(self):
        return self.columns.ncols

    @cached_property
    def matroid(self) -> ValuatedMatroid:
        return from_matrix(self.columns)

    def extended(self, new_columns) -> "Membrane":
        extra = KMatrix.from_columns(new_columns)
        return Membrane(self.columns.hstack(extra))

    def to_json(self):
        return {"columns": [[str(x) for x in r] for r in self.columns.rows]}


def psi(W: Membrane, L) -> tuple:
    """Norms of the membrane's columns: coordinatewise min of the rows of val(B^{-1} M)."""
    if not isinstance(L, Lattice):
        L = Lattice(require_invertible(L))
    if L.d != W.d:
        raise DimensionMismatch("lattice and membrane live in different dimensions")
    vals = (L.inverse_basis @ W.columns).valuation_matrix()
    return tuple(min(col) for col in zip(*vals))


def psi_by_norms(W: Membrane, L: Lattice) -> tuple:
    return tuple(norm_value(L, f) for f in W.columns.columns())


def scaled_generators(W: Membrane, u: Sequence) -> KMatrix:
    """The matrix M diag(z^{-u})."""
    return W.columns.scale_columns_by_z([-c for c in u])


def lattice_from_point(W: Membrane, u: Sequence, check: bool = True) -> Lattice:
    """R{z^{-u_1} f_1, ..., z^{-u_n} f_n} for a lattice point u of L_p, built from the
    lexicographically first basis of M_u."""
    if len(u) != W.n:
        raise DimensionMismatch(f"point of length {len(u)}, membrane has {W.n} columns")
    if any(c == INF for c in u):
        raise PointNotInLinearSpace("lattice points of the membrane are finite")
    if check and not in_linear_space(W.matroid, u):
        raise PointNotInLinearSpace(f"{tuple(u)} violates the circuit criterion")
    basis = matroid_at(W.matroid, u).first_basis()
    return Lattice(scaled_generators(W, u).submatrix(basis))


def lattice_spanned(W: Membrane, u: Sequence) -> Lattice:
    """The R-span of all n scaled columns (no membership requirement on u)."""
    return Lattice(scaled_generators(W, u))


def retract(W: Membrane, L: Lattice) -> Lattice:
    """Nearest-membrane retraction r_W, via the psi coordinates."""
    return lattice_from_point(W, psi(W, L), check=False)


def point_of(W: Membrane, L: Lattice) -> tuple:
    """Normalized psi coordinates, the lattice-class label used in outputs."""
    return normalize(psi(W, L))
