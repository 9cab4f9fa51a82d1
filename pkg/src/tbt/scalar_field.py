"""Exact arithmetic in K = Q(z) viewed inside the Laurent series field C((z)).

A scalar is stored as ``z**shift * num(z) / den(z)`` where ``num`` and ``den``
are ordinary polynomials with rational coefficients, both with nonzero
constant term, coprime, and ``den(0) == 1``.  That form is unique, so
equality and hashing are structural and ``valuation`` is just ``shift``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, ParseError, RankDeficient, SingularMatrix

INF = math.inf

_F0 = Fraction(0)
_F1 = Fraction(1)


# --- dense polynomials over Q, low degree first ---------------------------

def _trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return tuple(p)


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _pshift_add(a, b, k):
    """a + z**k * b for k >= 0."""
    out = list(a) + [_F0] * max(0, len(b) + k - len(a))
    for i, c in enumerate(b):
        out[i + k] += c
    return _trim(out)


def _pmul(a, b):
    if not a or not b:
        return ()
    if len(a) == 1:
        return tuple(a[0] * c for c in b)
    if len(b) == 1:
        return tuple(b[0] * c for c in a)
    out = [_F0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pscale(a, c):
    return tuple(x * c for x in a)


def _pdivmod(a, b):
    a = list(a)
    n = len(a) - len(b) + 1
    if n <= 0:
        return (), tuple(a)
    q = [_F0] * n
    inv = 1 / b[-1]
    for i in range(n - 1, -1, -1):
        c = a[i + len(b) - 1] * inv
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    return _trim(q), _trim(a[: len(b) - 1])


def _pgcd(a, b):
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, (_pscale(r, 1 / r[-1]) if r else ())
    return _pscale(a, 1 / a[-1])


def _low_zeros(p):
    k = 0
    while k < len(p) and not p[k]:
        k += 1
    return k


class RationalFunctionScalar:
    """Immutable element of K in canonical form."""

    __slots__ = ("shift", "num", "den", "_hash")

    def __init__(self, shift=0, num=(), den=(_F1,)):
        # trusted constructor: callers pass canonical data, use _make otherwise
        self.shift = shift
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _make(cls, shift, num, den):
        num = _trim(num)
        if not num:
            return ZERO
        den = _trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        k = _low_zeros(num)
        if k:
            num = num[k:]
            shift += k
        k = _low_zeros(den)
        if k:
            den = den[k:]
            shift -= k
        if len(den) > 1 and len(num) > 0:
            g = _pgcd(num, den)
            if len(g) > 1:
                num, _ = _pdivmod(num, g)
                den, _ = _pdivmod(den, g)
        c = den[0]
        if c != 1:
            num = _pscale(num, 1 / c)
            den = _pscale(den, 1 / c)
        return cls(shift, tuple(num), tuple(den))

    @classmethod
    def monomial(cls, coeff, exponent=0):
        coeff = Fraction(coeff)
        if not coeff:
            return ZERO
        return cls(int(exponent), (coeff,), (_F1,))

    @classmethod
    def laurent(cls, coeffs: dict):
        """Build from ``{exponent: coefficient}``."""
        items = {k: Fraction(v) for k, v in coeffs.items() if v}
        if not items:
            return ZERO
        lo = min(items)
        num = [_F0] * (max(items) - lo + 1)
        for k, v in items.items():
            num[k - lo] = v
        return cls(lo, tuple(num), (_F1,))

    # --- basic predicates ---------------------------------------------------

    def __bool__(self):
        return bool(self.num)

    @property
    def valuation(self):
        return self.shift if self.num else INF

    @property
    def leading_coefficient(self):
        """Coefficient of ``z**valuation`` in the Laurent expansion."""
        return self.num[0] if self.num else _F0

    def is_laurent(self):
        return len(self.den) == 1

    def is_monomial(self):
        return len(self.num) == 1 and len(self.den) == 1

    # --- arithmetic ---------------------------------------------------------

    def __neg__(self):
        if not self.num:
            return self
        return RationalFunctionScalar(self.shift, tuple(-c for c in self.num), self.den)

    def __add__(self, other):
        other = coerce(other)
        if not self.num:
            return other
        if not other.num:
            return self
        a, b = self, other
        if a.shift > b.shift:
            a, b = b, a
        k = b.shift - a.shift
        if a.den == b.den:
            return RationalFunctionScalar._make(a.shift, _pshift_add(a.num, b.num, k), a.den)
        num = _pshift_add(_pmul(a.num, b.den), _pmul(b.num, a.den), k)
        return RationalFunctionScalar._make(a.shift, num, _pmul(a.den, b.den))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-coerce(other))

    def __rsub__(self, other):
        return coerce(other) + (-self)

    def __mul__(self, other):
        other = coerce(other)
        if not self.num or not other.num:
            return ZERO
        shift = self.shift + other.shift
        if len(self.den) == 1 and len(other.den) == 1:
            return RationalFunctionScalar(shift, _pmul(self.num, other.num), (_F1,))
        return RationalFunctionScalar._make(
            shift, _pmul(self.num, other.num), _pmul(self.den, other.den)
        )

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero in K")
        return RationalFunctionScalar._make(-self.shift, self.den, self.num)

    def __truediv__(self, other):
        return self * coerce(other).inverse()

    def __rtruediv__(self, other):
        return coerce(other) * self.inverse()

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        out = ONE
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def times_z(self, k):
        """Multiply by ``z**k`` without touching coefficients."""
        if not self.num or not k:
            return self
        return RationalFunctionScalar(self.shift + k, self.num, self.den)

    # --- series -------------------------------------------------------------

    def series(self, terms):
        """First ``terms`` Laurent coefficients, starting at ``z**valuation``."""
        num, den = self.num, self.den
        out = []
        for t in range(terms):
            c = num[t] if t < len(num) else _F0
            for s in range(1, min(t, len(den) - 1) + 1):
                c -= den[s] * out[t - s]
            out.append(c)
        return out

    def truncate_below(self, k):
        """The Laurent polynomial made of all terms with exponent < k."""
        if not self.num or self.shift >= k:
            return ZERO
        m = k - self.shift
        if len(self.den) == 1:
            return RationalFunctionScalar._make(self.shift, self.num[:m], (_F1,))
        return RationalFunctionScalar._make(self.shift, self.series(m), (_F1,))

    def constant_term(self):
        """Coefficient of ``z**0`` of the expansion; requires valuation >= 0."""
        if not self.num or self.shift > 0:
            return _F0
        if self.shift < 0:
            raise ValueError("element has a pole at z = 0")
        return self.num[0]

    # --- identity -----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, RationalFunctionScalar):
            try:
                other = coerce(other)
            except TypeError:
                return NotImplemented
        return (self.shift, self.num, self.den) == (other.shift, other.num, other.den) or (
            not self.num and not other.num
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shift, self.num, self.den) if self.num else 0)
        return self._hash

    def __repr__(self):
        return f"K({str(self)!r})"

    def __str__(self):
        if not self.num:
            return "0"
        if len(self.den) == 1:
            return _format_laurent(self.shift, self.num)
        return f"({_format_laurent(self.shift, self.num)})/({_format_laurent(0, self.den)})"


def _format_coeff(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_laurent(shift, coeffs):
    parts = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        e = shift + i
        mag = abs(c)
        if e == 0:
            body = _format_coeff(mag)
        else:
            mono = "z" if e == 1 else f"z^{e}"
            body = mono if mag == 1 else f"{_format_coeff(mag)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


ZERO = RationalFunctionScalar(0, (), (_F1,))
ONE = RationalFunctionScalar(0, (_F1,), (_F1,))
Z = RationalFunctionScalar(1, (_F1,), (_F1,))


def coerce(x) -> RationalFunctionScalar:
    if isinstance(x, RationalFunctionScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalFunctionScalar.monomial(x, 0)
    if isinstance(x, str):
        return parse_scalar(x, rational=True)
    raise TypeError(f"cannot interpret {x!r} as an element of K")


K = coerce


def z_power(k: int) -> RationalFunctionScalar:
    return RationalFunctionScalar(int(k), (_F1,), (_F1,))


def valuation(c) -> int | float:
    return coerce(c).valuation


# --- scalar grammar ----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|(z)|(\^)|([-+*/()]))")


class _Parser:
    def __init__(self, text, line, col0):
        self.text = text
        self.line = line
        self.col0 = col0
        self.tokens = []
        pos = 0
        text_len = len(text.rstrip())
        while pos < text_len:
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
                self.fail(f"unexpected character {text[bad]!r}", bad)
            start = m.start(m.lastindex)
            self.tokens.append((m.group(m.lastindex), start))
            pos = m.end()
        self.i = 0

    def fail(self, msg, pos=None):
        if pos is None:
            pos = self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)
        raise ParseError(msg, self.line, self.col0 + pos + 1)

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            self.fail("empty expression")
        value = self.expr()
        if self.peek() is not None:
            self.fail(f"unexpected {self.peek()!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if not rhs:
                    self.fail("division by zero")
                value = value / rhs
        return value

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() in ("-", "+"):
                sign = -1 if self.take() == "-" else 1
            tok = self.peek()
            if tok is None or not tok.isdigit():
                self.fail("exponent must be an integer")
            self.take()
            e = sign * int(tok)
            if e < 0 and not base:
                self.fail("division by zero")
            base = base**e
        return base

    def atom(self):
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of expression")
        if tok == "z":
            self.take()
            return Z
        if tok == "(":
            self.take()
            value = self.expr()
            if self.peek() != ")":
                self.fail("missing ')'")
            self.take()
            return value
        if tok[0].isdigit():
            self.take()
            return RationalFunctionScalar.monomial(Fraction(tok), 0)
        self.fail(f"unexpected {tok!r}")


def parse_scalar(text: str, rational: bool = False, line=None, column=1) -> RationalFunctionScalar:
    """Parse one entry of the scalar grammar.

    With ``rational=False`` only Laurent polynomials are accepted.
    """
    value = _Parser(text, line, column - 1).parse()
    if not rational and not value.is_laurent():
        raise ParseError(
            f"{text.strip()!r} has a nontrivial denominator (pass rational=True / --rational)",
            line,
            column,
        )
    return value


# --- matrices ----------------------------------------------------------------

class KMatrix:
    """Immutable dense matrix over K."""

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(coerce(x) for x in r) for r in rows)
        if not rows:
            raise DimensionMismatch("matrix needs at least one row")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged matrix")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols
        self._hash = None

    @classmethod
    def from_columns(cls, cols):
        cols = [tuple(c) for c in cols]
        return cls(zip(*cols))

    @classmethod
    def identity(cls, d):
        return cls([[ONE if i == j else ZERO for j in range(d)] for i in range(d)])

    @classmethod
    def diag(cls, entries):
        entries = [coerce(e) for e in entries]
        d = len(entries)
        return cls([[entries[i] if i == j else ZERO for j in range(d)] for i in range(d)])

    @classmethod
    def z_diag(cls, exponents):
        return cls.diag([z_power(e) for e in exponents])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def submatrix(self, cols: Sequence[int], rows: Sequence[int] | None = None):
        rows = range(self.nrows) if rows is None else rows
        return KMatrix([[self.rows[i][j] for j in cols] for i in rows])

    def hstack(self, *others):
        mats = (self,) + others
        if len({m.nrows for m in mats}) != 1:
            raise DimensionMismatch("hstack needs equal row counts")
        return KMatrix([sum((m.rows[i] for m in mats), ()) for i in range(self.nrows)])

    def transpose(self):
        return KMatrix(zip(*self.rows))

    T = property(transpose)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = ZERO
                for x, y in zip(r, c):
                    if x.num and y.num:
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return KMatrix(out)

    def apply(self, vec):
        if len(vec) != self.ncols:
            raise DimensionMismatch("vector length does not match matrix")
        vec = [coerce(v) for v in vec]
        out = []
        for r in self.rows:
            acc = ZERO
            for x, y in zip(r, vec):
                if x.num and y.num:
                    acc = acc + x * y
            out.append(acc)
        return tuple(out)

    def scale_columns_by_z(self, exponents):
        """Return ``self @ diag(z**e)``."""
        return KMatrix([[x.times_z(e) for x, e in zip(r, exponents)] for r in self.rows])

    def times_z(self, k):
        return KMatrix([[x.times_z(k) for x in r] for r in self.rows])

    def valuation_matrix(self):
        return tuple(tuple(x.valuation for x in r) for r in self.rows)

    def det(self):
        if self.nrows != self.ncols:
            raise DimensionMismatch("determinant of a non-square matrix")
        return _det(self.rows)

    def rank(self):
        return _rank([list(r) for r in self.rows])

    def inverse(self):
        return matrix_inverse(self)

    def __eq__(self, other):
        return isinstance(other, KMatrix) and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self):
        return f"KMatrix({[[str(x) for x in r] for r in self.rows]})"

    def to_text(self):
        return "\n".join("  ".join(_entry_text(x) for x in r) for r in self.rows)


def _entry_text(x):
    # whitespace separates entries in the block format, so it is squeezed out
    return str(x).replace(" ", "")


def _det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if n <= 4:
        # cofactor expansion keeps Laurent inputs free of denominators
        acc = ZERO
        for j, a in enumerate(rows[0]):
            if not a:
                continue
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            term = a * _det(minor)
            acc = acc + term if j % 2 == 0 else acc - term
        return acc
    m = [list(r) for r in rows]
    det = ONE
    for c in range(n):
        piv = None
        for r in range(c, n):
            if m[r][c] and (piv is None or m[r][c].valuation < m[piv][c].valuation):
                piv = r
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        p = m[c][c]
        det = det * p
        inv = p.inverse()
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def _rank(m):
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    rank = 0
    for c in range(ncols):
        piv = None
        for r in range(rank, nrows):
            if m[r][c]:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][c].inverse()
        for r in range(rank + 1, nrows):
            if m[r][c]:
                f = m[r][c] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def matrix_inverse(M: KMatrix) -> KMatrix:
    """Exact inverse by Gauss-Jordan elimination.

    Raises SingularMatrix when det(M) = 0.
    """
    n = M.nrows
    if n != M.ncols:
        raise DimensionMismatch("inverse of a non-square matrix")
    a = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(M.rows)]
    for c in range(n):
        piv = None
        for r in range(c, n):
            if a[r][c] and (piv is None or a[r][c].valuation < a[piv][c].valuation):
                piv = r
        if piv is None:
            raise SingularMatrix("matrix is singular over K")
        a[c], a[piv] = a[piv], a[c]
        inv = a[c][c].inverse()
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y if y else x for x, y in zip(a[r], a[c])]
    return KMatrix([r[n:] for r in a])


def valuation_matrix(M: KMatrix):
    return M.valuation_matrix()


def require_invertible(M: KMatrix) -> KMatrix:
    if M.nrows != M.ncols:
        raise DimensionMismatch(f"expected a square matrix, got {M.shape}")
    if not M.det():
        raise SingularMatrix("matrix is singular over K")
    return M


def require_full_rank(M: KMatrix) -> KMatrix:
    if M.rank() < M.nrows:
        raise RankDeficient(f"{M.nrows}x{M.ncols} matrix has rank < {M.nrows}")
    return M


# --- Smith form over R = C[[z]] -------------------------------------------------

class SmithData:
    """``A = U @ diag(z**e) @ V`` with ``U, V`` in GL_d(R) and ``e`` ascending."""

    __slots__ = ("U", "exponents", "V")

    def __init__(self, U, exponents, V):
        self.U = U
        self.exponents = tuple(exponents)
        self.V = V

    def __iter__(self):
        return iter((self.U, self.exponents, self.V))

    def __repr__(self):
        return f"SmithData(exponents={self.exponents})"


def smith_over_dvr(A: KMatrix) -> SmithData:
    """Smith normal form of an invertible matrix over the valuation ring.

    Pivots on a minimum-valuation entry (lowest row, then lowest column),
    so every elimination multiplier has nonnegative valuation.
    """
    n = A.nrows
    if n != A.ncols:
        raise DimensionMismatch("Smith form needs a square matrix")
    W = [list(r) for r in A.rows]
    U = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    V = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    exps = []
    for t in range(n):
        best = None
        for i in range(t, n):
            for j in range(t, n):
                v = W[i][j].valuation
                if v != INF and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            raise SingularMatrix("matrix is singular over K")
        k, pi, pj = best
        if pi != t:
            W[t], W[pi] = W[pi], W[t]
            for r in U:
                r[t], r[pi] = r[pi], r[t]
        if pj != t:
            for r in W:
                r[t], r[pj] = r[pj], r[t]
            V[t], V[pj] = V[pj], V[t]
        unit = W[t][t].times_z(-k)
        if unit != ONE:
            inv = unit.inverse()
            W[t] = [x * inv for x in W[t]]
            for r in U:
                r[t] = r[t] * unit
        piv_inv = z_power(-k)
        for r in range(t + 1, n):
            if W[r][t]:
                c = W[r][t] * piv_inv
                W[r] = [x - c * y for x, y in zip(W[r], W[t])]
                for row in U:
                    if row[r]:
                        row[t] = row[t] + c * row[r]
        for col in range(t + 1, n):
            if W[t][col]:
                c = W[t][col] * piv_inv
                W[t][col] = ZERO
                V[t] = [x + c * y for x, y in zip(V[t], V[col])]
        exps.append(k)
    return SmithData(KMatrix(U), exps, KMatrix(V))
