"""Exact arithmetic over Q and simple extensions Q[x]/(m), plus sparse linear algebra.

Scalars of Q are ``gmpy2.mpq``.  Scalars of a proper extension are
:class:`NFElement` (power-basis coordinates).  Matrices are stored sparsely
as ``{row: {col: value}}`` with zero entries never stored.
"""

from __future__ import annotations

import heapq
from functools import cached_property
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import InvalidField

ZERO = mpq(0)
ONE = mpq(1)


def to_rational(x) -> mpq:
    if isinstance(x, float):
        raise ValueError(f"floating point value {x!r} refused; pass an exact rational")
    if isinstance(x, str):
        return mpq(x.strip())
    return mpq(x)


# ---------------------------------------------------------------------------
# univariate polynomials over Q, coefficient lists low -> high


def _strip(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def qpoly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = _strip(list(a))
    b = _strip(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [ZERO] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for k, bk in enumerate(b):
            a[shift + k] -= c * bk
        a.pop()
        _strip(a)
    return q, a


def qpoly_gcd(a: Sequence, b: Sequence) -> list:
    a = _strip([mpq(c) for c in a])
    b = _strip([mpq(c) for c in b])
    while b:
        a, b = b, qpoly_divmod(a, b)[1]
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def qpoly_derivative(p: Sequence) -> list:
    return [k * p[k] for k in range(1, len(p))]


def qpoly_xgcd(a: Sequence, b: Sequence) -> tuple[list, list, list]:
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = _strip([mpq(c) for c in a]), _strip([mpq(c) for c in b])
    s0, s1 = [ONE], []
    t0, t1 = [], [ONE]
    while r1:
        q, r = qpoly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1))
    lead = r0[-1]
    return [c / lead for c in r0], [c / lead for c in s0], [c / lead for c in t0]


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _strip(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[k] if k < len(a) else ZERO) - (b[k] if k < len(b) else ZERO) for k in range(n)]
    return _strip(out)


# ---------------------------------------------------------------------------
# fields


class FieldSpec:
    """The coefficient field Q[x]/(m) for a monic irreducible m (``[0, 1]`` is Q).

    ``min_poly`` lists coefficients from the constant term up.
    """

    def __init__(self, min_poly: Sequence = ("0", "1")):
        coeffs = [to_rational(c) for c in min_poly]
        _strip(coeffs)
        if len(coeffs) < 2:
            raise InvalidField("minimal polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise InvalidField("minimal polynomial must be monic")
        if len(coeffs) == 2:
            coeffs = [ZERO, ONE]
        self.min_poly = tuple(coeffs)
        self.degree = len(coeffs) - 1
        self.warnings: list[str] = []
        if self.degree >= 2:
            self._validate()
            self._reduction = self._reduction_table()

    def _validate(self):
        if len(qpoly_gcd(self.min_poly, qpoly_derivative(self.min_poly))) > 1:
            raise InvalidField("minimal polynomial is not squarefree")
        import sympy

        x = sympy.Symbol("x")
        poly = sympy.Poly(list(reversed([sympy.Rational(str(c)) for c in self.min_poly])), x, domain="QQ")
        if any(f.degree() == 1 for f, _ in poly.factor_list()[1]):
            raise InvalidField("minimal polynomial has a rational root")
        if not poly.is_irreducible:
            raise InvalidField("minimal polynomial is reducible over Q")

    def _reduction_table(self):
        # x^k mod m for k < 2d - 1, as coordinate tuples
        d = self.degree
        table = []
        cur = [ZERO] * d
        cur[0] = ONE
        for _ in range(2 * d - 1):
            table.append(tuple(cur))
            top = cur[-1]
            cur = [ZERO] + cur[:-1]
            if top:
                for k in range(d):
                    cur[k] -= top * self.min_poly[k]
        return table

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.min_poly == other.min_poly

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        return f"FieldSpec({[str(c) for c in self.min_poly]})"

    @property
    def zero(self):
        return ZERO if self.is_rational else NFElement(self, (ZERO,) * self.degree)

    @property
    def one(self):
        return ONE if self.is_rational else self.element([ONE])

    def gen(self):
        if self.is_rational:
            raise InvalidField("Q has no adjoined generator")
        return self.element([ZERO, ONE])

    def element(self, coords: Sequence):
        coords = [to_rational(c) for c in coords]
        if self.is_rational:
            return coords[0] if coords else ZERO
        if len(coords) > self.degree:
            raise InvalidField(f"too many coordinates for degree {self.degree}")
        return NFElement(self, tuple(coords) + (ZERO,) * (self.degree - len(coords)))

    def __call__(self, x):
        """Coerce ints, rationals, strings, coordinate lists and own elements."""
        if isinstance(x, NFElement):
            if x.field != self:
                raise InvalidField("scalar belongs to a different field")
            return x
        if isinstance(x, (list, tuple)):
            return self.element(x)
        q = to_rational(x)
        return q if self.is_rational else self.element([q])

    def coords(self, x) -> tuple:
        if isinstance(x, NFElement):
            return x.coords
        q = mpq(x)
        return (q,) if self.is_rational else (q,) + (ZERO,) * (self.degree - 1)

    def fmt(self, x) -> str:
        if self.is_rational or not isinstance(x, NFElement):
            return str(mpq(x))
        return str(x)

    def to_json(self, x):
        return str(mpq(x)) if self.is_rational else [str(c) for c in self.coords(x)]

    def random_element(self, rng, bound: int = 5):
        return self.element([rng.randint(-bound, bound) for _ in range(self.degree)])

    @cached_property
    def _sympy_domain(self):
        import sympy

        if self.is_rational:
            return sympy.QQ
        x = sympy.Symbol("x")
        m = sympy.Poly(list(reversed([sympy.Rational(str(c)) for c in self.min_poly])), x)
        dom = sympy.QQ.algebraic_field(sympy.CRootOf(m.as_expr(), 0))
        if [mpq(str(c)) for c in dom.mod.to_list()] != list(reversed(self.min_poly)):
            raise InvalidField("sympy chose a different primitive element")
        return dom

    def split_linear(self, poly: Sequence) -> tuple[list, list | None]:
        """Roots of ``poly`` (low -> high) in this field, and the product of non-linear factors.

        The second entry is ``None`` when ``poly`` splits into linear factors.
        """
        import sympy

        dom = self._sympy_domain
        x = sympy.Symbol("x")
        if self.is_rational:
            rep = [sympy.Rational(str(c)) for c in reversed(poly)]
        else:
            rep = [dom.new([sympy.Rational(str(c)) for c in reversed(self.coords(a))]) for a in poly]
            rep = list(reversed(rep))
        sp = sympy.Poly.from_list(rep, x, domain=dom)
        roots, rest = [], sympy.Poly.from_list([dom.one], x, domain=dom)
        for factor, mult in sp.factor_list()[1]:
            if factor.degree() == 1:
                a, b = factor.rep.to_list()
                roots.extend([self._from_sympy(-b / a)] * mult)
            else:
                rest = rest * factor**mult
        if rest.degree() == 0:
            return roots, None
        return roots, [self._from_sympy(c) for c in reversed(rest.rep.to_list())]

    def _from_sympy(self, c):
        if self.is_rational:
            return mpq(str(c))
        return self.element([mpq(str(q)) for q in reversed(c.to_list())])


QQ = FieldSpec()


class NFElement:
    """Element of Q[x]/(m), stored by coordinates in the power basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field: FieldSpec, coords: tuple):
        self.field = field
        self.coords = coords

    def _lift(self, other):
        if isinstance(other, NFElement):
            return other.coords
        try:
            q = mpq(other)
        except TypeError:
            return None
        return (q,) + (ZERO,) * (self.field.degree - 1)

    def __add__(self, other):
        oc = self._lift(other)
        if oc is None:
            return NotImplemented
        return NFElement(self.field, tuple(a + b for a, b in zip(self.coords, oc)))

    __radd__ = __add__

    def __sub__(self, other):
        oc = self._lift(other)
        if oc is None:
            return NotImplemented
        return NFElement(self.field, tuple(a - b for a, b in zip(self.coords, oc)))

    def __rsub__(self, other):
        oc = self._lift(other)
        if oc is None:
            return NotImplemented
        return NFElement(self.field, tuple(b - a for a, b in zip(self.coords, oc)))

    def __neg__(self):
        return NFElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if not isinstance(other, NFElement):
            try:
                q = mpq(other)
            except TypeError:
                return NotImplemented
            return NFElement(self.field, tuple(a * q for a in self.coords))
        d = self.field.degree
        prod = [ZERO] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        prod[i + j] += a * b
        out = list(prod[:d])
        table = self.field._reduction
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                for t, r in enumerate(table[k]):
                    if r:
                        out[t] += c * r
        return NFElement(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero")
        g, s, _ = qpoly_xgcd(self.coords, self.field.min_poly)
        if len(g) != 1:
            raise ZeroDivisionError("element is a zero divisor")
        return self.field.element(s)

    def __truediv__(self, other):
        if isinstance(other, NFElement):
            return self * other.inverse()
        return self * (ONE / mpq(other))

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self.field.one, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        oc = self._lift(other)
        if oc is None:
            return NotImplemented
        return self.coords == tuple(oc)

    def __hash__(self):
        if not any(self.coords[1:]):
            return hash(self.coords[0])
        return hash(self.coords)

    def __lt__(self, other):
        return self.coords < tuple(self._lift(other))

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coords):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                mono = "x" if k == 1 else f"x^{k}"
                terms.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# sparse matrices


class Mat:
    """Sparse matrix; ``rows`` maps row index to ``{col: nonzero value}``.

    Treat instances as immutable.
    """

    __slots__ = ("nrows", "ncols", "rows", "field")

    def __init__(self, nrows: int, ncols: int, rows: dict | None = None, field: FieldSpec = QQ):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else {}
        self.field = field

    # constructors
    @classmethod
    def from_rows(cls, data: Sequence[Sequence], field: FieldSpec = QQ) -> "Mat":
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        rows = {}
        for i, r in enumerate(data):
            if len(r) != ncols:
                raise ValueError("ragged matrix")
            d = {}
            for j, v in enumerate(r):
                v = field(v)
                if v:
                    d[j] = v
            if d:
                rows[i] = d
        return cls(nrows, ncols, rows, field)

    @classmethod
    def identity(cls, n: int, field: FieldSpec = QQ) -> "Mat":
        one = field.one
        return cls(n, n, {i: {i: one} for i in range(n)}, field)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: FieldSpec = QQ) -> "Mat":
        return cls(nrows, ncols, {}, field)

    @classmethod
    def from_vec(cls, vec: dict, nrows: int, ncols: int, field: FieldSpec = QQ) -> "Mat":
        rows: dict = {}
        for k, v in vec.items():
            i, j = divmod(k, ncols)
            rows.setdefault(i, {})[j] = v
        return cls(nrows, ncols, rows, field)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def is_square(self):
        return self.nrows == self.ncols

    def nnz(self):
        return sum(len(r) for r in self.rows.values())

    def __getitem__(self, ij):
        i, j = ij
        return self.rows.get(i, {}).get(j, self.field.zero)

    def to_dense(self) -> list[list]:
        zero = self.field.zero
        return [[self.rows.get(i, {}).get(j, zero) for j in range(self.ncols)] for i in range(self.nrows)]

    def vec(self) -> dict:
        """Row-major flattening as a sparse vector."""
        nc = self.ncols
        return {i * nc + j: v for i, r in self.rows.items() for j, v in r.items()}

    def copy_rows(self) -> dict:
        return {i: dict(r) for i, r in self.rows.items()}

    # arithmetic
    def _check(self, other: "Mat"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        rows = self.copy_rows()
        for i, r in other.rows.items():
            tgt = rows.setdefault(i, {})
            for j, v in r.items():
                s = tgt.get(j, 0) + v
                if s:
                    tgt[j] = s
                else:
                    tgt.pop(j, None)
            if not tgt:
                del rows[i]
        return Mat(self.nrows, self.ncols, rows, self.field)

    def __neg__(self) -> "Mat":
        return Mat(self.nrows, self.ncols, {i: {j: -v for j, v in r.items()} for i, r in self.rows.items()}, self.field)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def scale(self, c) -> "Mat":
        c = self.field(c)
        if not c:
            return Mat.zeros(self.nrows, self.ncols, self.field)
        return Mat(self.nrows, self.ncols, {i: {j: c * v for j, v in r.items()} for i, r in self.rows.items()}, self.field)

    def __mul__(self, c) -> "Mat":
        if isinstance(c, Mat):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        orows = other.rows
        out = {}
        for i, r in self.rows.items():
            acc: dict = {}
            for k, a in r.items():
                brow = orows.get(k)
                if brow:
                    for j, b in brow.items():
                        acc[j] = acc.get(j, 0) + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                out[i] = acc
        return Mat(self.nrows, other.ncols, out, self.field)

    @property
    def T(self) -> "Mat":
        rows: dict = {}
        for i, r in self.rows.items():
            for j, v in r.items():
                rows.setdefault(j, {})[i] = v
        return Mat(self.ncols, self.nrows, rows, self.field)

    def kron(self, other: "Mat") -> "Mat":
        rows = {}
        bn, bc = other.nrows, other.ncols
        for i1, r1 in self.rows.items():
            for i2, r2 in other.rows.items():
                rows[i1 * bn + i2] = {j1 * bc + j2: a * b for j1, a in r1.items() for j2, b in r2.items()}
        return Mat(self.nrows * bn, self.ncols * bc, rows, self.field)

    def direct_sum(self, other: "Mat") -> "Mat":
        rows = self.copy_rows()
        for i, r in other.rows.items():
            rows[i + self.nrows] = {j + self.ncols: v for j, v in r.items()}
        return Mat(self.nrows + other.nrows, self.ncols + other.ncols, rows, self.field)

    def trace(self):
        t = self.field.zero
        for i, r in self.rows.items():
            if i in r:
                t = t + r[i]
        return t

    def is_zero(self) -> bool:
        return not self.rows

    def is_diagonal(self) -> bool:
        return all(len(r) == 1 and i in r for i, r in self.rows.items())

    def commutes_with(self, other: "Mat") -> bool:
        return self @ other == other @ self

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, tuple(sorted((k, hash(v)) for k, v in self.vec().items()))))

    def sort_key(self):
        return tuple(self.field.coords(v) for row in self.to_dense() for v in row)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Mat":
        cpos = {c: k for k, c in enumerate(col_idx)}
        rows = {}
        for a, i in enumerate(row_idx):
            r = self.rows.get(i)
            if r:
                d = {cpos[j]: v for j, v in r.items() if j in cpos}
                if d:
                    rows[a] = d
        return Mat(len(row_idx), len(col_idx), rows, self.field)

    def to_json(self):
        return [[self.field.to_json(v) for v in row] for row in self.to_dense()]

    def __repr__(self):
        if self.nrows * self.ncols <= 64:
            return "Mat(" + repr([[self.field.fmt(v) for v in row] for row in self.to_dense()]) + ")"
        return f"Mat({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    def power(self, k: int) -> "Mat":
        out = Mat.identity(self.nrows, self.field)
        for _ in range(k):
            out = out @ self
        return out

    def rank(self) -> int:
        return rref(self)[1]


# ---------------------------------------------------------------------------
# incremental echelon form


def _axpy(target: dict, a, src: dict):
    """target -= a * src, in place, dropping zeros."""
    for j, v in src.items():
        nv = target.get(j, 0) - a * v
        if nv:
            target[j] = nv
        else:
            target.pop(j, None)


class Echelon:
    """Row echelon form built one vector at a time.

    Each stored row has its leftmost entry (the pivot) equal to 1.  Rows may carry
    a tag, a sparse linear combination ``{key: coeff}`` that is transformed
    alongside the vector; this is how witness expressions are tracked.
    """

    def __init__(self, ncols: int, field: FieldSpec = QQ, track: bool = False):
        self.ncols = ncols
        self.field = field
        self.track = track
        self.rows: dict[int, dict] = {}
        self.tags: dict[int, dict] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, vec: dict, tag: dict | None = None) -> tuple[dict, dict | None]:
        vec = dict(vec)
        tag = dict(tag) if (self.track and tag is not None) else None
        rows = self.rows
        heap = [c for c in vec if c in rows]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            a = vec.get(c)
            if not a:
                continue
            row = rows[c]
            for j in row:
                if j != c and j in rows and j not in vec:
                    heapq.heappush(heap, j)
            _axpy(vec, a, row)
            if tag is not None:
                _axpy(tag, a, self.tags[c])
        return vec, tag

    def add(self, vec: dict, tag: dict | None = None) -> bool:
        """Insert ``vec``; return True if it enlarged the span."""
        res, rtag = self.reduce(vec, tag)
        if not res:
            return False
        p = min(res)
        inv = self.field.one / res[p]
        self.rows[p] = {j: v * inv for j, v in res.items()}
        if rtag is not None:
            self.tags[p] = {k: v * inv for k, v in rtag.items() if v}
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]

    def extend(self, vecs: Iterable[dict]) -> "Echelon":
        for v in vecs:
            self.add(v)
        return self

    def reduced(self) -> tuple[list[int], list[dict], list[dict] | None]:
        """Fully reduced rows in increasing pivot order (the canonical rref)."""
        rows = self.rows
        red: dict[int, dict] = {}
        rtags: dict[int, dict] = {}
        for p in sorted(rows, reverse=True):
            row = rows[p]
            out = {j: v for j, v in row.items() if j == p or j not in rows}
            tag = dict(self.tags.get(p, {})) if self.track else None
            for c, a in row.items():
                if c != p and c in rows:
                    for j, v in red[c].items():
                        if j != c:
                            nv = out.get(j, 0) - a * v
                            if nv:
                                out[j] = nv
                            else:
                                out.pop(j, None)
                    if tag is not None:
                        _axpy(tag, a, rtags[c])
            red[p] = out
            if tag is not None:
                rtags[p] = tag
        pivots = sorted(red)
        tags = [rtags[p] for p in pivots] if self.track else None
        return pivots, [red[p] for p in pivots], tags

    def nullspace(self) -> list[dict]:
        """Basis of the right null space of the stored rows, one vector per free column."""
        pivots, rows, _ = self.reduced()
        free = [c for c in range(self.ncols) if c not in self.rows]
        by_free: dict[int, dict] = {f: {f: self.field.one} for f in free}
        for p, row in zip(pivots, rows):
            for j, v in row.items():
                if j != p:
                    by_free[j][p] = -v
        return [by_free[f] for f in free]


# ---------------------------------------------------------------------------
# public linear algebra


def _mat_rows(M: Mat) -> list[dict]:
    return [M.rows[i] for i in sorted(M.rows)]


def rref(M: Mat) -> tuple[Mat, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns (leftmost-pivot rule)."""
    ech = Echelon(M.ncols, M.field).extend(_mat_rows(M))
    pivots, rows, _ = ech.reduced()
    out = Mat(M.nrows, M.ncols, {i: r for i, r in enumerate(rows)}, M.field)
    return out, len(pivots), pivots


def rank(M: Mat) -> int:
    return Echelon(M.ncols, M.field).extend(_mat_rows(M)).rank


def nullspace(rows: Iterable[dict], ncols: int, field: FieldSpec = QQ) -> list[dict]:
    return Echelon(ncols, field).extend(rows).nullspace()


def kernel_basis(M: Mat) -> list[list]:
    """Dense basis vectors of the right null space of M."""
    zero = M.field.zero
    return [[v.get(j, zero) for j in range(M.ncols)] for v in nullspace(_mat_rows(M), M.ncols, M.field)]


def span_union(A: Iterable[dict], B: Iterable[dict], ncols: int, field: FieldSpec = QQ) -> list[dict]:
    """rref basis of span(A) + span(B) for sparse vectors of length ``ncols``."""
    ech = Echelon(ncols, field)
    ech.extend(A)
    ech.extend(B)
    return ech.reduced()[1]


def solve_in_span(basis: Sequence[dict], target: dict, ncols: int, field: FieldSpec = QQ) -> list | None:
    """Coefficients c with sum c_k basis_k = target, or None."""
    ech = Echelon(ncols, field, track=True)
    for k, v in enumerate(basis):
        ech.add(v, {k: field.one})
    res, tag = ech.reduce(target, {})
    if res:
        return None
    # target - sum(tag coeffs * ...) = 0 with tag tracking negated combination
    return [-tag.get(k, field.zero) for k in range(len(basis))]


def min_poly_of(M: Mat) -> list:
    """Monic minimal polynomial of a square matrix (coefficients low -> high), by Krylov on powers."""
    if not M.is_square:
        raise ValueError("min_poly_of needs a square matrix")
    field = M.field
    ech = Echelon(M.nrows * M.ncols, field, track=True)
    power = Mat.identity(M.nrows, field)
    k = 0
    while True:
        res, tag = ech.reduce(power.vec(), {k: field.one})
        if not res:
            # tag holds coefficients of the vanishing combination, with x^k at coefficient 1
            return [tag.get(j, field.zero) for j in range(k + 1)]
        ech.add(power.vec(), {k: field.one})
        power = power @ M
        k += 1


def poly_eval_mat(poly: Sequence, M: Mat) -> Mat:
    """Horner evaluation of a polynomial (low -> high) at a square matrix."""
    out = Mat.zeros(M.nrows, M.ncols, M.field)
    ident = Mat.identity(M.nrows, M.field)
    for c in reversed(list(poly)):
        out = out @ M + ident.scale(c)
    return out
