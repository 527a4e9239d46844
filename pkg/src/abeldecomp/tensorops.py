"""Operators on tensor powers of V: factor embeddings, Koszul-signed permutations,
the pairing/copairing of a symplectic form, the rank-one projector and
antisymmetrizers, and compression to exterior powers.

Tensor basis vectors e_{i_1} (x) ... (x) e_{i_n} are indexed lexicographically,
first factor most significant, which matches ``Mat.kron``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import NotAlternating, NotInvertible, NotWedgeCompatible
from .exactfield import Echelon, FieldSpec, Mat, QQ, rank


@dataclass(frozen=True)
class WeightTag:
    """Tate twist carried by a rank-one image; tensoring adds twists."""

    twist: int

    def __add__(self, other: "WeightTag") -> "WeightTag":
        return WeightTag(self.twist + other.twist)


@dataclass(frozen=True)
class TensorSpace:
    base_dim: int
    power: int

    @property
    def dim(self) -> int:
        return self.base_dim**self.power

    def encode(self, idx: Sequence[int]) -> int:
        out = 0
        for i in idx:
            out = out * self.base_dim + i
        return out

    def decode(self, k: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.power):
            k, r = divmod(k, self.base_dim)
            out.append(r)
        return tuple(reversed(out))


def factor_embed(M: Mat, pos: int, n: int) -> Mat:
    """Id^(pos-1) (x) M (x) Id^(n-pos); ``pos`` is 1-based."""
    if not M.is_square:
        raise ValueError("factor_embed needs a square matrix")
    if not 1 <= pos <= n:
        raise ValueError(f"position {pos} out of range 1..{n}")
    m = M.nrows
    left = Mat.identity(m ** (pos - 1), M.field)
    right = Mat.identity(m ** (n - pos), M.field)
    return left.kron(M).kron(right)


def perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def compose(sigma: Sequence[int], tau: Sequence[int]) -> tuple[int, ...]:
    """(sigma tau)(j) = sigma(tau(j)); permutations are 0-based image tuples."""
    return tuple(sigma[t] for t in tau)


def inverse_perm(sigma: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(sigma)
    for j, s in enumerate(sigma):
        inv[s] = j
    return tuple(inv)


def signed_perm(sigma: Sequence[int], m: int, field: FieldSpec = QQ) -> Mat:
    """The factor at position j moves to position sigma(j), times sgn(sigma).

    So e_{i_1}(x)...(x)e_{i_n} maps to sgn(sigma) e_{i_{s^-1(1)}}(x)...(x)e_{i_{s^-1(n)}}.
    """
    M = Mat(*_signed_perm_rows(tuple(sigma), m))
    return M if field.is_rational else _with_field(M, field)


@lru_cache(maxsize=256)
def _signed_perm_rows(sigma: tuple, m: int):
    n = len(sigma)
    space = TensorSpace(m, n)
    sgn = QQ(perm_sign(sigma))
    inv = inverse_perm(sigma)
    rows = {}
    for src in range(space.dim):
        idx = space.decode(src)
        tgt = space.encode([idx[inv[k]] for k in range(n)])
        rows[tgt] = {src: sgn}
    return space.dim, space.dim, rows


def _with_field(M: Mat, field: FieldSpec) -> Mat:
    return Mat(M.nrows, M.ncols, {i: {j: field(v) for j, v in r.items()} for i, r in M.rows.items()}, field)


def _check_form(phi: Mat) -> Mat:
    if not phi.is_square or phi.nrows % 2:
        raise NotAlternating("pairing must be square of even size")
    if phi.T != -phi:
        raise NotAlternating("pairing is not alternating")
    return inverse(phi)


def inverse(M: Mat) -> Mat:
    n = M.nrows
    aug_rows = []
    for i in range(n):
        r = dict(M.rows.get(i, {}))
        r[n + i] = M.field.one
        aug_rows.append(r)
    ech = Echelon(2 * n, M.field).extend(aug_rows)
    pivots, rows, _ = ech.reduced()
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise NotInvertible("matrix is singular")
    return Mat(n, n, {i: {j - n: v for j, v in rows[i].items() if j >= n} for i in range(n)}, M.field)


def pairing_pi(phi: Mat) -> Mat:
    """pi(e_i (x) e_j) = phi_ij, as a 1 x m^2 matrix."""
    _check_form(phi)
    m = phi.nrows
    row = {i * m + j: v for i, r in phi.rows.items() for j, v in r.items()}
    return Mat(1, m * m, {0: row} if row else {}, phi.field)


def copairing_iota(phi: Mat) -> Mat:
    """iota(1) = sum_ij (phi^-1)_ji e_i (x) e_j, as an m^2 x 1 matrix."""
    inv = _check_form(phi)
    m = phi.nrows
    rows = {}
    for j, r in inv.rows.items():
        for i, v in r.items():
            rows[i * m + j] = {0: v}
    return Mat(m * m, 1, rows, phi.field)


P_WEIGHT = WeightTag(-1)


def projector_P(phi: Mat) -> Mat:
    """(1/m) iota o pi: the rank-one idempotent onto the twist line (weight ``P_WEIGHT``)."""
    m = phi.nrows
    return (copairing_iota(phi) @ pairing_pi(phi)).scale(phi.field(1) / m)


@lru_cache(maxsize=64)
def _antisym_rows(n: int, m: int):
    space = TensorSpace(m, n)
    rows: dict = {}
    scale = QQ(1) / math.factorial(n)
    for perm in itertools.permutations(range(n)):
        _, _, prow = _signed_perm_rows(perm, m)
        for i, r in prow.items():
            tgt = rows.setdefault(i, {})
            for j, v in r.items():
                tgt[j] = tgt.get(j, 0) + v * scale
    rows = {i: {j: v for j, v in r.items() if v} for i, r in rows.items()}
    return space.dim, space.dim, {i: r for i, r in rows.items() if r}


def antisymmetrizer(n: int, m: int, field: FieldSpec = QQ) -> Mat:
    """(1/n!) sum over S_n of signed_perm: the idempotent onto the n-th exterior power."""
    if n == 0:
        return Mat.identity(1, field)
    M = Mat(*_antisym_rows(n, m))
    return M if field.is_rational else _with_field(M, field)


def wedge_basis(m: int, i: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(m), i))


def _wedge_maps(i: int, m: int, field: FieldSpec) -> tuple[Mat, Mat]:
    """(embed, extract): embed sends w_I to i! P_i e_I, extract reads the e_I coordinate."""
    space = TensorSpace(m, i)
    basis = wedge_basis(m, i)
    A = antisymmetrizer(i, m, field)
    fact = math.factorial(i)
    cols = [space.encode(I) for I in basis]
    emb_rows: dict = {}
    for k, c in enumerate(cols):
        for row_i, r in A.rows.items():
            v = r.get(c)
            if v:
                emb_rows.setdefault(row_i, {})[k] = v * fact
    embed = Mat(space.dim, len(basis), emb_rows, field)
    extract = Mat(len(basis), space.dim, {k: {c: field.one} for k, c in enumerate(cols)}, field)
    return embed, extract


def compress_to_wedge(T: Mat, i: int, m: int, check: bool = True) -> Mat:
    """Matrix of T on the wedge basis of strictly increasing tuples."""
    if T.nrows != m**i:
        raise ValueError("operator size does not match V^(x)i")
    if check:
        A = antisymmetrizer(i, m, T.field)
        if not (A @ T == T @ A):
            raise NotWedgeCompatible("operator does not commute with the antisymmetrizer")
    embed, extract = _wedge_maps(i, m, T.field)
    return extract @ T @ embed


def adjacent_transposition(k: int, n: int) -> tuple[int, ...]:
    """Swap of positions k and k+1 (1-based)."""
    p = list(range(n))
    p[k - 1], p[k] = p[k], p[k - 1]
    return tuple(p)


def diagonal_action(X: Mat, n: int) -> Mat:
    """sum over positions of factor_embed(X, pos, n): the Lie algebra action on V^(x)n."""
    out = Mat.zeros(X.nrows**n, X.nrows**n, X.field)
    for pos in range(1, n + 1):
        out = out + factor_embed(X, pos, n)
    return out


def tensor_power(h: Mat, n: int) -> Mat:
    out = Mat.identity(1, h.field)
    for _ in range(n):
        out = out.kron(h)
    return out


__all__ = [
    "WeightTag",
    "TensorSpace",
    "factor_embed",
    "signed_perm",
    "perm_sign",
    "compose",
    "pairing_pi",
    "copairing_iota",
    "projector_P",
    "antisymmetrizer",
    "wedge_basis",
    "compress_to_wedge",
    "diagonal_action",
    "tensor_power",
    "rank",
]
