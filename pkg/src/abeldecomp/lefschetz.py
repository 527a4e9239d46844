"""Polarized data (V, phi, E), the Lefschetz Lie algebra, and the brute-force
centralizer of the Lefschetz action on V^(x)n."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import InvalidData, SizeBudgetExceeded
from .exactfield import Echelon, FieldSpec, Mat, QQ
from .tensorops import _check_form, diagonal_action, inverse, tensor_power

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Budgets:
    max_operator_dim: int = 5000
    max_closure_waves: int = 64
    idempotent_retries: int = 10
    allow_large: bool = False

    def check(self, dim: int):
        if dim > self.max_operator_dim and not self.allow_large:
            raise SizeBudgetExceeded(dim, self.max_operator_dim)


DEFAULT_BUDGETS = Budgets()


def _span_echelon(mats: Sequence[Mat], field: FieldSpec) -> Echelon:
    m = mats[0].nrows if mats else 0
    return Echelon(m * m, field).extend(M.vec() for M in mats)


@dataclass(frozen=True, eq=False)
class PolarizedData:
    """V = F^(2g) with alternating pairing ``phi``, endomorphism algebra basis
    ``e_basis`` and extra Lefschetz group elements for non-connected cases.

    Invariants are checked on construction; violations raise InvalidData naming the invariant.
    """

    g: int
    phi: Mat
    e_basis: tuple[Mat, ...]
    extra_generators: tuple[Mat, ...] = ()
    field: FieldSpec = QQ
    name: str = "custom"
    _phi_inv: Mat = dc_field(init=False, repr=False)

    def __post_init__(self):
        if self.g < 1:
            raise InvalidData("g must be >= 1 (V must be nonzero)")
        m = 2 * self.g
        for M in (self.phi, *self.e_basis, *self.extra_generators):
            if M.shape != (m, m):
                raise InvalidData(f"matrix of shape {M.shape} does not act on V of dimension {m}")
            if M.field != self.field:
                raise InvalidData("matrix entries lie in a different field")
        if not self.e_basis:
            raise InvalidData("E_basis is empty (must contain the identity in its span)")
        object.__setattr__(self, "_phi_inv", _check_form(self.phi))
        ech = _span_echelon(self.e_basis, self.field)
        if ech.rank != len(self.e_basis):
            raise InvalidData("E_basis is linearly dependent")
        if not ech.contains(Mat.identity(m, self.field).vec()):
            raise InvalidData("identity is not in span(E_basis)")
        for a in self.e_basis:
            for b in self.e_basis:
                if not ech.contains((a @ b).vec()):
                    raise InvalidData("span(E_basis) is not closed under products")
            if not ech.contains(self.rosati(a).vec()):
                raise InvalidData("span(E_basis) is not stable under the Rosati involution phi^-1 e^T phi")
        for h in self.extra_generators:
            if not all(h.commutes_with(e) for e in self.e_basis):
                raise InvalidData("extra generator does not commute with E_basis")
            if h.T @ self.phi @ h != self.phi:
                raise InvalidData("extra generator does not preserve phi (h^T phi h != phi)")

    @property
    def m(self) -> int:
        return 2 * self.g

    def rosati(self, f: Mat) -> Mat:
        return self._phi_inv @ f.T @ self.phi

    def replace(self, **kw) -> "PolarizedData":
        args = dict(g=self.g, phi=self.phi, e_basis=self.e_basis, extra_generators=self.extra_generators,
                    field=self.field, name=self.name)
        args.update(kw)
        return PolarizedData(**args)


@dataclass
class OperatorSpan:
    """A subspace of End(F^size), stored as canonical rref rows of flattened matrices.

    ``witnesses[k]``, when present, is a linear combination ``{word: coeff}`` of
    generator words evaluating to basis element k.
    """

    size: int
    field: FieldSpec
    vectors: list[dict]
    witnesses: list[dict] | None = None

    @classmethod
    def from_matrices(cls, mats: Sequence[Mat], size: int, field: FieldSpec) -> "OperatorSpan":
        ech = Echelon(size * size, field).extend(M.vec() for M in mats)
        return cls(size, field, ech.reduced()[1])

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def matrices(self) -> list[Mat]:
        return [Mat.from_vec(v, self.size, self.size, self.field) for v in self.vectors]

    def echelon(self) -> Echelon:
        return Echelon(self.size * self.size, self.field).extend(self.vectors)

    def contains(self, M: Mat) -> bool:
        return self.echelon().contains(M.vec())

    def issubset(self, other: "OperatorSpan") -> bool:
        ech = other.echelon()
        return all(ech.contains(v) for v in self.vectors)

    def same_span(self, other: "OperatorSpan") -> bool:
        # rref rows are canonical
        return self.size == other.size and self.vectors == other.vectors

    def is_algebra(self) -> bool:
        mats = self.matrices()
        ech = self.echelon()
        if not ech.contains(Mat.identity(self.size, self.field).vec()):
            return False
        return all(ech.contains((a @ b).vec()) for a in mats for b in mats)


def _solve_linear_conditions(constraints, nvars: int, field: FieldSpec) -> list[dict]:
    ech = Echelon(nvars, field)
    for eq in constraints:
        if eq:
            ech.add(eq)
    kernel = ech.nullspace()
    return Echelon(nvars, field).extend(kernel).reduced()[1]


def lie_algebra_basis(data: PolarizedData) -> list[Mat]:
    """Basis of {X : Xe = eX for e in E, X^T phi + phi X = 0}."""
    m, F = data.m, data.field
    phi = data.phi

    def var(a, b):
        return a * m + b

    def constraints():
        for e in data.e_basis:
            eT = e.T
            for i in range(m):
                for j in range(m):
                    eq: dict = {}
                    # (X e)_ij - (e X)_ij
                    for k, v in eT.rows.get(j, {}).items():
                        eq[var(i, k)] = eq.get(var(i, k), 0) + v
                    for k, v in e.rows.get(i, {}).items():
                        eq[var(k, j)] = eq.get(var(k, j), 0) - v
                    yield {a: v for a, v in eq.items() if v}
        for i in range(m):
            for j in range(m):
                eq = {}
                # (X^T phi)_ij = sum_k X_ki phi_kj ; (phi X)_ij = sum_k phi_ik X_kj
                for k in range(m):
                    v = phi[k, j]
                    if v:
                        eq[var(k, i)] = eq.get(var(k, i), 0) + v
                    w = phi[i, k]
                    if w:
                        eq[var(k, j)] = eq.get(var(k, j), 0) + w
                yield {a: v for a, v in eq.items() if v}

    basis = _solve_linear_conditions(constraints(), m * m, F)
    return [Mat.from_vec(v, m, m, F) for v in basis]


def _commutator_equations(A: Mat, N: int):
    """Rows of the linear map F -> A F - F A on flattened N x N unknowns."""
    AT = A.T
    diag = A.is_diagonal()
    for i in range(N):
        arow = A.rows.get(i, {})
        for j in range(N):
            if diag:
                c = arow.get(i, 0) - A.rows.get(j, {}).get(j, 0)
                if c:
                    yield {i * N + j: c}
                continue
            eq: dict = {}
            for k, a in arow.items():
                key = k * N + j
                eq[key] = eq.get(key, 0) + a
            for k, a in AT.rows.get(j, {}).items():
                key = i * N + k
                eq[key] = eq.get(key, 0) - a
            eq = {key: v for key, v in eq.items() if v}
            if eq:
                yield eq


def centralizer_basis(data: PolarizedData, n: int, budgets: Budgets = DEFAULT_BUDGETS,
                      check_algebra: bool = True) -> OperatorSpan:
    """End_Lef(V^(x)n): operators commuting with every Delta(X) and every h^(x)n.

    Torus-like (diagonal) actions are imposed first; they kill most unknowns as
    single-entry pivot rows before the off-diagonal constraints are assembled.
    """
    if n < 1:
        raise ValueError("tensor power must be >= 1")
    N = data.m**n
    budgets.check(N * N)
    F = data.field
    ops = [diagonal_action(X, n) for X in lie_algebra_basis(data)]
    ops.sort(key=lambda A: (not A.is_diagonal(), A.nnz()))
    ops += [tensor_power(h, n) for h in data.extra_generators]
    ech = Echelon(N * N, F)
    for A in ops:
        for eq in _commutator_equations(A, N):
            ech.add(eq)
        log.debug("centralizer n=%d: rank %d after constraint block", n, ech.rank)
    kernel = ech.nullspace()
    span = OperatorSpan(N, F, Echelon(N * N, F).extend(kernel).reduced()[1])
    if check_algebra and not span.is_algebra():
        raise AssertionError("centralizer is not closed under products")
    return span


def e_commutant_basis(data: PolarizedData) -> list[Mat]:
    """Basis of {u : ue = eu for every e in E_basis}."""
    m, F = data.m, data.field
    ech = Echelon(m * m, F)
    for e in data.e_basis:
        for eq in _commutator_equations(e, m):
            ech.add(eq)
    return [Mat.from_vec(v, m, m, F) for v in Echelon(m * m, F).extend(ech.nullspace()).reduced()[1]]


def random_commuting_unit(data: PolarizedData, rng, tries: int = 50) -> Mat:
    """A pseudo-random invertible u commuting with E."""
    basis = e_commutant_basis(data)
    for _ in range(tries):
        u = Mat.zeros(data.m, data.m, data.field)
        for b in basis:
            u = u + b.scale(rng.randint(-4, 4))
        if u.rank() == data.m:
            return u
    raise InvalidData("could not draw an invertible element of the commutant of E")


def repolarize(data: PolarizedData, c=1, u: Mat | None = None) -> PolarizedData:
    """Same (V, E) with phi replaced by c * u^T phi u, u invertible and commuting with E.

    The result is validated like any datum, so a u that breaks Rosati stability is rejected.
    """
    F = data.field
    c = F(c)
    if not c:
        raise InvalidData("rescaling constant must be nonzero")
    phi = data.phi
    if u is not None:
        if not all(u.commutes_with(e) for e in data.e_basis):
            raise InvalidData("change of basis does not commute with E")
        phi = u.T @ phi @ u
    return data.replace(phi=phi.scale(c), name=data.name + "'")


def lie_action_ops(data: PolarizedData, n: int) -> list[Mat]:
    return [diagonal_action(X, n) for X in lie_algebra_basis(data)]


def extra_action_ops(data: PolarizedData, n: int) -> list[Mat]:
    return [tensor_power(h, n) for h in data.extra_generators]


__all__ = [
    "Budgets",
    "DEFAULT_BUDGETS",
    "PolarizedData",
    "OperatorSpan",
    "lie_algebra_basis",
    "centralizer_basis",
    "e_commutant_basis",
    "random_commuting_unit",
    "repolarize",
    "inverse",
]
