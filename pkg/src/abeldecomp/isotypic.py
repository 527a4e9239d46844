"""Isotypic decomposition: center, primitive central idempotents, witnesses and certificates."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Sequence

from .errors import CenterNotSeparated, NotIsomorphic, SplittingFieldRequired
from .exactfield import Echelon, FieldSpec, Mat, min_poly_of, nullspace, solve_in_span
from .lefschetz import Budgets, DEFAULT_BUDGETS, OperatorSpan, PolarizedData, centralizer_basis, lie_algebra_basis
from .motivicalg import (
    WitnessedSpan,
    bir_algebra,
    bn_algebra,
    compressed_centralizer,
    product_data,
    witness_to_json,
)
from .tensorops import WeightTag, antisymmetrizer, compress_to_wedge, diagonal_action, tensor_power


def center_basis(alg: OperatorSpan) -> OperatorSpan:
    """Basis of {z in span : zb = bz for every basis element b}."""
    mats = alg.matrices()
    k = len(mats)
    if k == 0:
        return OperatorSpan(alg.size, alg.field, [])
    N2 = alg.size * alg.size
    rows: dict[int, dict] = {}
    for col, a in enumerate(mats):
        for bi, b in enumerate(mats):
            for key, v in (a @ b - b @ a).vec().items():
                rows.setdefault(bi * N2 + key, {})[col] = v
    coeffs = nullspace(rows.values(), k, alg.field)
    zs = []
    for c in coeffs:
        z = Mat.zeros(alg.size, alg.size, alg.field)
        for j, v in c.items():
            z = z + mats[j].scale(v)
        zs.append(z)
    return OperatorSpan.from_matrices(zs, alg.size, alg.field)


def _min_poly_with_unit(c: Mat, unit: Mat) -> list:
    """Minimal polynomial of c inside the corner algebra whose identity is ``unit``."""
    F = c.field
    ech = Echelon(c.nrows * c.ncols, F, track=True)
    power, k = unit, 0
    while True:
        res, tag = ech.reduce(power.vec(), {k: F.one})
        if not res:
            return [tag.get(j, F.zero) for j in range(k + 1)]
        ech.add(power.vec(), {k: F.one})
        power = power @ c
        k += 1


def _eval_with_unit(poly: Sequence, c: Mat, unit: Mat) -> Mat:
    out = Mat.zeros(c.nrows, c.ncols, c.field)
    for coef in reversed(list(poly)):
        out = out @ c + unit.scale(coef)
    return out


def _divide_linear(poly: Sequence, root) -> list:
    """poly / (x - root) by synthetic division; assumes root is a root."""
    n = len(poly) - 1
    out = [None] * n
    acc = poly[n]
    for k in range(n - 1, -1, -1):
        out[k] = acc
        acc = poly[k] + acc * root
    return out


def _horner(poly: Sequence, x):
    acc = 0
    for c in reversed(list(poly)):
        acc = acc * x + c
    return acc


def _spectral_idempotent(mu: Sequence, root, c: Mat, unit: Mat) -> Mat:
    q = _divide_linear(mu, root)
    return _eval_with_unit(q, c, unit).scale(c.field.one / _horner(q, root))


def primitive_idempotents(alg: OperatorSpan, field: FieldSpec | None = None, seed: int = 0,
                          retries: int = 10) -> list[Mat]:
    """Primitive central idempotents, sorted by (rank, entries).

    A pseudo-random rational combination z of the center is split by Lagrange
    interpolation on the roots of its minimal polynomial.
    """
    field = field or alg.field
    center = center_basis(alg).matrices()
    if not center:
        return []
    rng = random.Random(seed)
    size = alg.size
    ident = Mat.identity(size, field)
    for _ in range(max(retries, 1)):
        z = Mat.zeros(size, size, field)
        for zk in center:
            z = z + zk.scale(rng.randint(-9, 9))
        mu = min_poly_of(z)
        roots, rest = field.split_linear(mu)
        if rest is not None:
            raise SplittingFieldRequired(mu, rest, field)
        roots = sorted(set(roots), key=field.coords)
        if len(roots) != len(center):
            continue
        idems = [_spectral_idempotent(mu, lam, z, ident) for lam in roots]
        return sorted(idems, key=lambda e: (e.rank(), e.sort_key()))
    raise CenterNotSeparated(f"no separating central element after {retries} tries")


def refine_idempotent(alg: OperatorSpan, e: Mat, seed: int = 0, retries: int = 10) -> list[Mat]:
    """Split e into orthogonal idempotents of the algebra that cannot be split further
    by elements with roots in the field.  The result depends on choices."""
    field = alg.field
    mats = alg.matrices()
    rng = random.Random(seed)
    done, todo = [], [e]
    while todo:
        f = todo.pop()
        corner = OperatorSpan.from_matrices([f @ a @ f for a in mats], alg.size, field).matrices()
        if len(corner) <= 1:
            done.append(f)
            continue
        candidates = list(corner)
        for _ in range(retries):
            c = Mat.zeros(alg.size, alg.size, field)
            for b in corner:
                c = c + b.scale(rng.randint(-9, 9))
            candidates.append(c)
        for c in candidates:
            mu = _min_poly_with_unit(c, f)
            if len(mu) <= 2:
                continue
            roots, _ = field.split_linear(mu)
            simple = [r for r in set(roots) if roots.count(r) == 1]
            if not simple:
                continue
            lam = sorted(simple, key=field.coords)[0]
            p = _spectral_idempotent(mu, lam, c, f)
            todo.extend([p, f - p])
            break
        else:
            done.append(f)
    return sorted(done, key=lambda x: (x.rank(), x.sort_key()))


def intertwiner(alg: OperatorSpan, p: Mat, q: Mat, seed: int = 0, retries: int = 20) -> tuple[Mat, Mat]:
    """(u, v) in q A p and p A q with v u = p and u v = q; raises NotIsomorphic."""
    rp, rq = p.rank(), q.rank()
    if rp != rq:
        raise NotIsomorphic(f"ranks differ ({rp} vs {rq})")
    mats = alg.matrices()
    field, size = alg.field, alg.size
    qap = OperatorSpan.from_matrices([q @ a @ p for a in mats], size, field).matrices()
    paq = OperatorSpan.from_matrices([p @ a @ q for a in mats], size, field).matrices()
    if not qap or not paq:
        raise NotIsomorphic("q A p is zero")
    rng = random.Random(seed)
    candidates = list(qap)
    for _ in range(retries):
        u = Mat.zeros(size, size, field)
        for b in qap:
            u = u + b.scale(rng.randint(-9, 9))
        candidates.append(u)
    N2 = size * size
    for u in candidates:
        if u.rank() != rp:
            continue
        cols = []
        for t in paq:
            v1 = (t @ u).vec()
            v2 = {k + N2: x for k, x in (u @ t).vec().items()}
            cols.append({**v1, **v2})
        target = {**p.vec(), **{k + N2: x for k, x in q.vec().items()}}
        coeffs = solve_in_span(cols, target, 2 * N2, field)
        if coeffs is None:
            continue
        v = Mat.zeros(size, size, field)
        for c, t in zip(coeffs, paq):
            v = v + t.scale(c)
        return u, v
    raise NotIsomorphic("no element of q A p is invertible between the images")


@dataclass
class Component:
    idempotent: Mat
    rank: int
    witness: dict
    weight: WeightTag | None = None


@dataclass
class DecompositionReport:
    space_dim: int
    algebra_dim: int
    components: list[Component]
    certificates: dict
    dims: dict
    seed: int
    bracket: bool
    fine: bool = False
    warnings: list = dc_field(default_factory=list)

    @property
    def ranks(self) -> list[int]:
        return [c.rank for c in self.components]

    def to_json(self, field: FieldSpec) -> tuple[list, list]:
        comps, wits = [], []
        for k, c in enumerate(self.components):
            comps.append({
                "index": k,
                "rank": c.rank,
                "weight_twist": None if c.weight is None else c.weight.twist,
                "idempotent": c.idempotent.to_json(),
            })
            wits.append({
                "component": k,
                "bracket": "antisymmetrizer" if self.bracket else None,
                "combination": witness_to_json(c.witness, field),
            })
        return comps, wits


def _decompose(alg: WitnessedSpan, cent: OperatorSpan, lie_ops: list[Mat], group_ops: list[Mat],
               degree: int, seed: int, retries: int, fine: bool) -> DecompositionReport:
    field = alg.field
    size = alg.size
    dims = {"algebra": alg.dim, "centralizer": cent.dim, "space": size}
    if size == 0:
        certs = {k: True for k in ("idempotent", "orthogonal", "complete", "equivariant", "witnessed",
                                   "algebra_eq_centralizer", "ranks_sum")}
        return DecompositionReport(0, 0, [], certs, dims, seed, alg.bracket, fine)
    idems = primitive_idempotents(alg, field, seed, retries)
    if fine:
        idems = [p for e in idems for p in refine_idempotent(alg, e, seed, retries)]
    comps = []
    for e in idems:
        witness = alg.express(e)
        trivial = all((D @ e).is_zero() for D in lie_ops) and all(H @ e == e for H in group_ops)
        weight = WeightTag(-degree // 2) if (trivial and degree % 2 == 0) else None
        comps.append(Component(e, e.rank(), witness or {}, weight))
    ident = Mat.identity(size, field)
    total = Mat.zeros(size, size, field)
    for e in idems:
        total = total + e
    certs = {
        "idempotent": all(e @ e == e for e in idems),
        "orthogonal": all((a @ b).is_zero() for x, a in enumerate(idems) for y, b in enumerate(idems) if x != y),
        "complete": total == ident,
        "equivariant": all(e.commutes_with(D) for e in idems for D in lie_ops + group_ops),
        "witnessed": all(c.witness and alg.evaluate(c.witness) == c.idempotent for c in comps),
        "algebra_eq_centralizer": alg.same_span(cent),
        "ranks_sum": sum(c.rank for c in comps) == size,
    }
    return DecompositionReport(size, alg.dim, comps, certs, dims, seed, alg.bracket, fine)


def decompose(data: PolarizedData, i: int, r: int, budgets: Budgets = DEFAULT_BUDGETS, seed: int = 0,
              fine: bool = False) -> DecompositionReport:
    """Isotypic decomposition of Lambda^i(V^(+r)) with idempotents witnessed in B_{i,r}."""
    pd = product_data(data, r)
    M = pd.m
    alg = bir_algebra(data, i, r, budgets)
    if comb(M, i) == 0:
        return _decompose(alg, OperatorSpan(0, data.field, []), [], [], i, seed, budgets.idempotent_retries, fine)
    cent = compressed_centralizer(data, i, r, budgets)
    A = antisymmetrizer(i, M, data.field)

    def comp(T):
        return compress_to_wedge(A @ T @ A, i, M, check=False)

    lie_ops = [comp(diagonal_action(X, i)) for X in lie_algebra_basis(pd)]
    group_ops = [comp(tensor_power(h, i)) for h in pd.extra_generators]
    return _decompose(alg, cent, lie_ops, group_ops, i, seed, budgets.idempotent_retries, fine)


def decompose_tensor(data: PolarizedData, n: int, budgets: Budgets = DEFAULT_BUDGETS, seed: int = 0,
                     fine: bool = False) -> DecompositionReport:
    """Isotypic decomposition of V^(x)n with idempotents witnessed in B_n."""
    alg = bn_algebra(data, n, budgets)
    cent = centralizer_basis(data, n, budgets)
    lie_ops = [diagonal_action(X, n) for X in lie_algebra_basis(data)]
    group_ops = [tensor_power(h, n) for h in data.extra_generators]
    return _decompose(alg, cent, lie_ops, group_ops, n, seed, budgets.idempotent_retries, fine)


def wedge_rank_total(data: PolarizedData, i: int, r: int) -> int:
    return comb(data.m * r, i)
