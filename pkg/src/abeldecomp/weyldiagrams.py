"""Decorated perfect matchings on the 2n tensor slots, realized as operators.

Slots 0..n-1 are inputs and n..2n-1 outputs.  A pair joining an input to an
output is a through-strand; two inputs form a cap (a pairing pi), two outputs
a cup (a copairing iota).  Every operator is assembled as

    signed_perm(tau) . (Id^t (x) (iota pi)^k) . signed_perm(sigma) . decorations

so all Koszul signs come from ``signed_perm``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product as iproduct
from typing import Iterator, Sequence

from .exactfield import Mat
from .lefschetz import Budgets, DEFAULT_BUDGETS, OperatorSpan, PolarizedData
from .tensorops import copairing_iota, factor_embed, inverse_perm, pairing_pi, signed_perm


@dataclass(frozen=True)
class DecoratedMatching:
    n: int
    pairs: tuple[tuple[int, int], ...]
    decorations: tuple[int | None, ...]

    def __post_init__(self):
        slots = sorted(s for p in self.pairs for s in p)
        if len(self.pairs) != self.n or slots != list(range(2 * self.n)):
            raise ValueError("pairs must form a perfect matching of the 2n slots")
        if len(self.decorations) != self.n:
            raise ValueError("one decoration per pair")

    @classmethod
    def undecorated(cls, n: int, pairs) -> "DecoratedMatching":
        pairs = tuple(sorted(tuple(sorted(p)) for p in pairs))
        return cls(n, pairs, (None,) * n)


def perfect_matchings(points: Sequence[int]) -> Iterator[tuple[tuple[int, int], ...]]:
    """All perfect matchings, pairing the smallest free point first."""
    if not points:
        yield ()
        return
    first, rest = points[0], points[1:]
    for k, partner in enumerate(rest):
        remaining = rest[:k] + rest[k + 1:]
        for tail in perfect_matchings(remaining):
            yield ((first, partner),) + tail


def matching_count(n: int) -> int:
    """(2n-1)!!"""
    return math.prod(range(1, 2 * n, 2))


def matchings(n: int) -> list[tuple[tuple[int, int], ...]]:
    return list(perfect_matchings(list(range(2 * n))))


def matching_to_operator(mu: DecoratedMatching, data: PolarizedData) -> Mat:
    n, m, F = mu.n, data.m, data.field
    through, caps, cups = [], [], []
    for pair, dec in zip(mu.pairs, mu.decorations):
        a, b = pair
        if a < n and b >= n:
            through.append((a, b - n, dec))
        elif b < n:
            caps.append((a, b, dec))
        else:
            cups.append((a - n, b - n, dec))
    t = len(through)
    # sigma: input slot -> normal-form position; tau: normal-form position -> output slot
    sigma = [0] * n
    tau = [0] * n
    for pos, (i, o, _) in enumerate(through):
        sigma[i] = pos
        tau[pos] = o
    for k, (a, b, _) in enumerate(caps):
        sigma[a], sigma[b] = t + 2 * k, t + 2 * k + 1
    for k, (a, b, _) in enumerate(cups):
        tau[t + 2 * k], tau[t + 2 * k + 1] = a, b

    op = Mat.identity(m**n, F)
    for i, _, dec in through:
        if dec is not None:
            op = factor_embed(data.e_basis[dec], i + 1, n) @ op
    for a, _, dec in caps:
        if dec is not None:
            op = factor_embed(data.e_basis[dec], a + 1, n) @ op
    op = signed_perm(tuple(sigma), m, F) @ op
    normal = Mat.identity(m**t, F)
    if caps:
        cup_cap = copairing_iota(data.phi) @ pairing_pi(data.phi)
        for _ in caps:
            normal = normal.kron(cup_cap)
    op = normal @ op
    op = signed_perm(tuple(tau), m, F) @ op
    for a, _, dec in cups:
        if dec is not None:
            op = factor_embed(data.e_basis[dec], a + 1, n) @ op
    return op


def decorated_matchings(data: PolarizedData, n: int) -> Iterator[DecoratedMatching]:
    ne = len(data.e_basis)
    choices = range(ne)
    for pairs in perfect_matchings(list(range(2 * n))):
        for decs in iproduct(choices, repeat=n):
            yield DecoratedMatching(n, pairs, decs)


def diagram_span(data: PolarizedData, n: int, budgets: Budgets = DEFAULT_BUDGETS, threads: int = 1) -> OperatorSpan:
    """Span of all decorated matching operators (Weyl's first fundamental theorem)."""
    if n < 1:
        raise ValueError("tensor power must be >= 1")
    N = data.m**n
    budgets.check(N * N)
    items = list(decorated_matchings(data, n))
    if threads > 1 and len(items) > 64:
        with ThreadPoolExecutor(threads) as pool:
            ops = list(pool.map(lambda mu: matching_to_operator(mu, data), items))
    else:
        ops = [matching_to_operator(mu, data) for mu in items]
    return OperatorSpan.from_matrices(ops, N, data.field)


__all__ = [
    "DecoratedMatching",
    "perfect_matchings",
    "matching_count",
    "matchings",
    "matching_to_operator",
    "decorated_matchings",
    "diagram_span",
    "inverse_perm",
]
