import itertools

import pytest

from abeldecomp.config import siegel
from abeldecomp.exactfield import Mat
from abeldecomp.lefschetz import OperatorSpan, centralizer_basis
from abeldecomp.tensorops import copairing_iota, pairing_pi, projector_P, signed_perm
from abeldecomp.weyldiagrams import (
    DecoratedMatching,
    decorated_matchings,
    diagram_span,
    matching_count,
    matching_to_operator,
    matchings,
)
from conftest import PRESET_FACTORIES


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_matching_count_by_enumeration(n):
    ms = matchings(n)
    assert len(ms) == matching_count(n) == len(set(ms))
    for mu in ms:
        assert sorted(s for p in mu for s in p) == list(range(2 * n))


def test_enumeration_order_is_canonical():
    assert matchings(2) == [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]


def test_identity_matching():
    d = siegel(2)
    mu = DecoratedMatching(2, ((0, 2), (1, 3)), (0, 0))
    assert matching_to_operator(mu, d) == Mat.identity(16)


@pytest.mark.parametrize("g", [1, 2])
def test_cap_cup_matching_is_iota_pi(g):
    d = siegel(g)
    mu = DecoratedMatching.undecorated(2, [(0, 1), (2, 3)])
    op = matching_to_operator(mu, d)
    assert op == copairing_iota(d.phi) @ pairing_pi(d.phi)
    assert op == projector_P(d.phi).scale(2 * g)


def test_crossing_matching_is_signed_swap():
    d = siegel(1)
    mu = DecoratedMatching.undecorated(2, [(0, 3), (1, 2)])
    assert matching_to_operator(mu, d) == signed_perm((1, 0), 2)


def test_bad_matching_rejected():
    with pytest.raises(ValueError):
        DecoratedMatching(2, ((0, 1), (1, 3)), (None, None))


@pytest.mark.parametrize("name,n,dim", [
    ("siegel1", 1, 1), ("siegel1", 2, 2), ("siegel1", 3, 5),
    ("siegel2", 1, 1), ("siegel2", 2, 3),
    ("cm1", 1, 2), ("cm1", 2, 6),
    ("product", 1, 2), ("product", 2, 10),
])
def test_diagram_span_equals_centralizer(name, n, dim):
    d = PRESET_FACTORIES[name]()
    diag = diagram_span(d, n)
    cent = centralizer_basis(d, n)
    assert diag.dim == dim
    assert diag.same_span(cent)


def test_every_matching_operator_is_equivariant(cm1):
    cent = centralizer_basis(cm1, 2).echelon()
    for mu in decorated_matchings(cm1, 2):
        assert cent.contains(matching_to_operator(mu, cm1).vec())


def test_n1_span_is_E(cm1):
    assert diagram_span(cm1, 1).same_span(OperatorSpan.from_matrices(list(cm1.e_basis), 2, cm1.field))


def test_threads_do_not_change_result(s1):
    assert diagram_span(s1, 3, threads=1).vectors == diagram_span(s1, 3, threads=4).vectors


def test_matchings_are_linearly_dependent_at_g1():
    d = siegel(1)
    ops = [matching_to_operator(DecoratedMatching.undecorated(2, mu), d) for mu in matchings(2)]
    assert OperatorSpan.from_matrices(ops, 4, d.field).dim == 2
