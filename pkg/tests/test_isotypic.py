import pytest

from abeldecomp.config import cm, siegel
from abeldecomp.errors import NotIsomorphic, SplittingFieldRequired
from abeldecomp.exactfield import QQ, Mat
from abeldecomp.isotypic import (
    center_basis,
    decompose,
    decompose_tensor,
    intertwiner,
    primitive_idempotents,
    refine_idempotent,
)
from abeldecomp.lefschetz import OperatorSpan, centralizer_basis
from abeldecomp.motivicalg import bir_algebra, compressed_centralizer
from abeldecomp.tensorops import WeightTag, projector_P
from conftest import QI


def _full_matrix_algebra(k):
    units = []
    for i in range(k):
        for j in range(k):
            units.append(Mat(k, k, {i: {j: QQ.one}}, QQ))
    return OperatorSpan.from_matrices(units, k, QQ)


def test_center_of_full_matrix_algebra():
    z = center_basis(_full_matrix_algebra(3))
    assert z.dim == 1 and z.contains(Mat.identity(3))


def test_center_of_commutative_algebra(s1):
    cent = centralizer_basis(s1, 2)
    assert center_basis(cent).same_span(cent)


def test_center_of_b22(s1):
    assert center_basis(compressed_centralizer(s1, 2, 2)).dim == 2


def test_idempotents_of_id_and_P(s1):
    alg = centralizer_basis(s1, 2)
    idems = primitive_idempotents(alg)
    P = projector_P(s1.phi)
    assert [e.rank() for e in idems] == [1, 3]
    assert idems == [P, Mat.identity(4) - P]


def test_cm_needs_gaussian_field():
    with pytest.raises(SplittingFieldRequired) as info:
        primitive_idempotents(centralizer_basis(cm(1), 2))
    factor = info.value.factor
    assert len(factor) == 3  # an irreducible quadratic
    idems = primitive_idempotents(centralizer_basis(cm(1, QI), 2))
    assert sorted(e.rank() for e in idems) == [1, 1, 2]


def test_decompose_22(s1):
    rep = decompose(s1, 2, 2)
    assert rep.ranks == [3, 3]
    assert all(rep.certificates.values())
    assert sum(1 for c in rep.components if c.weight == WeightTag(-1)) == 1


def test_decompose_21_is_twist_line(s1):
    rep = decompose(s1, 2, 1)
    assert rep.ranks == [1]
    assert rep.components[0].weight == WeightTag(-1)


@pytest.mark.parametrize("i,r", [(3, 1), (5, 2)])
def test_decompose_past_top_degree_is_empty(s1, i, r):
    rep = decompose(s1, i, r)
    assert rep.space_dim == 0 and rep.components == []
    assert all(rep.certificates.values())


@pytest.mark.parametrize("seed", [1, 2, 17])
def test_idempotent_set_is_seed_independent(s1, seed):
    base = {tuple(map(tuple, c.idempotent.to_json())) for c in decompose(s1, 2, 2, seed=0).components}
    other = {tuple(map(tuple, c.idempotent.to_json())) for c in decompose(s1, 2, 2, seed=seed).components}
    assert base == other


def test_witnesses_reevaluate(s1):
    alg = bir_algebra(s1, 2, 2)
    for c in decompose(s1, 2, 2).components:
        assert alg.evaluate(c.witness) == c.idempotent


def test_decompose_tensor_over_gaussian_field():
    rep = decompose_tensor(cm(1, QI), 2)
    assert sorted(rep.ranks) == [1, 1, 2]
    assert all(rep.certificates.values())
    with pytest.raises(SplittingFieldRequired):
        decompose_tensor(cm(1), 2)


def test_fine_split_and_intertwiner(s1):
    alg = bir_algebra(s1, 2, 2)
    rep = decompose(s1, 2, 2)
    trivial = next(c for c in rep.components if c.weight is not None)
    pieces = refine_idempotent(alg, trivial.idempotent)
    assert [p.rank() for p in pieces] == [1, 1, 1]
    total = pieces[0] + pieces[1] + pieces[2]
    assert total == trivial.idempotent
    p, q = pieces[0], pieces[1]
    u, v = intertwiner(alg, p, q)
    assert v @ u == p and u @ v == q
    assert alg.contains(u) and alg.contains(v)


def test_intertwiner_trivial_and_rank_obstruction(s1):
    alg = bir_algebra(s1, 2, 2)
    e, f = [c.idempotent for c in decompose(s1, 2, 2).components]
    u, v = intertwiner(alg, e, e)
    assert v @ u == e and u @ v == e
    with pytest.raises(NotIsomorphic):
        intertwiner(alg, e, f)  # same rank, different isotypes
    small = decompose(s1, 2, 1).components[0].idempotent
    with pytest.raises(NotIsomorphic):
        intertwiner(bir_algebra(s1, 2, 1), small, Mat.zeros(1, 1))


def test_fine_report_flag(s1):
    rep = decompose(s1, 2, 2, fine=True)
    assert sorted(rep.ranks) == [1, 1, 1, 3]
    assert rep.certificates["complete"] and rep.certificates["orthogonal"]
