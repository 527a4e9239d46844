import random

import pytest

from abeldecomp.config import cm, siegel
from abeldecomp.exactfield import Mat
from abeldecomp.lefschetz import OperatorSpan, centralizer_basis, random_commuting_unit, repolarize
from abeldecomp.motivicalg import (
    Evaluator,
    algebra_closure,
    bir_algebra,
    bn_algebra,
    bn_generators,
    compressed_centralizer,
    literal_block_algebra,
    perm_atom,
    perm_cycles,
    product_data,
    verify_cor_princ,
    verify_thm_cle,
    witness_from_json,
    witness_to_json,
)
from abeldecomp.tensorops import antisymmetrizer, compress_to_wedge, inverse, tensor_power
from conftest import PRESET_FACTORIES, QI


def test_generators_n1(cm1):
    atoms = [a for a, _ in bn_generators(cm1, 1)]
    assert atoms == [("perm", (0,)), ("endo", 0), ("endo", 1)]


def test_generators_n2_siegel(s1):
    atoms = [a for a, _ in bn_generators(s1, 2)]
    assert atoms == [("perm", (1, 0)), ("endo", 0), ("proj",)]


@pytest.mark.parametrize("name,n", [("siegel1", 2), ("siegel1", 3), ("cm1", 2), ("product", 2), ("siegel2", 2)])
def test_generators_lie_in_centralizer(name, n):
    d = PRESET_FACTORIES[name]()
    cent = centralizer_basis(d, n).echelon()
    for _, G in bn_generators(d, n):
        assert cent.contains(G.vec())


def test_closure_of_identity(s1):
    span = algebra_closure([(perm_atom((0, 1)), Mat.identity(4))], s1, 2)
    assert span.dim == 1


@pytest.mark.parametrize("name,n,dim", [("siegel1", 2, 2), ("cm1", 2, 6), ("siegel1", 3, 5), ("product", 2, 10)])
def test_closure_dims_and_witnesses(name, n, dim):
    alg = bn_algebra(PRESET_FACTORIES[name](), n)
    assert alg.dim == dim
    assert alg.check_witnesses()
    assert alg.is_algebra()


def test_express_roundtrip(cm1):
    alg = bn_algebra(cm1, 2)
    target = alg.matrices()[3].scale(5) - alg.matrices()[1]
    combo = alg.express(target)
    assert alg.evaluate(combo) == target
    assert alg.express(Mat.from_rows([[1] + [0] * 3] + [[0] * 4] * 3)) is None


def test_words_evaluate_left_to_right(s1):
    ev = Evaluator(s1, 2)
    s, p = ("perm", (1, 0)), ("proj",)
    assert ev.word((s, p)) == ev.atom(s) @ ev.atom(p)
    assert ev.word(()) == Mat.identity(4)


def test_verify_thm_cle_reports_three_equal_dims(s1):
    chk = verify_thm_cle(s1, 2)
    assert chk.passed
    assert chk.dims == {"closure": 2, "centralizer": 2, "diagram": 2}
    assert all(chk.verdicts.values())


def test_negative_control_at_g2(s2):
    chk = verify_thm_cle(s2, 2, drop=("proj",))
    assert not chk.passed
    assert chk.dims == {"closure": 2, "centralizer": 3, "diagram": 3}
    assert chk.verdicts["closure_in_centralizer"]


def test_product_data_shapes(s1):
    pd = product_data(s1, 2)
    assert pd.m == 4 and len(pd.e_basis) == 4
    assert pd.phi.T == pd.phi.scale(-1) and pd.phi.rank() == 4
    assert product_data(s1, 1).e_basis[0] == s1.e_basis[0]


@pytest.mark.parametrize("i,r,dim", [(1, 1, 1), (1, 2, 4), (2, 1, 1), (2, 2, 10)])
def test_bir_dims_siegel(s1, i, r, dim):
    chk = verify_cor_princ(s1, i, r)
    assert chk.passed and chk.dims["bir"] == dim == chk.dims["centralizer"]


def test_bir_11_is_E(cm1):
    bir = bir_algebra(cm1, 1, 1)
    assert bir.same_span(OperatorSpan.from_matrices(list(cm1.e_basis), 2, cm1.field))
    assert bir.check_witnesses()


def test_bir_beyond_top_degree_is_empty(s1):
    bir = bir_algebra(s1, 3, 1)
    assert bir.size == 0 and bir.dim == 0
    assert verify_cor_princ(s1, 3, 1).passed


def test_literal_block_form_agrees(s1):
    i, r = 2, 2
    M = product_data(s1, r).m
    A = antisymmetrizer(i, M)
    lit = literal_block_algebra(s1, i, r)
    comp = OperatorSpan.from_matrices([compress_to_wedge(A @ X @ A, i, M, check=False) for X in lit.matrices()],
                                      6, s1.field)
    assert comp.same_span(bir_algebra(s1, i, r))
    assert comp.same_span(compressed_centralizer(s1, i, r))


def test_witness_json_roundtrip(s1):
    alg = bn_algebra(s1, 3)
    for combo in alg.witnesses:
        back = witness_from_json(witness_to_json(combo, s1.field), 3, s1.field)
        assert alg.evaluate(back) == alg.evaluate(combo)


def test_perm_cycles():
    assert perm_cycles((1, 2, 0)) == [[1, 2, 3]]
    assert perm_cycles((0, 1)) == []
    assert perm_cycles((1, 0, 3, 2)) == [[1, 2], [3, 4]]


def test_scalar_extension_keeps_dimension():
    over_q = bn_algebra(cm(1), 2)
    over_qi = bn_algebra(cm(1, QI), 2)
    assert over_q.dim == over_qi.dim == 6


@pytest.mark.parametrize("factory", [lambda: siegel(1), lambda: cm(1)])
def test_choice_independence(factory):
    d = factory()
    rng = random.Random(4)
    base = bn_algebra(d, 2)
    for c in (2, -3):
        d2 = repolarize(d, c, random_commuting_unit(d, rng))
        assert bn_algebra(d2, 2).same_span(base)


def test_change_of_basis_is_covariant_at_g2(s2):
    # for g >= 2 a general u moves the algebra; it is conjugated by u^(x)n
    rng = random.Random(8)
    u = random_commuting_unit(s2, rng)
    d2 = repolarize(s2, 2, u)
    U = tensor_power(u, 2)
    Ui = inverse(U)
    moved = OperatorSpan.from_matrices([Ui @ X @ U for X in bn_algebra(s2, 2).matrices()], 16, s2.field)
    assert bn_algebra(d2, 2).same_span(moved)
