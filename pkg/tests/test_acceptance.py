"""Acceptance gate.  Every criterion is exact; each test records one PASS/FAIL line."""

import random
import time

import pytest

from abeldecomp.config import cm, product, siegel
from abeldecomp.exactfield import Mat
from abeldecomp.isotypic import decompose
from abeldecomp.lefschetz import Budgets, random_commuting_unit, repolarize
from abeldecomp.motivicalg import bn_algebra, verify_cor_princ, verify_thm_cle
from abeldecomp.tensorops import copairing_iota, pairing_pi, projector_P
from abeldecomp.weyldiagrams import matching_count
from conftest import QI


@pytest.mark.parametrize("label,factory", [
    ("siegel g=1", lambda: siegel(1)),
    ("siegel g=2", lambda: siegel(2)),
    ("siegel g=3", lambda: siegel(3)),
    ("cm d=1", lambda: cm(1)),
    ("product", product),
])
def test_criterion_1_pairing_and_projector(criterion, label, factory):
    t0 = time.perf_counter()
    d = factory()
    pi_iota = pairing_pi(d.phi) @ copairing_iota(d.phi)
    P = projector_P(d.phi)
    ok = pi_iota == Mat.from_rows([[2 * d.g]]) and P @ P == P and P.rank() == 1
    dt = time.perf_counter() - t0
    criterion(f"1 [{label}]", ok and dt < 1.0, f"pi.iota = {pi_iota[0, 0]}, rank P = {P.rank()}, {dt:.3f}s")


THM_CLE_CASES = [
    ("siegel g=1", lambda: siegel(1), 1), ("siegel g=1", lambda: siegel(1), 2), ("siegel g=1", lambda: siegel(1), 3),
    ("siegel g=2", lambda: siegel(2), 1), ("siegel g=2", lambda: siegel(2), 2),
    ("cm d=1", lambda: cm(1), 1), ("cm d=1", lambda: cm(1), 2),
    ("product", product, 1), ("product", product, 2),
]


def test_criterion_2_three_way_span_equality(criterion):
    t0 = time.perf_counter()
    failures, dims = [], []
    for label, factory, n in THM_CLE_CASES:
        chk = verify_thm_cle(factory(), n)
        dims.append(f"{label} n={n}: {chk.dims['closure']}")
        if not (chk.passed and len(set(chk.dims.values())) == 1 and chk.verdicts["witnesses_reevaluate"]):
            failures.append(f"{label} n={n} {chk.dims}")
    dt = time.perf_counter() - t0
    criterion("2", not failures and dt < 120, f"{'; '.join(failures or dims)}; {dt:.1f}s")


@pytest.mark.slow
def test_criterion_3_siegel_g3_n3(criterion):
    t0 = time.perf_counter()
    chk = verify_thm_cle(siegel(3), 3, Budgets(allow_large=True))
    dt = time.perf_counter() - t0
    ok = chk.passed and set(chk.dims.values()) == {matching_count(3)} and dt < 3600
    criterion("3", ok, f"dims {chk.dims}, (2*3-1)!! = {matching_count(3)}, {dt:.1f}s")


def test_criterion_4_bir_equals_centralizer(criterion):
    t0 = time.perf_counter()
    failures, dims = [], []
    for label, data in (("siegel g=1", siegel(1)), ("cm d=1 over Q", cm(1)), ("cm d=1 over Q(i)", cm(1, QI))):
        for i, r in ((1, 1), (1, 2), (2, 1), (2, 2)):
            chk = verify_cor_princ(data, i, r)
            dims.append(f"{label} ({i},{r}): {chk.dims['bir']}")
            if not (chk.passed and chk.verdicts["witnesses_reevaluate"]):
                failures.append(f"{label} ({i},{r}) {chk.dims}")
    dt = time.perf_counter() - t0
    criterion("4", not failures and dt < 120, f"{'; '.join(failures or dims)}; {dt:.1f}s")


def test_criterion_5_decomposition(criterion):
    t0 = time.perf_counter()
    d = siegel(1)
    rep = decompose(d, 2, 2, seed=0)
    idem_sets = [
        {tuple(map(tuple, c.idempotent.to_json())) for c in decompose(d, 2, 2, seed=s).components}
        for s in (0, 1, 7, 123)
    ]
    empty = decompose(d, 2 * d.g * 2 + 1, 2)
    ok = (
        rep.ranks == [3, 3]
        and all(rep.certificates.values())
        and all(s == idem_sets[0] for s in idem_sets)
        and empty.space_dim == 0 and empty.components == []
    )
    dt = time.perf_counter() - t0
    criterion("5", ok and dt < 60, f"ranks {rep.ranks}, certificates {sorted(k for k, v in rep.certificates.items() if v)}, "
                                   f"i=5 r=2 space dim {empty.space_dim}, {dt:.1f}s")


def test_criterion_6_scalar_extension(criterion):
    over_q = bn_algebra(cm(1), 2).dim
    over_qi = bn_algebra(cm(1, QI), 2).dim
    criterion("6", over_q == over_qi == 6, f"dim over Q = {over_q}, over Q(i) = {over_qi}")


@pytest.mark.parametrize("label,factory", [("siegel g=1", lambda: siegel(1)), ("cm d=1", lambda: cm(1))])
def test_criterion_7_choice_independence(criterion, label, factory):
    d = factory()
    base = bn_algebra(d, 2)
    rng = random.Random(2024)
    results = []
    for c in (2, -3):
        u = random_commuting_unit(d, rng)
        results.append(bn_algebra(repolarize(d, c, u), 2).same_span(base))
    criterion(f"7 [{label}]", all(results), f"span unchanged for c in (2, -3): {results}")


def test_criterion_8_negative_control(criterion):
    chk = verify_thm_cle(siegel(1), 2, drop=("proj",))
    ok = not chk.passed and chk.dims["closure"] < chk.dims["centralizer"]
    criterion("8 [siegel g=1, n=2]", ok, f"dims without Proj {chk.dims}")


def test_criterion_8_negative_control_g2(criterion):
    chk = verify_thm_cle(siegel(2), 2, drop=("proj",))
    ok = not chk.passed and chk.dims["closure"] < chk.dims["centralizer"]
    criterion("8 [siegel g=2, n=2 variant]", ok, f"dims without Proj {chk.dims}")
