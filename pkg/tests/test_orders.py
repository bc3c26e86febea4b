from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dualorder import orders
from dualorder.canonical import GeneratorParams, gen_pair, random_pair
from dualorder.dual import DualMatrix
from dualorder.errors import CharacterizationMismatch, IndexNotOne, NotSquare, PreconditionUnmet, ShapeMismatch
from dualorder.fixtures import load_example
from dualorder.kernel import Matrix
from dualorder.orders import (
    DUAL_KINDS,
    REAL_KINDS,
    OrderKind,
    Route,
    Unmet,
    characterization_routes,
    check,
    check_dual_order,
    check_real_order,
    implication_matrix,
)
from dualorder.sampling import rand_for_kind

M = Matrix.from_rows

EX1 = load_example("dual-minus-not-dm-sharp")
EX2 = load_example("dm-sharp-not-d-sharp")
EX3 = load_example("dm-sharp-not-g-sharp")


def test_parse_names():
    assert OrderKind.parse("DM_SHARP") is OrderKind.DM_SHARP
    assert OrderKind.parse("dual-minus") is OrderKind.DUAL_MINUS
    with pytest.raises(ValueError):
        OrderKind.parse("loewner")


def test_kind_partition():
    assert set(REAL_KINDS) | set(DUAL_KINDS) == set(OrderKind)
    assert {k for k in OrderKind if k.sharp_family} == {
        OrderKind.SHARP, OrderKind.DSHARP, OrderKind.GSHARP, OrderKind.DM_SHARP,
    }


class TestWorkedExamples:
    def test_dual_minus_without_dm_sharp(self):
        e, f = EX1
        assert check(OrderKind.MINUS, e, f).verdict
        assert check(OrderKind.DUAL_MINUS, e, f).verdict
        sharp = check(OrderKind.SHARP, e, f)
        assert not sharp.verdict
        w = sharp.witness("E^#E = E^#F")
        assert w.lhs == Matrix.diag([1, 0, 0])
        assert w.rhs == M([[2, 1, 0], [0, 0, 0], [0, 0, 0]])
        dm = check(OrderKind.DM_SHARP, e, f)
        assert not dm.verdict and dm.witnesses[0].equation == "E^#E = E^#F"
        assert dm.rank_data["rk(F-E)"] == 1
        assert dm.rank_data["r_e"] == 1 and dm.rank_data["r_f"] == 2
        assert dm.rank_data["dual_rank_diff"]["block_rank"] == 2

    def test_dm_sharp_without_d_sharp(self):
        e, f = EX2
        assert check(OrderKind.DM_SHARP, e, f).verdict
        r = check(OrderKind.DSHARP, e, f)
        assert not r.verdict
        w = r.witness("EF0+E0F = E0E+EE0")
        assert w.lhs == M([[2, 8, 7], [2, 0, 0], [3, 0, 0]])
        assert w.rhs == M([[2, 4, 7], [2, 0, 0], [3, 0, 0]])

    def test_dm_sharp_without_g_sharp(self):
        e, f = EX3
        assert check(OrderKind.DM_SHARP, e, f).verdict
        r = check(OrderKind.GSHARP, e, f)
        assert not r.verdict
        w = r.witness("E0E = F0E")
        assert w.lhs.col(0) == (1, 2, 3)
        assert w.rhs.col(0) == (1, 6, 3)

    def test_characterization_routes_on_g_sharp_counterexample(self):
        routes = dict(characterization_routes(OrderKind.GSHARP, *EX3))
        assert routes == {"dual-minus + gogo": False, "dm-sharp + perfect-4": False}

    def test_implication_matrices(self):
        v1 = implication_matrix(*EX1)
        assert v1[OrderKind.DUAL_MINUS] is True and v1[OrderKind.DM_SHARP] is False
        v2 = implication_matrix(*EX2)
        assert (v2[OrderKind.DM_SHARP], v2[OrderKind.DSHARP], v2[OrderKind.DUAL_MINUS]) == (True, False, True)
        v3 = implication_matrix(*EX3)
        assert (v3[OrderKind.DM_SHARP], v3[OrderKind.GSHARP]) == (True, False)


class TestPreconditions:
    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            check(OrderKind.DUAL_MINUS, DualMatrix.zeros(2, 2), DualMatrix.zeros(2, 3))

    def test_sharp_family_needs_square(self):
        with pytest.raises(NotSquare):
            check(OrderKind.DM_SHARP, DualMatrix.zeros(2, 3), DualMatrix.zeros(2, 3))

    def test_sharp_index_two(self):
        n = M([[0, 1], [0, 0]])
        with pytest.raises(IndexNotOne):
            check(OrderKind.SHARP, n, n)

    def test_dm_sharp_index_two_is_unmet_not_false(self):
        n = DualMatrix.real(M([[0, 1], [0, 0]]))
        with pytest.raises(PreconditionUnmet) as info:
            check(OrderKind.DM_SHARP, n, n)
        assert "dual index one" in info.value.precondition

    def test_dual_minus_needs_dmpgi(self):
        bad = DualMatrix(Matrix.zeros(2, 2), M([[1, 0], [0, 0]]))
        with pytest.raises(PreconditionUnmet):
            check(OrderKind.DUAL_MINUS, bad, bad)

    def test_entry_points_reject_wrong_family(self):
        with pytest.raises(ValueError):
            check_real_order(OrderKind.DUAL_MINUS, M([[1]]), M([[1]]))
        with pytest.raises(ValueError):
            check_dual_order(OrderKind.STAR, DualMatrix.zeros(1, 1), DualMatrix.zeros(1, 1))

    def test_unmet_in_implication_matrix(self):
        n = DualMatrix.real(M([[0, 1], [0, 0]]))
        v = implication_matrix(n, n)
        assert isinstance(v[OrderKind.SHARP], Unmet)
        assert v[OrderKind.DUAL_MINUS] is True


def test_route_disagreement_is_an_error(monkeypatch):
    def fake(p):
        return [Route("a", True), Route("b", False)]

    monkeypatch.setitem(orders._ROUTES, OrderKind.MINUS, fake)
    with pytest.raises(CharacterizationMismatch) as info:
        check(OrderKind.MINUS, M([[1]]), M([[1]]))
    assert len(info.value.routes) == 2


@pytest.mark.parametrize("kind", list(OrderKind), ids=lambda k: k.value)
def test_reflexivity_and_all_routes(kind):
    rng = random.Random(kind.value)
    for _ in range(10):
        n = rng.randint(1, 5)
        m = n if kind.sharp_family else rng.randint(1, 5)
        x = rand_for_kind(kind, rng, m, n)
        r = check(kind, x, x)
        assert r.verdict and all(rt.verdict for rt in r.routes)


@pytest.mark.parametrize("kind", list(OrderKind), ids=lambda k: k.value)
def test_false_verdicts_carry_witnesses(kind):
    rng = random.Random(f"w-{kind.value}")
    for _ in range(15):
        n = rng.randint(1, 4)
        m = n if kind.sharp_family else rng.randint(1, 4)
        e, f = rand_for_kind(kind, rng, m, n), rand_for_kind(kind, rng, m, n)
        try:
            r = check(kind, e, f)
        except IndexNotOne:
            continue
        if not r.verdict:
            assert r.witnesses and all(w.lhs != w.rhs for w in r.witnesses)


def test_characterization_routes_on_generated_d_sharp_pair():
    gp = gen_pair(OrderKind.DSHARP, GeneratorParams.random(4, 4, 1, 3, seed=11))
    assert dict(characterization_routes(OrderKind.DSHARP, gp.e, gp.f)) == {
        "dual-minus + go2": True, "dm-sharp + perfect-1": True,
    }


def test_degeneration_to_real_orders_on_200_pairs():
    pairs = {(OrderKind.DUAL_MINUS, OrderKind.MINUS), (OrderKind.DM_STAR, OrderKind.STAR), (OrderKind.DM_SHARP, OrderKind.SHARP)}
    rng = random.Random(7)
    agree_true = 0
    for i in range(200):
        dual_kind, real_kind = sorted(pairs, key=lambda p: p[0].value)[i % 3]
        if i % 2:
            gp = random_pair(real_kind, rng.getrandbits(32))
            e, f = gp.e, gp.f
        else:
            n = rng.randint(1, 4)
            m = n if real_kind is OrderKind.SHARP else rng.randint(1, 4)
            e = rand_for_kind(real_kind, rng, m, n).std
            f = rand_for_kind(real_kind, rng, m, n).std
        real = check(real_kind, e, f).verdict
        dual = check(dual_kind, DualMatrix.real(e), DualMatrix.real(f)).verdict
        assert real == dual
        agree_true += real
    assert agree_true >= 100


@given(st.integers(0, 2**32), st.sampled_from(list(OrderKind)))
def test_route_agreement_on_random_pairs(seed, kind):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    m = n if kind.sharp_family else rng.randint(1, 4)
    e, f = rand_for_kind(kind, rng, m, n), rand_for_kind(kind, rng, m, n)
    if rng.random() < 0.5:
        # Pairs related under a weaker order exercise the true/false boundary.
        weaker = OrderKind.DM_SHARP if kind.sharp_family else OrderKind.DUAL_MINUS
        gp = random_pair(weaker, seed, max_dim=4)
        e, f = gp.e, gp.f
    try:
        check(kind, e, f)  # raises CharacterizationMismatch on disagreement
    except (PreconditionUnmet, IndexNotOne):
        pass


@given(st.integers(0, 2**32), st.sampled_from(list(OrderKind)))
def test_implication_edges_on_generated_pairs(seed, kind):
    gp = random_pair(kind, seed, max_dim=4)
    v = implication_matrix(gp.e, gp.f)
    assert v[kind] is True
