import pytest

from altmon.classify import MonoidKind
from altmon.engine import ResourceCapError
from altmon.gens import (
    GenSpec,
    anchored_pair_sweep,
    exhaustive_rank_check,
    g1_identity_holds,
    hngn_square_counterexamples,
    known_generating_set,
    known_rank,
    parse_specs,
    product_set_lemmas,
    rank_bound_details,
    rank_lower_bound,
    realize,
    unit_group_rank,
    verify_generating,
)
from altmon.pperm import format_literal

AOP, AOR, AO = MonoidKind.AOPN, MonoidKind.AORN, MonoidKind.AON


@pytest.mark.parametrize("name, n, i, text", [
    ("g", 4, None, "1->2,2->3,3->4,4->1"),
    ("gn", 5, None, "1->2,2->3,3->4,4->1"),
    ("g1", 5, None, "2->3,3->4,4->5,5->2"),
    ("h", 4, None, "1->4,2->3,3->2,4->1"),
    ("hn", 5, None, "1->4,2->3,3->2,4->1"),
    ("x", 5, 3, "1->2,2->3,4->4,5->5"),
    ("x", 5, 1, "2->1,3->2,4->3,5->4"),
    ("x", 5, 2, "1->1,3->2,4->3,5->5"),
    ("x", 4, 1, "2->1,3->2,4->4"),
    ("x", 4, 2, "1->1,3->2,4->3"),
])
def test_realize(name, n, i, text):
    assert format_literal(realize(GenSpec(name, n, i))) == text


def test_realize_errors():
    with pytest.raises(ValueError):
        realize("q", 5)
    with pytest.raises(ValueError):
        realize("x", 5)
    with pytest.raises(ValueError):
        realize("x", 5, 6)
    with pytest.raises(ValueError):
        realize("g", 2)


def test_parse_specs():
    assert [str(s) for s in parse_specs(["g", "x3"], 5)] == ["g", "x3"]


def test_verify_examples(M):
    assert verify_generating(AOP, 5, parse_specs(["g", "gn2"], 5), M(AOP, 5)) == {
        "generates": True, "closure_size": 581}
    assert verify_generating(AOR, 6, parse_specs(["g2", "hg", "g1", "gn"], 6), M(AOR, 6)) == {
        "generates": True, "closure_size": 4873}
    assert verify_generating(AOP, 5, parse_specs(["g"], 5), M(AOP, 5)) == {
        "generates": False, "closure_size": 5}


@pytest.mark.parametrize("kind, n", [(AOP, 3), (AOP, 4), (AOP, 5), (AOP, 6), (AOP, 7),
                                     (AOR, 4), (AOR, 5), (AOR, 6), (AOR, 7), (AO, 4), (AO, 5), (AO, 6)])
def test_known_sets_generate(M, kind, n):
    assert verify_generating(kind, n, known_generating_set(kind, n), M(kind, n))["generates"]
    assert len(known_generating_set(kind, n)) == known_rank(kind, n)


@pytest.mark.parametrize("n", range(3, 10))
def test_g1_identity(n):
    assert g1_identity_holds(n)


def test_lower_bound_examples(M):
    assert rank_lower_bound(AOP, 5, M(AOP, 5)) == 2
    assert rank_lower_bound(AOP, 4, M(AOP, 4)) == 3
    assert rank_bound_details(AOR, 6, M(AOR, 6))["structural"] == 4


@pytest.mark.parametrize("kind, n, want", [(AOP, 4, 1), (AOP, 5, 1), (AOR, 4, 2), (AOR, 5, 2),
                                           (AOR, 6, 2), (AOR, 7, 1), ("pori", 5, 2)])
def test_unit_group_rank(kind, n, want):
    assert unit_group_rank(kind, n) == want


def test_exhaustive_checks(M):
    assert exhaustive_rank_check(AOP, 4, 2, M(AOP, 4))
    assert exhaustive_rank_check(AOP, 5, 1, M(AOP, 5))
    assert exhaustive_rank_check(AOR, 4, 2, M(AOR, 4))
    assert not exhaustive_rank_check(AOP, 3, 2, M(AOP, 3))
    with pytest.raises(ResourceCapError):
        exhaustive_rank_check(AOP, 5, 3, M(AOP, 5))


def test_anchored_sweep_aor7(M):
    res = anchored_pair_sweep(AOR, 7, M(AOR, 7))
    assert res["candidates"] == 294 and res["rank_exceeds_2"]
    assert rank_lower_bound(AOR, 7, M(AOR, 7)) == 3


def test_anchored_sweep_needs_cyclic_units(M):
    with pytest.raises(ValueError):
        anchored_pair_sweep(AOR, 5, M(AOR, 5))


def test_anchored_sweep_finds_generators_when_they_exist(M):
    # AOP_5 = <g, gn^2>, so the sweep must not report a false impossibility
    res = anchored_pair_sweep(AOP, 5, M(AOP, 5))
    assert realize("gn2", 5) in res["generating"]


def test_hngn_square(M):
    assert hngn_square_counterexamples(7, M(AOR, 7)) == []


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_product_set_lemmas(n):
    res = product_set_lemmas(n)
    assert all(res[k] for k in res if k in ("J", "Jo", "Je"))
