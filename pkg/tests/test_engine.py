import io
import json
import random

import pytest

from altmon.classify import MonoidKind, cycle_g
from altmon.engine import (
    ResourceCapError,
    cardinality_formula,
    class_size_formula,
    closure,
    enumerate_kind,
    factor_gib,
    ideals,
    is_ideal,
    write_jsonl,
)
from altmon.gens import realize
from altmon.pperm import from_json, identity, parse_literal, power

AOP, AOR = MonoidKind.AOPN, MonoidKind.AORN


def test_closure_examples():
    assert len(closure(5, [realize("g", 5), realize("gn2", 5)])) == 581
    assert len(closure(4, [realize(s, 4) for s in ("g2", "g1", "gn")])) == 115
    assert closure(4, [identity(4)]).elements == [identity(4)]


def test_closure_limit():
    with pytest.raises(ResourceCapError):
        closure(5, [realize("g", 5), realize("gn2", 5)], limit=100)


def test_enumeration_examples(M):
    assert len(M(AOP, 3)) == 22
    assert M(AOP, 3).as_set() == M(AOR, 3).as_set() == M(MonoidKind.AIN, 3).as_set()
    assert len(M(AOR, 4)) == 141
    assert len(enumerate_kind("in", 3)) == 34


def test_enumeration_cap():
    with pytest.raises(ResourceCapError):
        enumerate_kind(AOP, 9)


@pytest.mark.parametrize("kind", list(MonoidKind))
@pytest.mark.parametrize("n", [3, 4, 5])
def test_formula_matches_enumeration(kind, n):
    if kind in (MonoidKind.POIN, MonoidKind.AON):
        with pytest.raises(ValueError):
            cardinality_formula(kind, n)
        return
    assert len(enumerate_kind(kind, n)) == cardinality_formula(kind, n)


@pytest.mark.parametrize("kind, n", [(AOP, 6), (AOP, 7), (AOR, 6), (AOR, 7), ("popi", 7), ("pori", 7)])
def test_formula_matches_enumeration_larger(M, kind, n):
    assert len(M(MonoidKind.parse(kind), n)) == cardinality_formula(kind, n)


def test_formula_examples():
    assert cardinality_formula(AOP, 6) == 2680
    assert cardinality_formula(AOR, 5) == 936
    assert cardinality_formula(AOR, 6) == 4873
    assert cardinality_formula(AOP, 32) > 2 ** 64  # big-integer arithmetic


@pytest.mark.parametrize("kind", [AOP, AOR, MonoidKind.AON, MonoidKind.AIN])
@pytest.mark.parametrize("n", [3, 4, 5])
def test_fast_and_oracle_enumeration_agree(kind, n):
    assert enumerate_kind(kind, n).elements == enumerate_kind(kind, n, method="oracle").elements


def test_oracle_enumeration_n6(M):
    for kind in (AOP, AOR):
        assert enumerate_kind(kind, 6, method="oracle").elements == M(kind, 6).elements


@pytest.mark.parametrize("n", range(4, 9))
def test_rank_n_minus_1_slices(M, n):
    aop = [a for a in M(AOP, n) if a.rank == n - 1]
    aor = [a for a in M(AOR, n) if a.rank == n - 1]
    assert len(aop) == n * n * (n - 1) // 2
    assert len(aor) == n * n * (n - 1)


def test_class_size_formula(M):
    for kind in (MonoidKind.POPIN, MonoidKind.PORIN):
        P = M(kind, 5)
        for k in range(6):
            assert sum(1 for a in P if a.rank == k) == class_size_formula(kind, 5, k)


def test_monoid_is_closed_and_inverse_closed(M):
    for kind in (AOP, AOR):
        for n in (4, 5):
            assert M(kind, n).is_closed() and M(kind, n).is_inverse_closed()


def test_ideal_counts(M, G):
    assert len(ideals(M(AOP, 4), G(AOP, 4))) == 7
    assert {I.label for I in ideals(M(AOP, 4), G(AOP, 4))} >= {"I3o", "I3e", "I2", "I4"}
    assert len(ideals(M(AOP, 5), G(AOP, 5))) == 6
    assert len(ideals(M(MonoidKind.AON, 5))) == 8


def test_ideals_absorb_random_triples(M, G):
    rng = random.Random(7)
    for kind, n in ((AOP, 6), (AOR, 6)):
        S = M(kind, n)
        for I in ideals(S, G(kind, n)):
            for _ in range(1000 // len(ideals(S, G(kind, n)))):
                x = S.elements[rng.choice(sorted(I.members))]
                m1, m2 = rng.choice(S.elements), rng.choice(S.elements)
                assert S.index[m1 * x * m2] in I.members


def test_non_ideal_detected(M):
    S = M(AOP, 4)
    assert not is_ideal(S, {S.index[identity(4, {1})]})


def test_factor_gib():
    a = parse_literal("1->1,3->4", 5)
    assert factor_gib(a) == (0, a)
    assert factor_gib(cycle_g(5)) == (1, identity(5))
    a = parse_literal("1->4,2->5,3->1", 5)
    i, b = factor_gib(a)
    assert power(cycle_g(5), i) * b == a
    assert all(not _op(power(cycle_g(5), (5 - j) % 5) * a) for j in range(i))
    with pytest.raises(ValueError):
        factor_gib(parse_literal("1->2,2->1,3->3", 5))


def _op(b):
    seq = b.img_seq
    return all(x < y for x, y in zip(seq, seq[1:]))


def test_factor_gib_exhaustive(M):
    g = cycle_g(5)
    for a in M(MonoidKind.POPIN, 5):
        i, b = factor_gib(a)
        assert power(g, i) * b == a and _op(b)


def test_jsonl_round_trip(M):
    buf = io.StringIO()
    write_jsonl(M(AOP, 4), buf, "aop")
    lines = buf.getvalue().splitlines()
    assert json.loads(lines[0]) == {"kind": "aop", "n": 4, "count": 115}
    assert [from_json(json.loads(s)) for s in lines[1:]] == M(AOP, 4).elements
