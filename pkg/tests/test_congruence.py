import itertools

import numpy as np
import pytest

from altmon.classify import MonoidKind, cycle_g
from altmon.congruence import (
    Congruence,
    CongruenceSpec,
    _anchor_h,
    build_pi,
    build_theta,
    build_theta_union,
    check_tilde_laws,
    congruence_lattice_oracle,
    covering_pairs,
    dihedral_counterexamples,
    enumerate_congruences_constructive,
    expected_normal_count,
    group_congruences,
    join,
    lattice_dot,
    pori_counterexamples,
    principal_congruence,
    rees,
    rotation_fix_counterexamples,
    tilde_map,
)
from altmon.engine import ResourceCapError, closure, ideals
from altmon.gens import realize
from altmon.green import h_group_type, idempotent_h_class
from altmon.pperm import gaps, identity, inverse, parse_literal

AOP, AOR, AO = MonoidKind.AOPN, MonoidKind.AORN, MonoidKind.AON


def cls(G, name):
    return next(c for c in range(len(G.j_classes)) if G.j_name(c) == name)


def ideal(M, G, kind, n, label):
    return next(I for I in ideals(M(kind, n), G(kind, n)) if I.label == label)


# -- partitions ------------------------------------------------------------------------

def test_partition_basics():
    c = Congruence.from_labels([5, 3, 5, 3, 9])
    assert list(c.roots) == [0, 1, 0, 1, 4]
    assert c.block_count == 3
    assert c.blocks() == [[0, 2], [1, 3], [4]]
    assert Congruence.identity(5).refines(c) and c.refines(Congruence.universal(5))
    assert not c.refines(Congruence.identity(5))
    assert c == Congruence([0, 1, 0, 1, 4]) and hash(c) == hash(Congruence([0, 1, 0, 1, 4]))


def test_spec_labels():
    assert CongruenceSpec("identity").label() == "identity"
    assert CongruenceSpec("pi", ("J3o", "N3")).label() == "pi(J3o,N3)"


def test_random_partition_is_not_compatible(M):
    S = M(AOP, 4)
    rng = np.random.default_rng(0)
    assert not Congruence.from_labels(rng.integers(0, 3, len(S))).is_compatible(S)


# -- Rees ------------------------------------------------------------------------------

def test_rees_extremes(M, G):
    S = M(AOP, 4)
    zero = ideal(M, G, AOP, 4, "I0")
    assert rees(S, zero) == Congruence.identity(len(S))
    assert rees(S, ideal(M, G, AOP, 4, "I4")) == Congruence.universal(len(S))


def test_rees_rejects_non_ideals(M):
    S = M(AOP, 4)
    with pytest.raises(ValueError):
        rees(S, {S.identity_index, 0})


def test_ao5_congruences_are_its_rees_congruences(M):
    S = M(AO, 5)
    reeses = {rees(S, I).key for I in ideals(S)}
    assert len(reeses) == 8
    assert {c.key for c in congruence_lattice_oracle(S)} == reeses


# -- tilde maps ---------------------------------------------------------------------------

def test_low_rank_flank(M, G):
    S, g = M(AOP, 4), G(AOP, 4)
    tm = tilde_map(S, g, cls(g, "J2"))
    i = next(i for i in tm.members if S.elements[i].dom == (2, 4))
    assert tm.left[i] == parse_literal("1->2,2->4", 4)
    assert tm.eps == identity(4, {1, 2})


def test_odd_twist_at_aop5(M, G):
    S, g = M(AOP, 5), G(AOP, 5)
    tm = tilde_map(S, g, cls(g, "J4"))
    gn = realize("gn", 5)
    seen = 0
    for i in tm.members:
        a = S.elements[i]
        d, _ = gaps(a)
        a_left = tm.left[i]
        plain = __import__("altmon.classify", fromlist=["flank_maps"]).flank_maps(a)[0]
        if d % 2 == 0:
            seen += 1
            assert a_left == inverse(gn) * plain
        else:
            assert a_left == plain
        assert tm.right[S.index[~a]] == ~a_left
    assert seen and len(tm.members) == 50


def test_fundcon_spot_check_aop5(M, G):
    S, g = M(AOP, 5), G(AOP, 5)
    c = cls(g, "J4")
    tm = tilde_map(S, g, c)
    members = set(tm.members)
    for x, y in itertools.product(tm.members, repeat=2):
        xy = S.index[S.elements[x] * S.elements[y]]
        if xy in members:
            assert S.elements[tm.tilde[xy]] == S.elements[tm.tilde[x]] * S.elements[tm.tilde[y]]


@pytest.mark.parametrize("kind", [AOP, AOR])
@pytest.mark.parametrize("n", [4, 5, 6])
def test_tilde_laws_every_class(M, G, kind, n):
    S, g = M(kind, n), G(kind, n)
    for c in range(len(g.j_classes)):
        if g.j_rank[c] == 0:
            with pytest.raises(ValueError):
                tilde_map(S, g, c)
            continue
        bad = check_tilde_laws(S, g, tilde_map(S, g, c))
        assert not any(bad.values()), (g.j_name(c), bad)


def test_tilde_needs_aop_or_aor(M, G):
    with pytest.raises(ValueError):
        tilde_map(M(AO, 4), G(AO, 4), 1)


# -- group congruences ----------------------------------------------------------------------

def test_cyclic_six_has_four_congruences():
    C6 = closure(6, [cycle_g(6)])
    assert len(group_congruences(C6, range(6))) == 4


def test_dihedral_ten(M, G):
    S, g = M(AOR, 6), G(AOR, 6)
    h = idempotent_h_class(S, g, cls(g, "J5e"))
    assert len(group_congruences(S, g.H[h])) == 3


def test_klein_units(M, G):
    S, g = M(AOR, 4), G(AOR, 4)
    h = idempotent_h_class(S, g, g.unit_class())
    cs = group_congruences(S, g.H[h])
    assert len(cs) == 5
    assert cs[0].is_trivial and cs[-1].is_universal


@pytest.mark.parametrize("kind", [AOP, AOR])
@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_normal_subgroup_counts_match_classification(M, G, kind, n):
    S, g = M(kind, n), G(kind, n)
    for c in range(len(g.j_classes)):
        h = idempotent_h_class(S, g, c)
        assert len(group_congruences(S, g.H[h])) == expected_normal_count(h_group_type(S, g, h))


def test_group_congruences_reject_non_groups(M):
    S = M(AOP, 4)
    with pytest.raises(ValueError):
        group_congruences(S, [0, 1, 2])


# -- pi / theta --------------------------------------------------------------------------------

def _rho(S, g, c, which):
    rhos = group_congruences(S, _anchor_h(S, g, c))
    return rhos[0] if which == "trivial" else rhos[-1]


def test_pi_on_j1_is_identity(M, G):
    S, g = M(AOP, 4), G(AOP, 4)
    c = cls(g, "J1")
    assert build_pi(S, g, tilde_map(S, g, c), _rho(S, g, c, "trivial")) == Congruence.identity(len(S))


def test_pi_on_units_is_rees_below(M, G):
    S, g = M(AOP, 4), G(AOP, 4)
    c = cls(g, "J4")
    pi = build_pi(S, g, tilde_map(S, g, c), _rho(S, g, c, "trivial"))
    assert pi == rees(S, ideal(M, G, AOP, 4, "I3"))


def test_theta_union_cases(M, G):
    S, g = M(AOP, 4), G(AOP, 4)
    co, ce = cls(g, "J3o"), cls(g, "J3e")
    to, te = tilde_map(S, g, co), tilde_map(S, g, ce)
    triv_o, triv_e = _rho(S, g, co, "trivial"), _rho(S, g, ce, "trivial")
    univ_o, univ_e = _rho(S, g, co, "universal"), _rho(S, g, ce, "universal")
    assert build_theta_union(S, g, to, triv_o, te, triv_e) == rees(S, ideal(M, G, AOP, 4, "I2"))
    assert build_theta_union(S, g, to, triv_o, te, univ_e) == build_theta(S, g, te, univ_e)
    both = build_theta_union(S, g, to, univ_o, te, univ_e)
    assert both.is_compatible(S)
    assert both.block_count == 1 + 4 + 4 + 2  # I2, H-classes of J3o and J3e, units


def test_theta_union_precondition(M, G):
    S, g = M(AOP, 4), G(AOP, 4)
    c2, co = cls(g, "J2"), cls(g, "J3o")
    with pytest.raises(ValueError):
        build_theta_union(S, g, tilde_map(S, g, c2), _rho(S, g, c2, "trivial"),
                          tilde_map(S, g, co), _rho(S, g, co, "trivial"))


def test_pi_rejects_foreign_group(M, G):
    S, g = M(AOP, 5), G(AOP, 5)
    c3, c4 = cls(g, "J3"), cls(g, "J4")
    with pytest.raises(ValueError):
        build_pi(S, g, tilde_map(S, g, c4), _rho(S, g, c3, "universal"))


@pytest.mark.parametrize("kind, n", [(AOP, 4), (AOP, 5), (AOR, 4), (AOR, 6)])
def test_theta_inside_pi(M, G, kind, n):
    S, g = M(kind, n), G(kind, n)
    for c in range(len(g.j_classes)):
        if g.j_rank[c] in (0, n):
            continue
        tm = tilde_map(S, g, c)
        for rho in group_congruences(S, _anchor_h(S, g, c)):
            th, pi = build_theta(S, g, tm, rho), build_pi(S, g, tm, rho)
            assert th.refines(pi) and th.is_compatible(S) and pi.is_compatible(S)


# -- lattices ----------------------------------------------------------------------------------

@pytest.mark.parametrize("kind, n, count", [(AOP, 3, 5), (AOP, 4, 14), (AOR, 4, 11)])
def test_constructive_equals_oracle(M, kind, n, count):
    S = M(kind, n)
    cons = enumerate_congruences_constructive(S)
    oracle = congruence_lattice_oracle(S)
    assert set(cons) == {c.key for c in oracle}
    assert len(oracle) == count


def test_aop3_named_congruences(M):
    labels = {spec.label() for _, spec in enumerate_congruences_constructive(M(AOP, 3)).values()}
    assert labels == {"identity", "universal", "pi(J2,N1)", "pi(J3,N1)", "pi(J3,N3)"}


def test_ao4_has_seven(M):
    assert len(congruence_lattice_oracle(M(AO, 4))) == 7


def test_lattice_is_join_closed(M, G):
    S = M(AOP, 4)
    lat = congruence_lattice_oracle(S)
    keys = {c.key for c in lat}
    assert Congruence.identity(len(S)).key in keys and Congruence.universal(len(S)).key in keys
    for x, y in itertools.combinations(lat, 2):
        assert join(S, x, y).key in keys
    for I in ideals(S, G(AOP, 4)):
        assert rees(S, I).key in keys


def test_principal_congruence_contains_its_pair(M):
    S = M(AOP, 4)
    c = principal_congruence(S, 3, 7)
    assert c.related(3, 7) and c.is_compatible(S)


def test_oracle_cap(M):
    with pytest.raises(ResourceCapError):
        congruence_lattice_oracle(M(AOP, 4), cap=100)


def test_lattice_dot(M):
    S = M(AOP, 3)
    lat = congruence_lattice_oracle(S)
    names = {k: spec.label() for k, (_, spec) in enumerate_congruences_constructive(S).items()}
    dot = lattice_dot(lat, names)
    assert dot.count("->") == len(covering_pairs(lat)) == 4  # a chain of five
    assert '"identity / 22"' in dot and '"universal / 1"' in dot


# -- lemmas -----------------------------------------------------------------------------------

@pytest.mark.parametrize("n", [4, 5, 6])
def test_pori_lemma(n):
    assert pori_counterexamples(n) == []


@pytest.mark.parametrize("n", range(5, 9))
def test_dihedral_lemma(n):
    assert dihedral_counterexamples(n) == []


def test_dihedral_lemma_needs_five():
    with pytest.raises(ValueError):
        dihedral_counterexamples(4)


@pytest.mark.parametrize("n", range(2, 9))
def test_rotation_fix(n):
    assert rotation_fix_counterexamples(n) == []
