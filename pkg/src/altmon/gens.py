"""Named generators, generating-set checks and rank bounds."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .classify import MonoidKind, cycle_g, reflection_h, unit_group
from .engine import MonoidSet, ResourceCapError, closure_set, enumerate_kind
from .pperm import PartialPerm, check_n, identity, order_preserving, power

NAMES = ("g", "g2", "g1", "gn", "gn2", "h", "hg", "hn", "hngn", "x")
SWEEP_BUDGET = 200_000


@dataclass(frozen=True)
class GenSpec:
    name: str
    n: int
    i: int | None = None  # only for x(i)

    def __str__(self) -> str:
        return f"x{self.i}" if self.name == "x" else self.name


def _gn(n: int) -> PartialPerm:
    # i -> i+1 on {1..n-2}, n-1 -> 1
    t = [0] * (n + 1)
    for i in range(1, n - 1):
        t[i] = i + 1
    t[n - 1] = 1
    return PartialPerm._raw(tuple(t))


def _g1(n: int) -> PartialPerm:
    # 2 -> 3 -> ... -> n -> 2
    t = [0] * (n + 1)
    for i in range(2, n):
        t[i] = i + 1
    t[n] = 2
    return PartialPerm._raw(tuple(t))


def _hn(n: int) -> PartialPerm:
    t = [0] * (n + 1)
    for i in range(1, n):
        t[i] = n - i
    return PartialPerm._raw(tuple(t))


def _x(n: int, i: int) -> PartialPerm:
    """x_i = (X_i -> X_j) order-preserving, X_i the chain minus i."""
    if not 1 <= i <= n:
        raise ValueError(f"x({i}) needs 1 <= i <= {n}")
    if i == 1:
        j = n if n % 2 else n - 1
    elif i == 2:
        j = n - 1 if n % 2 else n
    else:
        j = i - 2
    pts = range(1, n + 1)
    return order_preserving(n, [p for p in pts if p != i], [p for p in pts if p != j])


def realize(name: str | GenSpec, n: int | None = None, i: int | None = None) -> PartialPerm:
    if isinstance(name, GenSpec):
        name, n, i = name.name, name.n, name.i
    check_n(n)
    if name == "g":
        return cycle_g(n)
    if name == "g2":
        return power(cycle_g(n), 2)
    if name == "g1":
        return _g1(n)
    if name == "gn":
        return _gn(n)
    if name == "gn2":
        return power(_gn(n), 2)
    if name == "h":
        return reflection_h(n)
    if name == "hg":
        return reflection_h(n) * cycle_g(n)
    if name == "hn":
        return _hn(n)
    if name == "hngn":
        return _hn(n) * _gn(n)
    if name == "x":
        if i is None:
            raise ValueError("x needs an index")
        return _x(n, i)
    raise ValueError(f"unknown generator name {name!r}")


def parse_specs(names, n: int) -> list[GenSpec]:
    """``["g", "gn2", "x3"]`` -> GenSpecs."""
    out = []
    for s in names:
        if s.startswith("x") and s[1:].isdigit():
            out.append(GenSpec("x", n, int(s[1:])))
        else:
            out.append(GenSpec(s, n))
    return out


def known_generating_set(kind, n: int) -> list[GenSpec]:
    kind = MonoidKind.parse(kind)
    if kind is MonoidKind.AOPN:
        names = ["g", "gn2"] if n % 2 else ["g2", "g1", "gn"]
    elif kind is MonoidKind.AORN:
        names = {
            0: ["g2", "h", "gn"],
            1: ["g", "h", "gn2"],
            2: ["g2", "hg", "g1", "gn"],
            3: ["g", "gn2", "hngn"],
        }[n % 4]
    elif kind is MonoidKind.AON:
        return [GenSpec("x", n, i) for i in range(1, n + 1)]
    else:
        raise ValueError(f"no tabulated generating set for {kind.value}")
    return [GenSpec(s, n) for s in names]


def known_rank(kind, n: int) -> int:
    kind = MonoidKind.parse(kind)
    if kind is MonoidKind.AOPN:
        return 2 if n % 2 else 3
    if kind is MonoidKind.AORN:
        return 4 if n % 4 == 2 else 3
    if kind is MonoidKind.AON:
        return n
    raise ValueError(f"no tabulated rank for {kind.value}")


def verify_generating(kind, n: int, specs, M: MonoidSet | None = None) -> dict:
    kind = MonoidKind.parse(kind)
    M = M or enumerate_kind(kind, n)
    gens = [realize(s) for s in specs]
    got = closure_set(n, gens)
    return {"generates": got == M.as_set(), "closure_size": len(got)}


def g1_identity_holds(n: int) -> bool:
    """g1 = h gn^(n-2) h."""
    h = reflection_h(n)
    return realize("g1", n) == h * power(_gn(n), n - 2) * h


# -- rank bounds ----------------------------------------------------------------

def _group_closure(gens, n: int) -> set:
    return closure_set(n, gens)


def unit_group_rank(kind, n: int) -> int:
    """Least size of a generating set of the unit group, by brute force."""
    units = sorted(unit_group(kind, n))
    target = set(units)
    if len(target) == 1:
        return 0
    for r in range(1, len(units) + 1):
        for sub in itertools.combinations(units, r):
            if _group_closure(sub, n) == target:
                return r
    raise AssertionError("unreachable")


def _maximal_nonunit_count(kind, n: int, M: MonoidSet | None = None) -> int:
    from .green import green_classes

    M = M or enumerate_kind(kind, n)
    return len(green_classes(M).maximal_nonunit_classes())


def _top_layers(M: MonoidSet) -> frozenset:
    n = M.n
    return frozenset(a for a in M.elements if a.rank >= n - 1)


def _top_closure(n: int, gens) -> set:
    """Elements of rank >= n-1 in the generated monoid.

    Rank never goes up along a product, so every prefix of a word of rank
    >= n-1 stays in that band; a BFS that drops lower ranks is exact.
    """
    gens = [s for s in gens if s.rank >= n - 1]
    seen = {identity(n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = x * s
                if y.rank >= n - 1 and y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def generates(M: MonoidSet, gens, top: frozenset | None = None, units: frozenset | None = None) -> bool:
    """Early-exit generation test: units first, then the top two ranks, then everything."""
    n = M.n
    top = top if top is not None else _top_layers(M)
    units = units if units is not None else frozenset(a for a in top if a.rank == n)
    unit_gens = [s for s in gens if s.rank == n]
    if len(units) > 1 and _group_closure(unit_gens, n) != units:
        return False
    if _top_closure(n, gens) != top:
        return False
    return closure_set(n, gens, limit=len(M)) == M.as_set()


def exhaustive_rank_check(kind, n: int, r: int, M: MonoidSet | None = None,
                          budget: int = SWEEP_BUDGET) -> bool:
    """True iff no r-element subset of M generates M."""
    kind = MonoidKind.parse(kind)
    M = M or enumerate_kind(kind, n)
    if comb(len(M), r) > budget:
        raise ResourceCapError(f"{comb(len(M), r)} subsets exceed the budget {budget}")
    top = _top_layers(M)
    units = frozenset(a for a in top if a.rank == n)
    for sub in itertools.combinations(M.elements, r):
        if generates(M, sub, top, units):
            return False
    return True


def anchored_pair_sweep(kind, n: int, M: MonoidSet | None = None) -> dict:
    """Check <g, a> != M for every a, which rules out rank 2 when the units are <g>.

    Any 2-element generating set would need one generator of the cyclic unit
    group, and that generator and g generate each other; the other generator
    must have rank n-1 because nothing else reaches that rank.
    """
    kind = MonoidKind.parse(kind)
    M = M or enumerate_kind(kind, n)
    g = cycle_g(n)
    units = unit_group(kind, n)
    if units != {power(g, k) for k in range(n)}:
        raise ValueError("anchored sweep needs the unit group to be <g>")
    top = _top_layers(M)
    cands = [a for a in M.elements if a.rank == n - 1]
    hits = [a for a in cands if generates(M, [g, a], top, frozenset(units))]
    return {"candidates": len(cands), "generating": hits, "rank_exceeds_2": not hits}


def rank_bound_details(kind, n: int, M: MonoidSet | None = None) -> dict:
    kind = MonoidKind.parse(kind)
    M = M or enumerate_kind(kind, n)
    u = unit_group_rank(kind, n)
    j = _maximal_nonunit_count(kind, n, M)
    out = {"unit_rank": u, "maximal_nonunit_classes": j, "structural": u + j, "bound": u + j}
    if kind is MonoidKind.AORN and n % 4 == 3 and u + j == 2:
        sweep = anchored_pair_sweep(kind, n, M)
        out["anchored_sweep"] = {"candidates": sweep["candidates"],
                                 "generating": len(sweep["generating"])}
        if sweep["rank_exceeds_2"]:
            out["bound"] = 3
    return out


def rank_lower_bound(kind, n: int, M: MonoidSet | None = None) -> int:
    return rank_bound_details(kind, n, M)["bound"]


def hngn_square_counterexamples(n: int, M: MonoidSet | None = None) -> list:
    """(k, a) with n outside Dom(g^k a) but (hn gn)^2 g^k a != g^k a, over AOR_n minus AOP_n."""
    if M is None:
        M = enumerate_kind(MonoidKind.AORN, n)
    aop = enumerate_kind(MonoidKind.AOPN, n).as_set()
    sq = power(realize("hngn", n), 2)
    g = cycle_g(n)
    rots = [power(g, k) for k in range(n)]
    bad = []
    for a in M.elements:
        if a in aop:
            continue
        for k, gk in enumerate(rots):
            b = gk * a
            if n not in b.dom and sq * b != b:
                bad.append((k, a))
    return bad


def product_set(left, middle, right) -> set:
    return {x * y * z for x in left for y in middle for z in right}


def semigroup_powers(a: PartialPerm) -> set:
    """The semigroup <a> = {a, a^2, ...} (no identity adjoined)."""
    out, x = [], a
    while x not in out:
        out.append(x)
        x = x * a
    return set(out)


def product_set_lemmas(n: int) -> dict:
    """Rank-(n-1) part of AOP_n as unit-sandwiched powers of gn^2 (n odd)
    or of g1 / gn per gap parity (n even)."""
    M = enumerate_kind(MonoidKind.AOPN, n)
    units = unit_group(MonoidKind.AOPN, n)
    from .pperm import gaps

    top = {a for a in M.elements if a.rank == n - 1}
    if n % 2:
        got = product_set(units, semigroup_powers(power(_gn(n), 2)), units)
        return {"J": got == top, "size": len(got)}
    odd = {a for a in top if gaps(a)[0] % 2}
    even = top - odd
    got_o = product_set(units, semigroup_powers(_g1(n)), units)
    got_e = product_set(units, semigroup_powers(_gn(n)), units)
    return {"Jo": got_o == odd, "Je": got_e == even, "sizes": (len(got_o), len(got_e))}
