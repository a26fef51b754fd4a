"""Congruences of AOP_n and AOR_n.

Two independent routes to the congruence lattice:

* :func:`enumerate_congruences_constructive` builds every congruence from
  Rees ideals, group congruences of anchor H-classes and tilde maps;
* :func:`congruence_lattice_oracle` generates all principal congruences by
  pair closure and closes them under joins.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .classify import MonoidKind, cycle_g, reflection_h
from .engine import Ideal, MonoidSet, ResourceCapError
from .gens import realize
from .green import GreenStructure, green_classes, identify_group
from .pperm import PartialPerm, gaps, identity, inverse, order_preserving, power

ORACLE_CAP = 5000


# -- partitions ---------------------------------------------------------------------

def _roots_from_labels(labels) -> np.ndarray:
    labels = np.asarray(labels)
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    return first[inv].astype(np.int64)


class Congruence:
    """A partition of a monoid's index space, stored by least block members."""

    __slots__ = ("roots", "_key")

    def __init__(self, roots):
        self.roots = np.asarray(roots, dtype=np.int64)
        self._key = self.roots.tobytes()

    @classmethod
    def from_labels(cls, labels) -> "Congruence":
        return cls(_roots_from_labels(labels))

    @classmethod
    def identity(cls, size: int) -> "Congruence":
        return cls(np.arange(size))

    @classmethod
    def universal(cls, size: int) -> "Congruence":
        return cls(np.zeros(size, dtype=np.int64))

    @property
    def key(self) -> bytes:
        return self._key

    @property
    def size(self) -> int:
        return len(self.roots)

    @property
    def block_count(self) -> int:
        return int((self.roots == np.arange(len(self.roots))).sum())

    def related(self, x: int, y: int) -> bool:
        return self.roots[x] == self.roots[y]

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x, r in enumerate(self.roots.tolist()):
            out.setdefault(r, []).append(x)
        return list(out.values())

    def refines(self, other: "Congruence") -> bool:
        """Whether ``self`` is contained in ``other`` as a relation."""
        return bool((other.roots[self.roots] == other.roots).all())

    def is_compatible(self, M: MonoidSet) -> bool:
        r = self.roots
        for table in (M.right_table(), M.left_table()):
            for j in range(table.shape[1]):
                col = table[:, j]
                if not (r[col] == r[col[r]]).all():
                    return False
        return True

    def __eq__(self, other) -> bool:
        return isinstance(other, Congruence) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Congruence({self.block_count} blocks of {self.size})"


@dataclass(frozen=True)
class CongruenceSpec:
    template: str  # identity | universal | rees | pi | theta | thetaUnion
    params: tuple = ()

    def label(self) -> str:
        if self.template in ("identity", "universal"):
            return self.template
        return f"{self.template}({','.join(str(p) for p in self.params)})"

    def __str__(self) -> str:
        return self.label()


# -- Rees congruences ---------------------------------------------------------------

def rees(M: MonoidSet, ideal: Ideal | set | frozenset) -> Congruence:
    from .engine import is_ideal

    members = ideal.members if isinstance(ideal, Ideal) else frozenset(ideal)
    if not is_ideal(M, members):
        raise ValueError("Rees congruence needs an absorbing set")
    roots = np.arange(len(M))
    roots[list(members)] = min(members)
    return Congruence(roots)


# -- group congruences ------------------------------------------------------------------

@dataclass
class GroupCongruence:
    group: tuple  # M-indices of the group H-class
    normal_subgroup: frozenset
    cosets: list
    label: str

    @property
    def is_trivial(self) -> bool:
        return len(self.normal_subgroup) == 1

    @property
    def is_universal(self) -> bool:
        return len(self.normal_subgroup) == len(self.group)

    def coset_of(self) -> dict:
        return {x: k for k, cs in enumerate(self.cosets) for x in cs}


def _generated(elems: set, e: PartialPerm) -> frozenset:
    out = {e} | set(elems)
    frontier = list(out)
    while frontier:
        nxt = []
        for x in frontier:
            for s in elems:
                y = x * s
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


def subgroups(elems: list[PartialPerm]) -> set[frozenset]:
    """All subgroups, found as joins of cyclic subgroups."""
    idem = [x for x in elems if x.is_idempotent()]
    if len(idem) != 1:
        raise ValueError("not a group")
    e = idem[0]
    pool = set(elems)
    if any(e * x != x or x * e != x for x in elems):
        raise ValueError("not a group: the idempotent is not an identity")
    cyclic = {_generated({x}, e) for x in elems}
    for c in cyclic:
        if not c <= pool:
            raise ValueError("not a group: products leave the set")
    found = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        new = set()
        for A in frontier:
            for B in cyclic:
                if B <= A:
                    continue
                C = _generated(set(A | B), e)
                if C not in found:
                    new.add(C)
        found |= new
        frontier = new
    return found


def normal_subgroups(elems: list[PartialPerm]) -> list[frozenset]:
    out = []
    for N in subgroups(elems):
        if all((~g) * x * g in N for g in elems for x in N):
            out.append(N)
    out.sort(key=lambda N: (len(N), sorted(x.images for x in N)))
    return out


def group_congruences(M: MonoidSet, h_indices) -> list[GroupCongruence]:
    """One congruence per normal subgroup of the group H-class."""
    group = tuple(sorted(h_indices))
    elems = [M.elements[i] for i in group]
    normals = normal_subgroups(elems)
    gtype = identify_group(elems)
    if gtype.tag != "other" and len(normals) != expected_normal_count(gtype):
        raise AssertionError(f"{gtype} has {len(normals)} normal subgroups, "
                             f"expected {expected_normal_count(gtype)}")
    by_order: dict[int, int] = {}
    for N in normals:
        by_order[len(N)] = by_order.get(len(N), 0) + 1
    seen_order: dict[int, int] = {}
    out = []
    for N in normals:
        k = seen_order.get(len(N), 0)
        seen_order[len(N)] = k + 1
        label = f"N{len(N)}" + ("abcdefgh"[k] if by_order[len(N)] > 1 else "")
        cosets, done = [], set()
        for x in elems:
            if x in done:
                continue
            cs = frozenset(M.index[y * x] for y in N)
            done |= {M.elements[i] for i in cs}
            cosets.append(cs)
        out.append(GroupCongruence(group, frozenset(M.index[x] for x in N), cosets, label))
    return out


def _divisors(m: int) -> int:
    return sum(1 for d in range(1, m + 1) if m % d == 0)


def expected_normal_count(gtype) -> int:
    """Normal subgroup count from the cyclic/dihedral classification."""
    tag, order = gtype.tag, gtype.order
    if tag == "trivial":
        return 1
    if tag == "cyclic":
        return _divisors(order)
    if tag == "klein":
        return 5
    if tag == "dihedral":
        m = order // 2
        return _divisors(m) + (1 if m % 2 else 3)
    raise ValueError(f"no classification for {gtype}")


# -- tilde maps ---------------------------------------------------------------------------

@dataclass
class TildeMap:
    j: int
    members: list
    eps: PartialPerm
    anchor: list  # M-indices of the H-class of eps
    left: dict = field(repr=False)
    right: dict = field(repr=False)
    tilde: dict = field(repr=False)  # M-index -> M-index inside anchor


def _kind_of(M: MonoidSet) -> MonoidKind:
    if M.kind not in (MonoidKind.AOPN, MonoidKind.AORN):
        raise ValueError("tilde maps are defined for aop and aor monoids")
    return M.kind


def _anchor_set(G: GreenStructure, c: int) -> tuple:
    n, k, tag = G.n, G.j_rank[c], G.j_tag[c]
    if tag == "o":
        return tuple(range(2, n + 1))
    return tuple(range(1, k + 1))


def tilde_map(M: MonoidSet, G: GreenStructure, c: int) -> TildeMap:
    kind = _kind_of(M)
    n, k, tag = M.n, G.j_rank[c], G.j_tag[c]
    members = G.j_classes[c]
    X = _anchor_set(G, c)
    eps = identity(n, X)
    left, right = {}, {}
    if k == 0:
        raise ValueError("the zero class carries no tilde map")
    if k == n:
        ident = identity(n)
        for i in members:
            left[i] = right[i] = ident
    elif k <= n - 2 or tag in ("o", "e"):
        for i in members:
            a = M.elements[i]
            left[i] = order_preserving(n, X, a.dom)
            right[i] = order_preserving(n, a.img, X)
    else:
        base = range(1, n)
        if n % 2 == 1:
            twist = realize("gn", n)
            twist_inv = inverse(twist)
            for i in members:
                a = M.elements[i]
                d, im = gaps(a)
                aL = order_preserving(n, base, a.dom)
                aR = order_preserving(n, a.img, base)
                left[i] = aL if d % 2 else twist_inv * aL
                right[i] = aR if im % 2 else aR * twist
        elif kind is MonoidKind.AORN and n % 4 == 0:
            twist = realize("hn", n)
            for i in members:
                a = M.elements[i]
                d, im = gaps(a)
                aL = order_preserving(n, base, a.dom)
                aR = order_preserving(n, a.img, base)
                left[i] = aL if d % 2 == 0 else twist * aL
                right[i] = aR if im % 2 == 0 else aR * twist
        else:
            raise ValueError(f"no tilde map family for J{k}{tag} of {M.label}")
    tilde = {}
    for i in members:
        t = left[i] * M.elements[i] * right[i]
        tilde[i] = M.index[t]
    eps_i = M.index[eps]
    anchor = G.H[G.h_of[eps_i]]
    return TildeMap(c, list(members), eps, list(anchor), left, right, tilde)


def check_tilde_laws(M: MonoidSet, G: GreenStructure, tm: TildeMap) -> dict:
    """Violation counts for each law; all zero when the map is sound."""
    members = tm.members
    el = M.elements
    mset = set(members)
    anchor = set(tm.anchor)
    bad = {"in_anchor": 0, "flanks_in_J": 0, "law1": 0, "law2": 0, "law3": 0,
           "fundcon": 0, "bijection": 0}
    by_dom: dict[int, list[int]] = {}
    by_img: dict[int, list[int]] = {}
    for i in members:
        by_dom.setdefault(int(G.dom_mask[i]), []).append(i)
        by_img.setdefault(int(G.img_mask[i]), []).append(i)
        if tm.tilde[i] not in anchor:
            bad["in_anchor"] += 1
        if G.j_rank[tm.j] < M.n:
            li, ri = M.index.get(tm.left[i]), M.index.get(tm.right[i])
            if li is None or ri is None or li not in mset or ri not in mset:
                bad["flanks_in_J"] += 1
        inv_i = M.index[~el[i]]
        if tm.right[inv_i] != ~tm.left[i]:
            bad["law3"] += 1
    for group in by_dom.values():
        if len({tm.left[i] for i in group}) != 1:
            bad["law1"] += 1
    for group in by_img.values():
        if len({tm.right[i] for i in group}) != 1:
            bad["law2"] += 1

    # H_a -> H_eps is a bijection with the stated inverse
    for hid in {int(G.h_of[i]) for i in members}:
        cls = G.H[hid]
        images = {tm.tilde[i] for i in cls}
        if len(images) != len(cls) or images != anchor:
            bad["bijection"] += 1
        a = cls[0]
        linv, rinv = ~tm.left[a], ~tm.right[a]
        for i in cls:
            if linv * el[tm.tilde[i]] * rinv != el[i]:
                bad["bijection"] += 1

    # multiplicativity on in-class products, vectorized per left factor
    tilde_arr = np.full(len(M), -1, dtype=np.int64)
    for i in members:
        tilde_arr[i] = tm.tilde[i]
    jmask = np.zeros(len(M), dtype=bool)
    jmask[members] = True
    for x in members:
        ys = by_dom.get(int(G.img_mask[x]))
        if not ys:
            continue
        ys = np.asarray(ys)
        xs = np.full(len(ys), x)
        xy = M.mul(xs, ys)
        inside = jmask[xy]
        if not inside.any():
            continue
        lhs = tilde_arr[xy[inside]]
        rhs = M.mul(tilde_arr[xs[inside]], tilde_arr[ys[inside]])
        bad["fundcon"] += int((lhs != rhs).sum())
    return bad


# -- pi / theta constructions -------------------------------------------------------------

def _below_sets(G: GreenStructure, c: int) -> tuple[set, set]:
    """Class ids of A(J) (strictly below) and B(J) (not above-or-equal)."""
    A = set(G.j_below[c]) - {c}
    B = {d for d in range(len(G.j_classes)) if c not in G.j_below[d]}
    return A, B


def _members_of(G: GreenStructure, classes: set) -> list[int]:
    return [i for d in classes for i in G.j_classes[d]]


def _labels_for(M, G, tm: TildeMap, rho: GroupCongruence, collapse: list, labels=None):
    if set(rho.group) != set(tm.anchor):
        raise ValueError("group congruence is not over the anchor H-class")
    if labels is None:
        labels = np.arange(len(M), dtype=np.int64)
    if collapse:
        labels[collapse] = -1
    coset = rho.coset_of()
    base = 10 * len(M) + 1000 * tm.j * len(M)
    ncos = len(rho.cosets)
    for i in tm.members:
        labels[i] = base + int(G.h_of[i]) * ncos + coset[tm.tilde[i]]
    return labels


def build_pi(M, G, tm: TildeMap, rho: GroupCongruence) -> Congruence:
    _, B = _below_sets(G, tm.j)
    return Congruence.from_labels(_labels_for(M, G, tm, rho, _members_of(G, B)))


def build_theta(M, G, tm: TildeMap, rho: GroupCongruence) -> Congruence:
    A, _ = _below_sets(G, tm.j)
    return Congruence.from_labels(_labels_for(M, G, tm, rho, _members_of(G, A)))


def build_theta_union(M, G, tm_o: TildeMap, rho1, tm_e: TildeMap, rho2) -> Congruence:
    A1, _ = _below_sets(G, tm_o.j)
    A2, _ = _below_sets(G, tm_e.j)
    if A1 != A2:
        raise ValueError("theta union needs J-classes with the same A(J)")
    labels = _labels_for(M, G, tm_o, rho1, _members_of(G, A1))
    labels = _labels_for(M, G, tm_e, rho2, [], labels)
    return Congruence.from_labels(labels)


# -- constructive enumeration --------------------------------------------------------------

def _anchor_h(M, G, c) -> list[int]:
    eps = identity(M.n, _anchor_set(G, c))
    return G.H[G.h_of[M.index[eps]]]


def enumerate_congruences_constructive(M: MonoidSet, G: GreenStructure | None = None) -> dict:
    """Map partition key -> (Congruence, CongruenceSpec) for every listed family."""
    _kind_of(M)
    G = G or green_classes(M)
    N = len(M)
    out: dict = {}

    def add(cong: Congruence, spec: CongruenceSpec):
        if not cong.is_compatible(M):
            raise AssertionError(f"{spec} is not compatible with multiplication")
        out.setdefault(cong.key, (cong, spec))

    add(Congruence.universal(N), CongruenceSpec("universal"))
    split = [c for c in range(len(G.j_classes)) if G.j_tag[c] in ("o", "e")]
    for c in range(len(G.j_classes)):
        if G.j_rank[c] == 0 or c in split:
            continue
        tm = tilde_map(M, G, c)
        for rho in group_congruences(M, _anchor_h(M, G, c)):
            add(build_pi(M, G, tm, rho), CongruenceSpec("pi", (G.j_name(c), rho.label)))
    if split:
        co = next(c for c in split if G.j_tag[c] == "o")
        ce = next(c for c in split if G.j_tag[c] == "e")
        tm_o, tm_e = tilde_map(M, G, co), tilde_map(M, G, ce)
        rhos_o = group_congruences(M, _anchor_h(M, G, co))
        rhos_e = group_congruences(M, _anchor_h(M, G, ce))
        for r1 in rhos_o:
            add(build_pi(M, G, tm_o, r1), CongruenceSpec("pi", (G.j_name(co), r1.label)))
        for r2 in rhos_e:
            add(build_pi(M, G, tm_e, r2), CongruenceSpec("pi", (G.j_name(ce), r2.label)))
        for r1, r2 in itertools.product(rhos_o, rhos_e):
            add(build_theta_union(M, G, tm_o, r1, tm_e, r2),
                CongruenceSpec("thetaUnion", (f"{G.j_name(co)}:{r1.label}", f"{G.j_name(ce)}:{r2.label}")))
    ident = Congruence.identity(N)
    if ident.key in out:
        out[ident.key] = (ident, CongruenceSpec("identity"))
    return out


# -- brute-force oracle -----------------------------------------------------------------------

def principal_congruence(M: MonoidSet, a: int, b: int) -> Congruence:
    R, L = M.right_table().astype(np.int64), M.left_table().astype(np.int64)
    pa = np.array([a], dtype=np.int64)
    pb = np.array([b], dtype=np.int64)
    return Congruence(_kernels.congruence_from_pairs(R, L, pa, pb))


def join(M: MonoidSet, x: Congruence, y: Congruence) -> Congruence:
    R, L = M.right_table().astype(np.int64), M.left_table().astype(np.int64)
    return Congruence(_kernels.join_roots(R, L, x.roots, y.roots))


def congruence_lattice_oracle(M: MonoidSet, cap: int = ORACLE_CAP) -> list[Congruence]:
    """Every congruence of M: principal ones by pair closure, then joins."""
    N = len(M)
    if N > cap:
        raise ResourceCapError(f"oracle is capped at |M| <= {cap}, got {N}")
    R, L = M.right_table().astype(np.int64), M.left_table().astype(np.int64)
    ia, ib = np.triu_indices(N, k=1)
    ia, ib = ia.astype(np.int64), ib.astype(np.int64)
    h1, h2 = _kernels.principal_fingerprints(R, L, ia, ib)
    fp = np.stack([h1, h2], axis=1)
    _, first = np.unique(fp, axis=0, return_index=True)
    principal = {}
    for s in sorted(first.tolist()):
        cong = Congruence(_kernels.congruence_from_pairs(R, L, ia[s:s + 1], ib[s:s + 1]))
        principal[cong.key] = cong
    found = {Congruence.identity(N).key: Congruence.identity(N)}
    found.update(principal)
    plist = list(principal.values())
    frontier = list(found.values())
    while frontier:
        new = []
        for x in frontier:
            for p in plist:
                j = Congruence(_kernels.join_roots(R, L, x.roots, p.roots))
                if j.key not in found:
                    found[j.key] = j
                    new.append(j)
        frontier = new
    return sorted(found.values(), key=lambda c: (-c.block_count, c.key))


def covering_pairs(congs: list[Congruence]) -> list[tuple[int, int]]:
    """(lower, upper) index pairs of the inclusion order's covering relation."""
    n = len(congs)
    leq = [[i != j and congs[i].refines(congs[j]) for j in range(n)] for i in range(n)]
    out = []
    for i in range(n):
        for j in range(n):
            if leq[i][j] and not any(leq[i][k] and leq[k][j] for k in range(n)):
                out.append((i, j))
    return out


def lattice_dot(congs: list[Congruence], names: dict | None = None, title: str = "Con") -> str:
    names = names or {}
    lines = [f'digraph "{title}" {{', "  rankdir=BT;"]
    for i, c in enumerate(congs):
        lines.append(f'  c{i} [label="{names.get(c.key, "anon")} / {c.block_count}"];')
    for lo, hi in covering_pairs(congs):
        lines.append(f"  c{lo} -> c{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- supporting lemmas ----------------------------------------------------------------------------

def pori_counterexamples(n: int) -> list:
    """H-related distinct pairs in PORI_n (rank >= 2) where neither
    one-point restriction separates their images."""
    from .engine import enumerate_kind

    P = enumerate_kind(MonoidKind.PORIN, n)
    G_by_h: dict = {}
    for a in P:
        if a.rank >= 2:
            G_by_h.setdefault((a.dom, a.img), []).append(a)
    bad = []
    for (dom, _), cls in G_by_h.items():
        e_min = identity(n, dom[1:])
        e_max = identity(n, dom[:-1])
        for a, b in itertools.combinations(cls, 2):
            if (e_min * a).img == (e_min * b).img and (e_max * a).img == (e_max * b).img:
                bad.append((a, b))
    return bad


def dihedral_counterexamples(n: int) -> list:
    """Non-identity dihedral permutations fixing both sets in a listed pair."""
    if n < 5:
        raise ValueError("the statement needs n >= 5")
    g, h = cycle_g(n), reflection_h(n)
    group = {power(g, k) for k in range(n)} | {h * power(g, k) for k in range(n)}
    full = set(range(1, n + 1))
    bad = []
    for s in group:
        if s == identity(n):
            continue

        def fixes(i):
            return set((identity(n, full - {i}) * s).img) == full - {i}

        if fixes(1) and fixes(3):
            bad.append((s, (1, 3)))
        if fixes(2) and fixes(n):
            bad.append((s, (2, n)))
    return bad


def rotation_fix_counterexamples(n: int) -> list:
    """(i, k) where Im(id_{all but i} g^k) = all but i fails to match k == 0."""
    bad = []
    for i in range(1, n + 1):
        rest = set(range(1, n + 1)) - {i}
        for k in range(n):
            moved = {(x - 1 + k) % n + 1 for x in rest}
            if (moved == rest) != (k == 0):
                bad.append((i, k))
    return bad
