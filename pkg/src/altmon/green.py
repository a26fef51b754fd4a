"""Green's relations, the J-class poset and group H-class identification."""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .engine import MonoidSet
from .pperm import PartialPerm, gaps


def _masks(M: MonoidSet) -> tuple[np.ndarray, np.ndarray]:
    T = M.table.astype(np.int64)
    bits = np.int64(1) << np.arange(M.n, dtype=np.int64)
    dom = ((T[:, 1:] > 0) * bits).sum(axis=1)
    img_bits = np.where(T[:, 1:] > 0, np.int64(1) << np.maximum(T[:, 1:] - 1, 0), 0)
    img = img_bits.sum(axis=1)
    return dom, img


def _partition(keys) -> list[list[int]]:
    groups = defaultdict(list)
    for i, k in enumerate(keys):
        groups[k].append(i)
    return sorted(groups.values(), key=lambda g: g[0])


@dataclass(frozen=True)
class GroupType:
    tag: str  # trivial | cyclic | dihedral | klein | other
    order: int

    def __str__(self) -> str:
        if self.tag in ("trivial", "klein"):
            return self.tag
        return f"{self.tag}({self.order})"


@dataclass
class GreenStructure:
    n: int
    size: int
    dom_mask: np.ndarray
    img_mask: np.ndarray
    L: list[list[int]]
    R: list[list[int]]
    H: list[list[int]]
    j_classes: list[list[int]]
    j_of: np.ndarray
    j_rank: list[int]
    j_tag: list[str]
    j_below: list[frozenset]  # classes <= c, including c
    hasse: list[tuple[int, int]]  # (lower, upper) covering pairs
    h_of: np.ndarray = field(repr=False)

    def j_name(self, c: int) -> str:
        return f"J{self.j_rank[c]}{self.j_tag[c]}"

    def j_leq(self, a: int, b: int) -> bool:
        """Whether J-class ``a`` lies below or equals J-class ``b``."""
        return a in self.j_below[b]

    def stats(self, c: int) -> dict:
        members = self.j_classes[c]
        n_l = len({int(self.img_mask[i]) for i in members})
        n_r = len({int(self.dom_mask[i]) for i in members})
        sizes = {len(self.H[self.h_of[i]]) for i in members}
        return {
            "rank": self.j_rank[c],
            "tag": self.j_tag[c],
            "size": len(members),
            "n_L": n_l,
            "n_R": n_r,
            "h_size": sizes.pop() if len(sizes) == 1 else sorted(sizes),
        }

    def unit_class(self) -> int:
        return max(range(len(self.j_classes)), key=lambda c: self.j_rank[c])

    def maximal_nonunit_classes(self) -> list[int]:
        top = self.unit_class()
        return sorted(lo for lo, hi in self.hasse if hi == top)


def green_classes(M: MonoidSet) -> GreenStructure:
    """L, R, H from images/domains; J from two-sided reachability in M."""
    n, N = M.n, len(M)
    dom, img = _masks(M)
    L = _partition(img.tolist())
    R = _partition(dom.tolist())
    H = _partition(list(zip(dom.tolist(), img.tolist())))
    h_of = np.empty(N, dtype=np.int64)
    for hid, cls in enumerate(H):
        h_of[cls] = hid

    # edge x -> y whenever y = x s or y = s x for a generator s
    Rt, Lt = M.right_table(), M.left_table()
    src = np.repeat(np.arange(N), Rt.shape[1])
    tgt = np.concatenate([Rt.ravel(), Lt.ravel()])
    src = np.concatenate([src, src])
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, tgt)), shape=(N, N)).tocsr()
    ncomp, comp = connected_components(graph, directed=True, connection="strong")

    dag = nx.DiGraph()
    dag.add_nodes_from(range(ncomp))
    cs, ct = comp[src], comp[tgt]
    keep = cs != ct
    # upper -> lower
    dag.add_edges_from(set(zip(cs[keep].tolist(), ct[keep].tolist())))

    members = [[] for _ in range(ncomp)]
    for i, c in enumerate(comp.tolist()):
        members[c].append(i)
    rank_of = [int(M.ranks[m[0]]) for m in members]
    for c, m in enumerate(members):
        if len({int(M.ranks[i]) for i in m}) != 1:
            raise AssertionError("J-class mixes ranks")
    tag_of = [""] * ncomp
    by_rank = defaultdict(list)
    for c in range(ncomp):
        by_rank[rank_of[c]].append(c)
    for r, cs_ in by_rank.items():
        if len(cs_) > 1 and r == n - 1:
            for c in cs_:
                parities = {gaps(M.elements[i])[0] % 2 for i in members[c]}
                if len(parities) == 1:
                    tag_of[c] = "o" if parities.pop() else "e"

    order = sorted(range(ncomp), key=lambda c: (rank_of[c], tag_of[c], members[c][0]))
    renum = {old: new for new, old in enumerate(order)}
    j_classes = [members[c] for c in order]
    j_of = np.array([renum[c] for c in comp.tolist()], dtype=np.int64)
    dag = nx.relabel_nodes(dag, renum)
    below = []
    for c in range(ncomp):
        below.append(frozenset(nx.descendants(dag, c)) | {c})
    red = nx.transitive_reduction(dag)
    hasse = sorted((lo, hi) for hi, lo in red.edges())

    return GreenStructure(
        n=n,
        size=N,
        dom_mask=dom,
        img_mask=img,
        L=L,
        R=R,
        H=H,
        j_classes=j_classes,
        j_of=j_of,
        j_rank=[rank_of[c] for c in order],
        j_tag=[tag_of[c] for c in order],
        j_below=below,
        hasse=hasse,
        h_of=h_of,
    )


# -- group H-classes ----------------------------------------------------------------

def h_class_of(M: MonoidSet, G: GreenStructure, a: PartialPerm) -> list[int]:
    return G.H[G.h_of[M.index[a]]]


def identify_group(elems: list[PartialPerm]) -> GroupType:
    """Abstract type of a finite group given as partial permutations."""
    idem = [x for x in elems if x.is_idempotent()]
    if len(idem) != 1:
        raise ValueError("not a group: needs exactly one idempotent")
    e = idem[0]
    N = len(elems)
    pool = set(elems)
    if any(x * y not in pool for x in elems for y in elems):
        raise ValueError("not a group: products leave the set")
    if any(e * x != x or x * e != x for x in elems):
        raise ValueError("not a group: the idempotent is not an identity")
    if N == 1:
        return GroupType("trivial", 1)

    def order(x):
        k, y = 1, x
        while y != e:
            y = y * x
            k += 1
            if k > N:
                raise ValueError("not a group: element of unbounded order")
        return k

    orders = {x: order(x) for x in elems}
    if max(orders.values()) == N:
        return GroupType("cyclic", N)
    if N == 4:
        return GroupType("klein", 4)
    if N % 2 == 0:
        m = N // 2
        for s, o in orders.items():
            if o != m:
                continue
            rot = [e]
            for _ in range(m - 1):
                rot.append(rot[-1] * s)
            s_inv = rot[-1]
            outside = [x for x in elems if x not in set(rot)]
            if all(orders[t] == 2 for t in outside) and all(t * s * t == s_inv for t in outside):
                return GroupType("dihedral", N)
    return GroupType("other", N)


def h_group_type(M: MonoidSet, G: GreenStructure, h_class_id: int) -> GroupType:
    elems = [M.elements[i] for i in G.H[h_class_id]]
    if not any(x.is_idempotent() for x in elems):
        raise ValueError("H-class has no idempotent, so it is not a group")
    return identify_group(elems)


def idempotent_h_class(M: MonoidSet, G: GreenStructure, c: int) -> int:
    """Some group H-class inside J-class ``c`` (the least idempotent's)."""
    for i in G.j_classes[c]:
        if M.elements[i].is_idempotent():
            return int(G.h_of[i])
    raise ValueError("J-class contains no idempotent")


# -- output ---------------------------------------------------------------------------

def j_poset_dot(G: GreenStructure, title: str = "J") -> str:
    lines = [f'digraph "{title}" {{', "  rankdir=BT;", "  node [shape=box];"]
    for c in range(len(G.j_classes)):
        lines.append(f'  {G.j_name(c)} [label="{G.j_name(c)} ({len(G.j_classes[c])})"];')
    for lo, hi in G.hasse:
        lines.append(f"  {G.j_name(lo)} -> {G.j_name(hi)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def summary(M: MonoidSet, G: GreenStructure) -> dict:
    rows = []
    for c in range(len(G.j_classes)):
        st = G.stats(c)
        st["group_type"] = str(h_group_type(M, G, idempotent_h_class(M, G, c)))
        rows.append(st)
    edges = [[G.j_name(lo), G.j_name(hi)] for lo, hi in G.hasse]
    return {"j_classes": rows, "hasse_edges": edges}


def summary_json(M: MonoidSet, G: GreenStructure) -> str:
    return json.dumps(summary(M, G), sort_keys=True)
