"""Materializing monoids: generator closure, filtered enumeration, ideals."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import comb, factorial
from typing import Iterable, Sequence

import numpy as np

from .classify import (
    MonoidKind,
    cycle_g,
    member_fast,
    member_oracle,
    orient_flags,
)
from .pperm import PartialPerm, check_n, identity, power

ENUM_CAP = 8


class ResourceCapError(RuntimeError):
    pass


class MonoidSet:
    """A finished, indexed list of monoid elements.

    ``source`` is the :class:`MonoidKind` the set was enumerated from, or the
    tuple of generators it was closed from.
    """

    def __init__(self, n: int, elements: Sequence[PartialPerm], source, gens=None):
        self.n = n
        self.elements = list(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate elements")
        self.source = source
        self._gens = None if gens is None else [self.index[s] for s in gens]
        self.table = np.array([e.images for e in self.elements], dtype=np.int16)
        self.ranks = (self.table[:, 1:] > 0).sum(axis=1)
        self._keys = None
        self._right = self._left = None

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, a) -> bool:
        return a in self.index

    def __getitem__(self, i: int) -> PartialPerm:
        return self.elements[i]

    @property
    def kind(self) -> MonoidKind | None:
        return self.source if isinstance(self.source, MonoidKind) else None

    @property
    def label(self) -> str:
        if self.kind is not None:
            return f"{self.kind.value}{self.n}"
        return f"<{len(self.source)} gens>{self.n}"

    @property
    def identity_index(self) -> int:
        return self.index[identity(self.n)]

    # -- vectorized products ------------------------------------------------
    def _encode(self, rows: np.ndarray) -> np.ndarray:
        if self.n > 15:
            raise ResourceCapError("vectorized lookup supports n <= 15")
        weights = (self.n + 1) ** np.arange(self.n, dtype=np.int64)
        return rows[:, 1:].astype(np.int64) @ weights

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Indices of the maps given as image rows; -1 for maps outside the set."""
        if self._keys is None:
            keys = self._encode(self.table)
            self._order = np.argsort(keys)
            self._keys = keys[self._order]
        q = self._encode(np.asarray(rows))
        pos = np.searchsorted(self._keys, q)
        pos = np.minimum(pos, len(self._keys) - 1)
        found = self._keys[pos] == q
        return np.where(found, self._order[pos], -1)

    def products(self, xs, ys) -> np.ndarray:
        """Row images of ``x*y`` for paired index arrays."""
        xs = np.asarray(xs, dtype=np.intp)
        ys = np.asarray(ys, dtype=np.intp)
        return np.take_along_axis(self.table[ys], self.table[xs].astype(np.intp), axis=1)

    def mul(self, xs, ys) -> np.ndarray:
        return self.lookup(self.products(xs, ys))

    # -- generators and Cayley tables ----------------------------------------
    def generators(self) -> list[int]:
        """Indices of a generating set; greedy by decreasing rank when unknown."""
        if self._gens is None:
            self._gens = greedy_generators(self)
        return list(self._gens)

    def right_table(self) -> np.ndarray:
        """``R[x, j]`` is the index of ``x * gen_j``."""
        if self._right is None:
            self._right = self._cayley(right=True)
        return self._right

    def left_table(self) -> np.ndarray:
        if self._left is None:
            self._left = self._cayley(right=False)
        return self._left

    def _cayley(self, right: bool) -> np.ndarray:
        gens = self.generators()
        out = np.empty((len(self), len(gens)), dtype=np.int32)
        allx = np.arange(len(self))
        for j, s in enumerate(gens):
            col = np.full(len(self), s)
            out[:, j] = self.mul(allx, col) if right else self.mul(col, allx)
        if (out < 0).any():
            raise ValueError(f"{self.label} is not closed under multiplication")
        return out

    def is_closed(self) -> bool:
        try:
            self.right_table()
            self.left_table()
        except ValueError:
            return False
        return True

    def is_inverse_closed(self) -> bool:
        return all((~e) in self.index for e in self.elements)

    def as_set(self) -> frozenset:
        return frozenset(self.elements)


def greedy_generators(M: MonoidSet) -> list[int]:
    """Scan elements by decreasing rank, keeping each one not yet generated."""
    n = M.n
    ident = identity(n)
    closed = {ident}
    frontier = [ident]
    gens: list[PartialPerm] = []
    order = sorted(range(len(M)), key=lambda i: (-int(M.ranks[i]), M.elements[i].images))
    for i in order:
        a = M.elements[i]
        if a in closed:
            continue
        gens.append(a)
        # new generator times every known element, then BFS over all gens
        frontier = [x * a for x in closed]
        frontier = [y for y in frontier if y not in closed]
        closed.update(frontier)
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = x * s
                    if y not in closed:
                        closed.add(y)
                        nxt.append(y)
            frontier = nxt
        if len(closed) == len(M):
            break
    if len(closed) != len(M):
        raise ValueError("elements generate more or less than the set")
    return [M.index[s] for s in gens]


# -- closure ------------------------------------------------------------------

def closure(n: int, generators: Iterable[PartialPerm], limit: int | None = None) -> MonoidSet:
    """Submonoid generated by ``generators``; layers in BFS order, sorted within.

    With ``limit`` set, raises :class:`ResourceCapError` once the closure grows
    past ``limit`` elements.
    """
    gens = list(dict.fromkeys(generators))
    for s in gens:
        if s.n != n:
            raise ValueError(f"generator {s} is not on n={n}")
    ident = identity(n)
    seen = {ident}
    order = [ident]
    layer = [ident]
    while layer:
        nxt = set()
        for x in layer:
            for s in gens:
                y = x * s
                if y not in seen:
                    seen.add(y)
                    nxt.add(y)
        layer = sorted(nxt)
        order.extend(layer)
        if limit is not None and len(order) > limit:
            raise ResourceCapError(f"closure exceeded {limit} elements")
    return MonoidSet(n, order, source=tuple(gens), gens=[s for s in gens] or None)


def closure_set(n: int, generators: Iterable[PartialPerm], limit: int | None = None) -> set:
    """Plain set version of :func:`closure`; returns early once past ``limit``."""
    gens = list(dict.fromkeys(generators))
    seen = {identity(n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = x * s
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if limit is not None and len(seen) > limit:
            return seen
        frontier = nxt
    return seen


# -- enumeration ----------------------------------------------------------------

def _candidates(kind: MonoidKind, n: int):
    pts = range(1, n + 1)
    yield PartialPerm._raw((0,) * (n + 1))
    for k in range(1, n + 1):
        subsets = list(itertools.combinations(pts, k))
        for A in subsets:
            for B in subsets:
                if kind in (MonoidKind.POIN, MonoidKind.AON):
                    seqs = [B]
                elif kind in (MonoidKind.POPIN, MonoidKind.AOPN):
                    seqs = [B[r:] + B[:r] for r in range(k)]
                elif kind in (MonoidKind.PORIN, MonoidKind.AORN):
                    rev = B[::-1]
                    seqs = {B[r:] + B[:r] for r in range(k)}
                    seqs |= {rev[r:] + rev[:r] for r in range(k)}
                    seqs = sorted(seqs)
                else:
                    seqs = itertools.permutations(B)
                for seq in seqs:
                    t = [0] * (n + 1)
                    for x, v in zip(A, seq):
                        t[x] = v
                    yield PartialPerm._raw(tuple(t))


def enumerate_kind(kind, n: int, method: str = "fast", unsafe_cap: bool = False) -> MonoidSet:
    """All elements of ``kind`` on n points, sorted canonically.

    ``method="fast"`` generates oriented candidates by rotation and filters with
    :func:`member_fast`; ``method="oracle"`` scans every partial permutation
    and filters with :func:`member_oracle`.
    """
    kind = MonoidKind.parse(kind)
    check_n(n)
    if n > ENUM_CAP and not unsafe_cap:
        raise ResourceCapError(f"enumeration is capped at n <= {ENUM_CAP}")
    if method == "oracle":
        keep = [a for a in _candidates(MonoidKind.IN, n) if member_oracle(a, kind)]
    elif method == "fast":
        if kind in (MonoidKind.AOPN, MonoidKind.AORN):
            keep = [a for a in _candidates(kind, n) if member_fast(a, kind)]
        elif kind in (MonoidKind.AIN, MonoidKind.AON):
            keep = [a for a in _candidates(kind, n) if member_oracle(a, kind)]
        else:
            keep = list(_candidates(kind, n))
    else:
        raise ValueError(f"unknown method {method!r}")
    keep.sort()
    return MonoidSet(n, keep, source=kind)


# -- closed forms -------------------------------------------------------------------

def cardinality_formula(kind, n: int) -> int:
    kind = MonoidKind.parse(kind)
    c = comb(2 * n, n)
    if kind is MonoidKind.IN:
        return sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))
    if kind is MonoidKind.AIN:
        return (factorial(n) // 2 + factorial(n) * n // 2
                + sum(comb(n, k) ** 2 * factorial(k) for k in range(n - 1)))
    if kind is MonoidKind.POPIN:
        return 1 + n * c // 2
    if kind is MonoidKind.PORIN:
        return 1 + n * c - n * n * (n * n - 2 * n + 3) // 2
    if kind is MonoidKind.AOPN:
        if n % 2:
            return n * c // 2 - n * n * (n - 1) // 2 + 1
        return n * c // 2 - (n * n * (n - 1) + n) // 2 + 1
    if kind is MonoidKind.AORN:
        if n == 3:
            # AOR_3 coincides with AOP_3; the closed form below needs n >= 4
            return cardinality_formula(MonoidKind.AOPN, 3)
        value = 1 + n * c - n * n * (n * n + 1) // 2
        return value if n % 4 == 1 else value - n
    raise ValueError(f"no closed form for |{kind.value}_n|")


def class_size_formula(kind, n: int, k: int) -> int:
    """Number of rank-k elements of POPI_n or PORI_n."""
    kind = MonoidKind.parse(kind)
    if k == 0:
        return 1
    if kind is MonoidKind.POPIN:
        return k * comb(n, k) ** 2
    if kind is MonoidKind.PORIN:
        if k == 1:
            return n * n
        if k == 2:
            return 2 * comb(n, 2) ** 2
        return 2 * k * comb(n, k) ** 2
    raise ValueError(f"no rank-class formula for {kind.value}")


# -- ideals ---------------------------------------------------------------------

@dataclass(frozen=True)
class Ideal:
    members: frozenset
    label: str

    def __len__(self) -> int:
        return len(self.members)

    def mask(self, size: int) -> np.ndarray:
        m = np.zeros(size, dtype=bool)
        m[list(self.members)] = True
        return m


def is_ideal(M: MonoidSet, members) -> bool:
    members = np.asarray(sorted(members), dtype=np.intp)
    if len(members) == 0:
        return False
    mask = np.zeros(len(M), dtype=bool)
    mask[members] = True
    R, L = M.right_table(), M.left_table()
    return bool(mask[R[members]].all() and mask[L[members]].all())


def ideals(M: MonoidSet, green=None) -> list[Ideal]:
    """All nonempty ideals of M, as unions of down-closed sets of J-classes."""
    from .green import green_classes

    G = green if green is not None else green_classes(M)
    nj = len(G.j_classes)
    if nj > 20:
        raise ResourceCapError("too many J-classes for down-set enumeration")
    below = G.j_below  # below[c] = set of classes <= c
    out = []
    for bits in range(1, 1 << nj):
        chosen = {c for c in range(nj) if bits >> c & 1}
        if all(below[c] <= chosen for c in chosen):
            members = frozenset(i for c in chosen for i in G.j_classes[c])
            out.append(Ideal(members, _ideal_label(G, chosen)))
    out.sort(key=lambda I: (len(I), I.label))
    for I in out:
        if not is_ideal(M, I.members):
            raise AssertionError(f"{I.label} is not absorbing")
    return out


def _ideal_label(G, chosen: set) -> str:
    n = G.n
    ranks = G.j_rank
    top = max(ranks[c] for c in chosen)
    full = {c for c in range(len(ranks)) if ranks[c] <= top}
    if chosen == full:
        return f"I{top}"
    extra = [c for c in chosen if ranks[c] == top]
    if top == n - 1 and len(extra) == 1 and G.j_tag[extra[0]]:
        return f"I{n - 1}{G.j_tag[extra[0]]}"
    return "I{" + ",".join(G.j_name(c) for c in sorted(chosen)) + "}"


# -- factorization ------------------------------------------------------------------

def factor_gib(a: PartialPerm) -> tuple[int, PartialPerm]:
    """Least ``i`` and order-preserving ``b`` with ``a = g^i b``."""
    if not orient_flags(a).orientation_preserving:
        raise ValueError(f"{a} is not orientation-preserving")
    n = a.n
    g = cycle_g(n)
    for i in range(n):
        b = power(g, (n - i) % n) * a
        if orient_flags(b).order_preserving:
            return i, b
    raise AssertionError("no factorization found")


# -- export ---------------------------------------------------------------------------

def write_jsonl(M: MonoidSet, fp, kind_name: str | None = None) -> None:
    name = kind_name or (M.kind.value if M.kind else "closure")
    fp.write(json.dumps({"kind": name, "n": M.n, "count": len(M)}) + "\n")
    for e in M.elements:
        fp.write(json.dumps(e.to_json()) + "\n")
