"""Partial permutations of the chain 1 < 2 < ... < n.

Maps act on the right and products read left to right: ``x(ab) = (xa)b``.
A map is stored as a tuple ``t`` of length ``n + 1`` with ``t[0] == 0`` and
``t[x] == 0`` when ``x`` is outside the domain, so composing is a single
indexing pass: ``(a * b)[x] == b[a[x]]``.
"""
from __future__ import annotations

import re
from typing import Iterable, Sequence

MAX_N = 32


class SizeMismatchError(ValueError):
    pass


class RankError(ValueError):
    pass


class DomainConventionError(ValueError):
    pass


class LiteralParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def check_n(n: int) -> int:
    if not isinstance(n, int) or not 3 <= n <= MAX_N:
        raise ValueError(f"chain size must satisfy 3 <= n <= {MAX_N}, got {n!r}")
    return n


class PartialPerm:
    """An injective partial map of {1..n}; immutable and hashable."""

    __slots__ = ("_t", "_hash")

    def __init__(self, images: Sequence[int]):
        t = tuple(images)
        if not t or t[0] != 0:
            raise ValueError("image tuple must start with the 0 sentinel")
        n = len(t) - 1
        seen = set()
        for v in t[1:]:
            if v:
                if not 1 <= v <= n:
                    raise ValueError(f"image {v} out of range 1..{n}")
                if v in seen:
                    raise ValueError(f"image {v} repeated; map is not injective")
                seen.add(v)
        self._t = t
        self._hash = hash(t)

    @classmethod
    def _raw(cls, t: tuple) -> "PartialPerm":
        # trusted constructor: skips validation
        obj = object.__new__(cls)
        obj._t = t
        obj._hash = hash(t)
        return obj

    # -- basic data -------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self._t) - 1

    @property
    def images(self) -> tuple:
        """The internal image tuple (index 0 is the sentinel)."""
        return self._t

    @property
    def dom(self) -> tuple:
        return tuple(x for x in range(1, len(self._t)) if self._t[x])

    @property
    def img_seq(self) -> tuple:
        """Images listed in increasing domain order."""
        return tuple(filter(None, self._t[1:]))

    @property
    def img(self) -> tuple:
        return tuple(sorted(self.img_seq))

    @property
    def dom_mask(self) -> int:
        m = 0
        for x in range(1, len(self._t)):
            if self._t[x]:
                m |= 1 << (x - 1)
        return m

    @property
    def img_mask(self) -> int:
        m = 0
        for v in self._t[1:]:
            if v:
                m |= 1 << (v - 1)
        return m

    @property
    def rank(self) -> int:
        return len(self._t) - 1 - self._t[1:].count(0)

    def is_total(self) -> bool:
        return all(self._t[1:])

    def is_idempotent(self) -> bool:
        return all(v == 0 or v == x for x, v in enumerate(self._t))

    def __call__(self, x: int) -> int:
        """Image of ``x``, or 0 when ``x`` is not in the domain."""
        return self._t[x]

    def items(self):
        return [(x, v) for x, v in enumerate(self._t) if v]

    # -- algebra ----------------------------------------------------------
    def __mul__(self, other: "PartialPerm") -> "PartialPerm":
        return compose(self, other)

    def __invert__(self) -> "PartialPerm":
        return inverse(self)

    def __pow__(self, k: int) -> "PartialPerm":
        return power(self, k)

    def __eq__(self, other) -> bool:
        return isinstance(other, PartialPerm) and self._t == other._t

    def __lt__(self, other: "PartialPerm") -> bool:
        return self._t < other._t

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"PartialPerm(n={self.n}, {format_literal(self)!r})"

    def __str__(self) -> str:
        return format_literal(self)

    def to_json(self) -> dict:
        return {"n": self.n, "dom": list(self.dom), "img": list(self.img_seq)}


# -- constructors -----------------------------------------------------------

def from_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> PartialPerm:
    t = [0] * (n + 1)
    for x, v in pairs:
        if not 1 <= x <= n:
            raise ValueError(f"domain point {x} out of range 1..{n}")
        if t[x]:
            raise ValueError(f"domain point {x} repeated")
        t[x] = v
    return PartialPerm(t)


def from_dom_img(n: int, dom: Sequence[int], img: Sequence[int]) -> PartialPerm:
    """Map the sorted ``dom`` positionally onto ``img``."""
    dom = sorted(dom)
    if len(dom) != len(img):
        raise ValueError("dom and img must have the same length")
    return from_pairs(n, zip(dom, img))


def from_json(obj: dict) -> PartialPerm:
    return from_dom_img(int(obj["n"]), obj["dom"], obj["img"])


def identity(n: int, on: Iterable[int] | None = None) -> PartialPerm:
    """Full identity, or the partial identity on ``on``."""
    if on is None:
        return PartialPerm._raw(tuple(range(n + 1)))
    on = set(on)
    return PartialPerm(tuple(x if x in on else 0 for x in range(n + 1)))


def empty(n: int) -> PartialPerm:
    return PartialPerm._raw((0,) * (n + 1))


def order_preserving(n: int, src: Iterable[int], dst: Iterable[int]) -> PartialPerm:
    """The unique order-preserving bijection ``src -> dst``."""
    src, dst = sorted(src), sorted(dst)
    if len(src) != len(dst):
        raise ValueError("source and target sets differ in size")
    return from_pairs(n, zip(src, dst))


def from_cycles(n: int, *cycles: Sequence[int]) -> PartialPerm:
    """Total permutation from disjoint cycles, e.g. ``from_cycles(4, (1, 3, 2))``."""
    t = list(range(n + 1))
    for c in cycles:
        for i, x in enumerate(c):
            t[x] = c[(i + 1) % len(c)]
    return PartialPerm(t)


# -- operations -------------------------------------------------------------

def compose(a: PartialPerm, b: PartialPerm) -> PartialPerm:
    """Product ``ab``: first ``a``, then ``b``."""
    at, bt = a._t, b._t
    if len(at) != len(bt):
        raise SizeMismatchError(f"cannot compose maps on n={a.n} and n={b.n}")
    return PartialPerm._raw(tuple([bt[v] for v in at]))


def inverse(a: PartialPerm) -> PartialPerm:
    t = [0] * len(a._t)
    for x, v in enumerate(a._t):
        if v:
            t[v] = x
    return PartialPerm._raw(tuple(t))


def power(a: PartialPerm, k: int) -> PartialPerm:
    if k < 0:
        raise ValueError("negative powers are not supported; use inverse()")
    if k == 0:
        if not a.is_total():
            raise DomainConventionError("power(a, 0) is only defined for total maps")
        return identity(a.n)
    result, base = None, a
    while k:
        if k & 1:
            result = base if result is None else compose(result, base)
        k >>= 1
        if k:
            base = compose(base, base)
    return result


def gaps(a: PartialPerm) -> tuple[int, int]:
    """``(d, i)``: the points missing from the domain and from the image."""
    if a.rank != a.n - 1:
        raise RankError(f"gaps need rank n-1 = {a.n - 1}, got rank {a.rank}")
    t = a._t
    d = next(x for x in range(1, len(t)) if not t[x])
    used = set(t)
    i = next(v for v in range(1, len(t)) if v not in used)
    return d, i


def completion(a: PartialPerm) -> PartialPerm:
    """The unique permutation extending a rank n-1 map."""
    d, i = gaps(a)
    t = list(a._t)
    t[d] = i
    return PartialPerm._raw(tuple(t))


def sign(p: PartialPerm) -> int:
    """+1 for even permutations, -1 for odd ones."""
    if not p.is_total():
        raise RankError("sign is only defined for total permutations")
    t = p._t
    seen = [False] * len(t)
    parity = 0
    for x in range(1, len(t)):
        if not seen[x]:
            length = 0
            y = x
            while not seen[y]:
                seen[y] = True
                y = t[y]
                length += 1
            parity += length - 1
    return -1 if parity % 2 else 1


# -- text encoding ----------------------------------------------------------

_PAIR = re.compile(r"\s*(\d+)\s*->\s*(\d+)\s*")


def format_literal(a: PartialPerm) -> str:
    pairs = a.items()
    if not pairs:
        return "{}"
    return ",".join(f"{x}->{v}" for x, v in pairs)


def parse_literal(text: str, n: int) -> PartialPerm:
    """Parse ``"{}"`` or ``"k->v,k->v,..."`` into a map on {1..n}."""
    if text.strip() == "{}":
        return empty(n)
    t = [0] * (n + 1)
    used = set()
    pos = 0
    for chunk in text.split(","):
        m = _PAIR.fullmatch(chunk)
        if not m:
            raise LiteralParseError(f"expected 'k->v', got {chunk.strip()!r}", pos)
        x, v = int(m.group(1)), int(m.group(2))
        if not 1 <= x <= n:
            raise LiteralParseError(f"domain point {x} out of range 1..{n}", pos + m.start(1))
        if not 1 <= v <= n:
            raise LiteralParseError(f"image point {v} out of range 1..{n}", pos + m.start(2))
        if t[x]:
            raise LiteralParseError(f"duplicate domain point {x}", pos + m.start(1))
        if v in used:
            raise LiteralParseError(f"duplicate image point {v}", pos + m.start(2))
        t[x] = v
        used.add(v)
        pos += len(chunk) + 1
    return PartialPerm._raw(tuple(t))
