"""Orientation predicates, the hat normalization and membership tests."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .pperm import (
    PartialPerm,
    RankError,
    completion,
    gaps,
    identity,
    order_preserving,
    power,
    sign,
)


class MonoidKind(enum.Enum):
    IN = "in"
    AIN = "ai"
    POIN = "poi"
    AON = "ao"
    POPIN = "popi"
    PORIN = "pori"
    AOPN = "aop"
    AORN = "aor"

    @classmethod
    def parse(cls, text) -> "MonoidKind":
        if isinstance(text, cls):
            return text
        return cls(str(text).lower())


@dataclass(frozen=True)
class OrientFlags:
    order_preserving: bool
    order_reversing: bool
    orientation_preserving: bool
    orientation_reversing: bool

    @property
    def oriented(self) -> bool:
        return self.orientation_preserving or self.orientation_reversing


def orient_flags(a: PartialPerm) -> OrientFlags:
    seq = a.img_seq
    t = len(seq)
    desc = sum(1 for x, y in zip(seq, seq[1:]) if x > y)
    asc = max(t - 1, 0) - desc
    cdesc, casc = desc, asc
    # wrap-around pair only exists for t >= 2
    if t >= 2:
        if seq[-1] > seq[0]:
            cdesc += 1
        else:
            casc += 1
    return OrientFlags(desc == 0, asc == 0, cdesc <= 1, casc <= 1)


# -- fixed permutations -------------------------------------------------------

def cycle_g(n: int) -> PartialPerm:
    """The n-cycle (1 2 ... n)."""
    return PartialPerm._raw((0,) + tuple(range(2, n + 1)) + (1,))


def reflection_h(n: int) -> PartialPerm:
    """The order-reversing permutation x -> n + 1 - x."""
    return PartialPerm._raw((0,) + tuple(range(n, 0, -1)))


# -- membership ---------------------------------------------------------------

def member_oracle(a: PartialPerm, kind: MonoidKind) -> bool:
    """Definition-level membership: slow but independent of the structure theory."""
    kind = MonoidKind.parse(kind)
    if kind is MonoidKind.IN:
        return True
    if kind is MonoidKind.AIN:
        return _in_alternating(a)
    f = orient_flags(a)
    if kind is MonoidKind.POIN:
        return f.order_preserving
    if kind is MonoidKind.POPIN:
        return f.orientation_preserving
    if kind is MonoidKind.PORIN:
        return f.oriented
    if kind is MonoidKind.AON:
        return f.order_preserving and _in_alternating(a)
    if kind is MonoidKind.AOPN:
        return f.orientation_preserving and _in_alternating(a)
    if kind is MonoidKind.AORN:
        return f.oriented and _in_alternating(a)
    raise ValueError(f"unknown kind {kind}")


def _in_alternating(a: PartialPerm) -> bool:
    r, n = a.rank, a.n
    if r <= n - 2:
        return True
    if r == n - 1:
        return sign(completion(a)) == 1
    return sign(a) == 1


def flank_maps(a: PartialPerm) -> tuple[PartialPerm, PartialPerm]:
    """Order-preserving maps ``{1..n-1} -> Dom(a)`` and ``Im(a) -> {1..n-1}``."""
    n = a.n
    if a.rank != n - 1:
        raise RankError(f"flank maps need rank n-1 = {n - 1}, got {a.rank}")
    base = range(1, n)
    return order_preserving(n, base, a.dom), order_preserving(n, a.img, base)


def hat(a: PartialPerm) -> PartialPerm:
    left, right = flank_maps(a)
    return left * a * right


def _one_hat(a: PartialPerm) -> int:
    # 1 under a_L is min Dom(a); a_R sends y to its position in sorted Im(a)
    y = a(a.dom[0])
    return a.img.index(y) + 1


def member_fast(a: PartialPerm, kind: MonoidKind) -> bool:
    """Membership in AOP_n / AOR_n through the gap-parity characterizations."""
    kind = MonoidKind.parse(kind)
    if kind not in (MonoidKind.AOPN, MonoidKind.AORN):
        raise ValueError("member_fast only covers aop and aor")
    f = orient_flags(a)
    if kind is MonoidKind.AOPN and not f.orientation_preserving:
        return False
    if not f.oriented:
        return False
    n, r = a.n, a.rank
    if r <= n - 2:
        return True
    if r == n:
        if f.orientation_preserving:
            # a = g^k with k = 1a - 1
            return n % 2 == 1 or (a(1) - 1) % 2 == 0
        # a = h g^k with k = 1a mod n
        k = a(1) % n
        return {0: k % 2 == 0, 1: True, 2: k % 2 == 1, 3: False}[n % 4]
    d, i = gaps(a)
    same = (d - i) % 2 == 0
    if f.orientation_preserving:
        if n % 2 == 0:
            return same
        return same == (_one_hat(a) % 2 == 1)
    m = n % 4
    if m == 0:
        return not same
    if m == 2:
        return same
    if m == 1:
        return same == (_one_hat(a) % 2 == 0)
    return same == (_one_hat(a) % 2 == 1)


def unit_group(kind: MonoidKind, n: int) -> set[PartialPerm]:
    kind = MonoidKind.parse(kind)
    g, h = cycle_g(n), reflection_h(n)
    rotations = [power(g, k) for k in range(n)]
    reflections = [h * r for r in rotations]
    if kind is MonoidKind.POPIN:
        return set(rotations)
    if kind is MonoidKind.PORIN:
        return set(rotations) | set(reflections)
    even_rot = set(rotations[::2]) if n % 2 == 0 else set(rotations)
    if kind is MonoidKind.AOPN:
        return even_rot
    if kind is MonoidKind.AORN:
        m = n % 4
        if m == 0:
            return even_rot | set(reflections[0::2])
        if m == 1:
            return set(rotations) | set(reflections)
        if m == 2:
            return even_rot | set(reflections[1::2])
        return set(rotations)
    if kind in (MonoidKind.POIN, MonoidKind.AON):
        return {identity(n)}
    raise ValueError(f"unit group of {kind.value} is not tabulated")
