"""Elements of the non-discrete groups G_F: a compact head plus an annulus tail.

A :class:`GFElement` acts on ``p^-N Z_p`` by the PL map ``head`` and on each
annulus X_n, ``n >= N``, by the ball permutation ``tail[n]`` of the family's
sub-balls.  Elements are kept with the smallest head level for which this
description exists, so equal elements have equal fields.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .. import perms
from ..exactnum import Ball, vp
from ..perms import Perm
from ..tails import Tail
from .family import FamilySpec, annulus_action
from .plmap import (
    PLMap,
    compose,
    germ_trivial_at as _pl_germ_trivial,
    invert,
    preserves,
    restrict_to,
    supported_in,
)


class GFError(ValueError):
    pass


def core_ball(p: int, level: int) -> Ball:
    """``p**-level Z_p``."""
    return Ball.zp(p, -level)


class GFElement:
    __slots__ = ("family", "level", "head", "tail")

    def __init__(self, family: FamilySpec, head: Optional[PLMap] = None, level: int = 0, tail: Optional[Tail] = None):
        p = family.p
        head = head if head is not None else PLMap.identity(p)
        if head.p != p:
            raise GFError("head and family use different primes")
        if level < 0:
            raise GFError("head level must be nonnegative")
        if not supported_in(head, core_ball(p, level)):
            raise GFError(f"head is not supported in p^-{level} Z_p")
        tail = (tail or Tail()).normalize(level, family.size)
        for n in tail.indices(level):
            if len(tail.at(n, family.size)) != family.size(n):
                raise GFError(f"tail entry at annulus {n} has the wrong number of balls")
        self.family = family
        self.level = level
        self.head = head
        self.tail = tail
        self._lower()

    @classmethod
    def _raw(cls, family, head, level, tail) -> "GFElement":
        obj = object.__new__(cls)
        obj.family, obj.head, obj.level, obj.tail = family, head, level, tail
        obj._lower()
        return obj

    def _lower(self) -> None:
        fam = self.family
        while self.level > 0:
            n = self.level - 1
            inner = core_ball(fam.p, n)
            if not preserves(self.head, inner):
                break
            rest = restrict_to(self.head, inner)
            outer_part = compose(self.head, invert(rest))
            perm = annulus_action(outer_part, fam.balls(n))
            if perm is None or not supported_in(outer_part, core_ball(fam.p, self.level)):
                break
            if fam.element_map(n, perm) != outer_part:
                break
            self.head = rest
            self.level = n
            self.tail = self.tail.with_entries({n: perm}, n, fam.size)

    @property
    def p(self) -> int:
        return self.family.p

    def tail_at(self, n: int) -> Perm:
        if n < self.level:
            raise GFError(f"annulus {n} lies inside the head region")
        return self.tail.at(n, self.family.size)

    def tail_is_trivial(self) -> bool:
        return self.tail.is_trivial()

    def key(self) -> tuple:
        return (self.level, self.head.key(), self.tail)

    def __eq__(self, other):
        if not isinstance(other, GFElement):
            return NotImplemented
        return self.family == other.family and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"GFElement(level={self.level}, head={self.head!r}, tail={self.tail!r})"

    def __mul__(self, other: "GFElement") -> "GFElement":
        return gf_compose(self, other)

    def __invert__(self) -> "GFElement":
        return gf_invert(self)

    def raised(self, level: int) -> tuple[PLMap, Tail]:
        """Head and tail of the same element described with head level ``level``."""
        if level < self.level:
            raise GFError("can only raise the head level")
        head = self.head
        for n in range(self.level, level):
            perm = self.tail_at(n)
            if not perms.is_identity(perm):
                head = compose(head, self.family.element_map(n, perm))
        return head, self.tail.normalize(level, self.family.size)

    def annulus_index(self, x: Fraction) -> Optional[int]:
        """Annulus index of ``x`` if it lies outside the head region, else None."""
        v = vp(x, self.p)
        if v >= -self.level:
            return None
        return -v - 1

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        n = self.annulus_index(x)
        if n is None:
            return self.head(x)
        perm = self.tail_at(n)
        balls = self.family.balls(n)
        i = _ball_of(balls, x)
        return x + (balls[perm[i]].center - balls[i].center)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "head": self.head.to_json(),
            "tail": self.tail.to_json(lambda n, q: perms.to_cycle_string(q)),
        }

    @classmethod
    def from_json(cls, family: FamilySpec, data: Mapping) -> "GFElement":
        head = PLMap.from_json(data["head"]) if data.get("head") else PLMap.identity(family.p)
        level = int(data.get("level", 0))
        tdata = data.get("tail", {})

        def conv(n, text):
            return perms.from_cycles(perms.parse_cycles(text), family.size(n))

        exc = {int(n): conv(int(n), t) for n, t in tdata.get("exceptions", {}).items()}
        pattern = ()
        start = 0
        if "pattern" in tdata:
            start = int(tdata["pattern"]["start"])
            pattern = tuple(conv(start + i, t) for i, t in enumerate(tdata["pattern"]["period"]))
        return cls(family, head, level, Tail.build(exc, pattern, start))


def _ball_of(balls, x: Fraction) -> int:
    for i, b in enumerate(balls):
        if b.contains(x):
            return i
    raise GFError(f"{x} is not in the annulus")


def identity(family: FamilySpec) -> GFElement:
    return GFElement(family)


def from_plmap(family: FamilySpec, f: PLMap) -> GFElement:
    """A compactly supported PL map viewed as an element of G_F."""
    level = 0
    for pc in f.pieces:
        level = max(level, -pc.domain.level, -pc.domain.residue.exponent if pc.domain.residue else 0)
    return GFElement(family, f, level)


def tail_element(family: FamilySpec, exceptions: Mapping[int, Perm] = (), pattern=(), start: int = 0) -> GFElement:
    tail = Tail.build(exceptions, pattern, start)
    lo = min([n for n, _ in tail.exceptions] + ([start] if tail.pattern else []) + [10**9])
    return GFElement(family, None, lo if lo != 10**9 else 0, tail)


def gf_compose(g1: GFElement, g2: GFElement) -> GFElement:
    """``g1 o g2``; heads compose as PL maps, tails entry-wise."""
    if g1.family != g2.family:
        raise GFError("elements over different families")
    fam = g1.family
    level = max(g1.level, g2.level)
    h1, t1 = g1.raised(level)
    h2, t2 = g2.raised(level)
    tail = t1.combine(t2, perms.compose, level, fam.size)
    return GFElement._raw(fam, compose(h1, h2), level, tail)


def gf_invert(g: GFElement) -> GFElement:
    tail = g.tail.map(perms.inverse, g.level, g.family.size)
    return GFElement._raw(g.family, invert(g.head), g.level, tail)


def gf_membership(g, family: Optional[FamilySpec] = None) -> bool:
    """Decide membership in G_F.

    The head is PL with Z[1/p] coefficients by construction and preserves its
    core ball; the condition left to check is that the annulus actions lie in
    F_n for all large n.  The head level in the definition is existential,
    so finitely many annuli carrying foreign permutations are absorbed into
    the head; only the eventual pattern matters.
    """
    if isinstance(g, PLMap):
        return True
    family = family or g.family
    if family != g.family:
        raise GFError("element belongs to another family")
    return admissible_level(g) is not None


def admissible_level(g: GFElement) -> Optional[int]:
    """Smallest N such that the action on every X_n, n >= N, lies in F_n."""
    fam = g.family
    horizon = max(g.tail.horizon(), fam.stable_from, g.level)
    period = math.lcm(max(1, g.tail.period), max(1, fam.period))
    if not all(fam.contains(n, g.tail_at(n)) for n in range(horizon, horizon + period)):
        return None
    level = horizon
    while level > g.level and fam.contains(level - 1, g.tail_at(level - 1)):
        level -= 1
    return level


def neighborhood_member(g: GFElement, N: int) -> bool:
    """True iff ``g`` lies in V_N(1), the product of the F_n for n >= N."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if not g.head.is_identity():
        return False
    fam = g.family
    if g.level > N:
        return False
    for n in range(g.level, N):
        if not perms.is_identity(g.tail_at(n)):
            return False
    return all(fam.contains(n, g.tail_at(n)) for n in _check_range(g, N))


def _check_range(g: GFElement, N: int) -> range:
    fam = g.family
    period = math.lcm(max(1, g.tail.period), max(1, fam.period))
    top = max(g.tail.horizon(), fam.stable_from, N)
    return range(N, top + period)


def neighborhood_depth(g: GFElement) -> float:
    """Largest N with ``g`` in V_N(1); ``inf`` for the identity, -1 if none."""
    if g.head.is_identity() and g.tail.is_trivial():
        return math.inf
    if not g.head.is_identity():
        return -1
    first = g.tail.first_nontrivial(g.level, g.family.size)
    if first is None:
        return math.inf
    return first if neighborhood_member(g, first) else -1


def in_U(g: GFElement, n: int) -> bool:
    return neighborhood_member(g, n)


@dataclass(frozen=True)
class Truncation:
    """Result of truncating ``g`` to the ball ``p^(k+1) Z_p``."""

    k: int
    ball: Ball
    truncated: GFElement
    defect: GFElement  # g * truncated^-1
    depth: float  # largest M with defect in V_M(1)
    guaranteed: int  # -k-1, the depth the construction promises

    @property
    def verified(self) -> bool:
        return self.depth >= max(self.guaranteed, 0)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "ball": self.ball.to_json(),
            "M": "inf" if self.depth == math.inf else self.depth,
            "guaranteed_M": self.guaranteed,
            "verified": self.verified,
        }


def truncation_range(g: GFElement) -> int:
    """Every ``k <= -g.level - 1`` is admissible for :func:`truncate_to_ball`."""
    return -g.level - 1


def truncate_to_ball(g: GFElement, k: int) -> Truncation:
    """``g`` on ``p^(k+1) Z_p``, identity elsewhere, with the depth of the defect."""
    p = g.p
    ball = Ball.zp(p, k + 1)
    j = -(k + 1)
    if j >= g.level:
        head, _ = g.raised(j)
        trunc = GFElement._raw(g.family, head, j, Tail())
    else:
        if not preserves(g.head, ball):
            raise GFError(f"g does not preserve {ball}")
        trunc = GFElement._raw(g.family, restrict_to(g.head, ball), g.level, Tail())
    defect = gf_compose(g, gf_invert(trunc))
    return Truncation(k, ball, trunc, defect, neighborhood_depth(defect), j)


def germ_trivial_at(g, x) -> bool:
    """True iff ``g`` acts as the identity on a neighbourhood of ``x``."""
    if isinstance(g, PLMap):
        return _pl_germ_trivial(g, x)
    x = Fraction(x)
    n = g.annulus_index(x)
    if n is None:
        return _pl_germ_trivial(g.head, x)
    perm = g.tail_at(n)
    return perm[_ball_of(g.family.balls(n), x)] == _ball_of(g.family.balls(n), x)


def split_at(g: GFElement, n: int) -> tuple[GFElement, GFElement]:
    """Write ``g`` as ``head_part * tail_part`` with head in p^-n Z_p and tail in U_n."""
    if n < g.level:
        raise GFError(f"head level {g.level} exceeds {n}")
    head, tail = g.raised(n)
    return (
        GFElement._raw(g.family, head, n, Tail()),
        GFElement._raw(g.family, PLMap.identity(g.p), n, tail),
    )


def load_element(family: FamilySpec, path) -> GFElement:
    with open(path) as fh:
        return GFElement.from_json(family, json.load(fh))
