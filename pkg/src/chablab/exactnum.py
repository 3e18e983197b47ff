"""Exact arithmetic in Z[1/p], p-adic valuations and clopen balls of Q_p.

Every value carries its prime ``p``; combining values built over different
primes raises :class:`PrimeMismatch`.  Rationals outside Z[1/p] (fixed points
of affine maps, sample points) are plain :class:`fractions.Fraction` objects.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

INF = math.inf

ExactRational = Fraction


class PrimeMismatch(ValueError):
    pass


def _check_prime(p: int) -> None:
    if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"{p} is not a prime")


@lru_cache(maxsize=None)
def _valid_prime(p: int) -> int:
    _check_prime(p)
    return p


def vp_int(n: int, p: int) -> Union[int, float]:
    """p-adic valuation of an integer (``INF`` for zero)."""
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _strip(m: int, e: int, p: int) -> tuple[int, int]:
    if m == 0:
        return 0, 0
    while m % p == 0:
        m //= p
        e += 1
    return m, e


class PScalar:
    """An element ``mantissa * p**exponent`` of Z[1/p] in canonical form."""

    __slots__ = ("p", "mantissa", "exponent")

    def __init__(self, mantissa: int, exponent: int = 0, p: int = 2):
        m, e = _strip(int(mantissa), int(exponent), _valid_prime(p))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)

    @classmethod
    def _raw(cls, m: int, e: int, p: int) -> "PScalar":
        # m, e already canonical
        obj = object.__new__(cls)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "mantissa", m)
        object.__setattr__(obj, "exponent", e)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("PScalar is immutable")

    @classmethod
    def zero(cls, p: int) -> "PScalar":
        return cls._raw(0, 0, _valid_prime(p))

    @classmethod
    def from_value(cls, x, p: int) -> "PScalar":
        """Convert an int, Fraction or PScalar; raise if it is not in Z[1/p]."""
        if isinstance(x, PScalar):
            _same_prime(x.p, p)
            return x
        x = Fraction(x)
        den = x.denominator
        e = 0
        while den % p == 0:
            den //= p
            e -= 1
        if den != 1:
            raise ValueError(f"{x} is not in Z[1/{p}]")
        return cls(x.numerator, e, p)

    @staticmethod
    def is_in_ring(x, p: int) -> bool:
        den = Fraction(x).denominator
        while den % p == 0:
            den //= p
        return den == 1

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa * self.p**self.exponent)
        return Fraction(self.mantissa, self.p ** (-self.exponent))

    def _coerce(self, other) -> "PScalar":
        if isinstance(other, PScalar):
            if other.p != self.p:
                raise PrimeMismatch(f"mixing p={self.p} and p={other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return PScalar.from_value(other, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.mantissa == 0:
            return self
        if self.mantissa == 0:
            return other
        p = self.p
        e = min(self.exponent, other.exponent)
        m = self.mantissa * p ** (self.exponent - e) + other.mantissa * p ** (other.exponent - e)
        m, e = _strip(m, e, p)
        return PScalar._raw(m, e, p)

    __radd__ = __add__

    def __neg__(self):
        return PScalar._raw(-self.mantissa, self.exponent, self.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.mantissa == 0 or other.mantissa == 0:
            return PScalar._raw(0, 0, self.p)
        # product of units is a unit
        return PScalar._raw(self.mantissa * other.mantissa, self.exponent + other.exponent, self.p)

    __rmul__ = __mul__

    def shift(self, k: int) -> "PScalar":
        """Multiply by ``p**k``."""
        if self.mantissa == 0:
            return self
        return PScalar._raw(self.mantissa, self.exponent + k, self.p)

    def __eq__(self, other):
        if isinstance(other, PScalar):
            return (self.p, self.mantissa, self.exponent) == (other.p, other.mantissa, other.exponent)
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash(self.to_fraction())

    def __lt__(self, other):
        return self.to_fraction() < Fraction(other.to_fraction() if isinstance(other, PScalar) else other)

    def __bool__(self):
        return self.mantissa != 0

    def __repr__(self):
        return f"PScalar({self})"

    def __str__(self):
        return f"{self.mantissa}*{self.p}^{self.exponent}"

    def valuation(self):
        return INF if self.mantissa == 0 else self.exponent

    def to_json(self) -> str:
        return str(self)


_PSCALAR_RE = re.compile(r"^\s*([+-]?\d+)\s*\*\s*(\d+)\s*\^\s*([+-]?\d+)\s*$")


def parse_pscalar(text: str, p: int | None = None) -> PScalar:
    """Parse the ``"m*p^e"`` form (a bare integer is also accepted)."""
    match = _PSCALAR_RE.match(text)
    if match is None:
        try:
            n = int(text)
        except ValueError:
            raise ValueError(f"cannot parse scalar {text!r}") from None
        if p is None:
            raise ValueError(f"bare integer {text!r} needs an explicit prime")
        return PScalar(n, 0, p)
    m, q, e = (int(g) for g in match.groups())
    if p is not None and q != p:
        raise PrimeMismatch(f"scalar {text!r} is not over p={p}")
    return PScalar(m, e, q)


def _same_prime(p: int, q: int) -> None:
    if p != q:
        raise PrimeMismatch(f"mixing p={p} and p={q}")


def vp(x, p: int | None = None) -> Union[int, float]:
    """p-adic valuation of a PScalar, int or Fraction; ``INF`` for zero."""
    if isinstance(x, PScalar):
        if p is not None:
            _same_prime(x.p, p)
        return x.valuation()
    if p is None:
        raise ValueError("prime required for non-PScalar input")
    x = Fraction(x)
    if x == 0:
        return INF
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def _residue(m: int, e: int, p: int, level: int) -> tuple[int, int]:
    """Canonical digit truncation of ``m p^e`` below position ``level``."""
    if m == 0 or e >= level:
        return 0, 0
    return _strip(m % p ** (level - e), e, p)


def residue_of(x: Fraction, p: int, level: int) -> PScalar:
    """Canonical residue of a rational (inside Z_(p)[1/p]) at the given level.

    Digits of ``x`` at positions ``< level`` as a finite p-adic expansion.
    """
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    s = 0
    while den % p == 0:
        den //= p
        s += 1
    if num == 0 or level <= -s:
        return PScalar._raw(0, 0, p)
    mod = p ** (level + s)
    c = (num * pow(den, -1, mod)) % mod
    m, e = _strip(c, -s, p)
    return PScalar._raw(m, e, p)


class Ball:
    """The clopen ball ``residue + p**level * Z_p`` with canonical residue."""

    __slots__ = ("p", "level", "residue", "_t")

    def __init__(self, residue, level: int, p: int | None = None):
        if not isinstance(residue, PScalar):
            if p is None:
                raise ValueError("prime required")
            residue = PScalar.from_value(residue, p)
        elif p is not None:
            _same_prime(residue.p, p)
        p = residue.p
        m, e = _residue(residue.mantissa, residue.exponent, p, level)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "level", int(level))
        object.__setattr__(self, "residue", PScalar._raw(m, e, p))
        object.__setattr__(self, "_t", (int(level), m, e))

    def __setattr__(self, name, value):
        raise AttributeError("Ball is immutable")

    @classmethod
    def zp(cls, p: int, level: int = 0) -> "Ball":
        return cls(PScalar.zero(p), level)

    @classmethod
    def _raw(cls, level: int, m: int, e: int, p: int) -> "Ball":
        obj = object.__new__(cls)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "level", level)
        object.__setattr__(obj, "residue", PScalar._raw(m, e, p))
        object.__setattr__(obj, "_t", (level, m, e))
        return obj

    @property
    def center(self) -> Fraction:
        return self.residue.to_fraction()

    @property
    def key(self) -> tuple[int, Fraction]:
        """Sort key ``(level, residue)``."""
        return (self.level, self.center)

    def __eq__(self, other):
        if not isinstance(other, Ball):
            return NotImplemented
        return self._t == other._t and self.p == other.p

    def __hash__(self):
        return hash(self._t)

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"Ball({self})"

    def __str__(self):
        return f"{self.residue} + {self.p}^{self.level}·Z"

    def contains(self, x) -> bool:
        if isinstance(x, PScalar):
            _same_prime(x.p, self.p)
            x = x.to_fraction()
        return vp(Fraction(x) - self.center, self.p) >= self.level

    __contains__ = contains

    def children(self) -> list["Ball"]:
        step = PScalar._raw(1, self.level, self.p)
        r = self.residue
        return [Ball(r + step * d, self.level + 1) for d in range(self.p)]

    def parent(self) -> "Ball":
        return self.ancestor(self.level - 1)

    def ancestor(self, level: int) -> "Ball":
        if level > self.level:
            raise ValueError("ancestor level must not exceed the ball level")
        m, e = _residue(self.residue.mantissa, self.residue.exponent, self.p, level)
        return Ball._raw(level, m, e, self.p)

    def ancestor_key(self, level: int) -> tuple[int, int, int]:
        """``ancestor(level)._t`` without building the ball."""
        m, e = _residue(self.residue.mantissa, self.residue.exponent, self.p, level)
        return (level, m, e)

    def contains_ball(self, other: "Ball") -> bool:
        _same_prime(self.p, other.p)
        return other.level >= self.level and other.ancestor_key(self.level) == self._t

    def disjoint(self, other: "Ball") -> bool:
        _same_prime(self.p, other.p)
        lo = min(self.level, other.level)
        return self.ancestor_key(lo) != other.ancestor_key(lo)

    def affine_image(self, slope_exp: int, translation: PScalar) -> "Ball":
        """Image under ``x -> p**slope_exp * x + translation``."""
        return Ball(self.residue.shift(slope_exp) + translation, self.level + slope_exp)

    def sample(self, rng, depth: int = 12) -> Fraction:
        """A random rational point of the ball."""
        p = self.p
        unit = rng.randrange(1, 50)
        while unit % p == 0:
            unit += 1
        tail = Fraction(rng.randrange(-(p**depth), p**depth), unit)
        return self.center + tail * Fraction(p) ** self.level

    def to_json(self) -> dict:
        return {"level": self.level, "residue": str(self.residue)}

    @classmethod
    def from_json(cls, data: dict, p: int | None = None) -> "Ball":
        return cls(parse_pscalar(data["residue"], p), int(data["level"]))


def ball_contains(ball: Ball, x) -> bool:
    return ball.contains(x)


def ball_children(ball: Ball) -> list[Ball]:
    return ball.children()


def ball_parent(ball: Ball) -> Ball:
    return ball.parent()


def disjoint(b1: Ball, b2: Ball) -> bool:
    return b1.disjoint(b2)


def annulus(n: int, p: int) -> list[Ball]:
    """The p-1 balls of level -n making up {x : v_p(x) = -(n+1)}."""
    if n < 0:
        raise ValueError("annulus index must be nonnegative")
    return [Ball(PScalar(c, -(n + 1), p), -n) for c in range(1, p)]


def merge_balls(balls: Iterable[Ball]) -> list[Ball]:
    """Maximal-ball decomposition of a disjoint union of balls.

    Complete sibling families are merged into their parent until none is
    left; the result is sorted and unique for the set the balls cover.
    """
    current = set(balls)
    while True:
        by_parent: dict[Ball, list[Ball]] = {}
        for b in current:
            by_parent.setdefault(b.parent(), []).append(b)
        merged = False
        for parent, kids in by_parent.items():
            if len(kids) == parent.p:
                current.difference_update(kids)
                current.add(parent)
                merged = True
        if not merged:
            return sorted(current)


def ball_difference(ball: Ball, holes: Iterable[Ball]) -> list[Ball]:
    """Decompose ``ball`` minus the union of ``holes`` into disjoint balls."""
    holes = [h for h in holes if not h.disjoint(ball)]
    if not holes:
        return [ball]
    if any(h.contains_ball(ball) for h in holes):
        return []
    out: list[Ball] = []
    for child in ball.children():
        out.extend(ball_difference(child, holes))
    return out


def covers_equal(a: Iterable[Ball], b: Iterable[Ball]) -> bool:
    return merge_balls(a) == merge_balls(b)
