"""Piecewise-affine homeomorphisms of Q_p with finitely many non-identity pieces.

A :class:`PLMap` is stored in canonical form: identity pieces are removed,
complete sibling families carrying one law are merged into their parent, and
pieces are sorted by ``(level, residue)``.  Two maps are equal exactly when
their canonical piece tuples are equal.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from ..exactnum import (
    Ball,
    PScalar,
    PrimeMismatch,
    merge_balls,
    _strip,
)

DEFAULT_MAX_PIECES = 10**6


class NotBijective(ValueError):
    pass


class PieceLimitExceeded(RuntimeError):
    pass


def max_pieces() -> int:
    return int(os.environ.get("CHABLAB_MAX_PIECES", DEFAULT_MAX_PIECES))


class AffinePiece:
    """The law ``x -> p**slope_exp * x + translation`` on ``domain``."""

    __slots__ = ("domain", "slope_exp", "translation", "image", "_t", "_affine")

    def __init__(self, domain: Ball, slope_exp: int, translation: PScalar):
        if translation.p != domain.p:
            raise PrimeMismatch("piece translation and domain use different primes")
        self.domain = domain
        self.slope_exp = int(slope_exp)
        self.translation = translation
        self.image = domain.affine_image(self.slope_exp, translation)
        self._t = (domain._t, self.slope_exp, translation.mantissa, translation.exponent)
        self._affine = None

    @property
    def p(self) -> int:
        return self.domain.p

    @property
    def law(self) -> tuple[int, int, int]:
        return (self.slope_exp, self.translation.mantissa, self.translation.exponent)

    def is_identity(self) -> bool:
        return self.slope_exp == 0 and self.translation.mantissa == 0

    def apply(self, x: Fraction) -> Fraction:
        law = self._affine
        if law is None:
            law = (Fraction(self.p) ** self.slope_exp, self.translation.to_fraction())
            self._affine = law
        return law[0] * x + law[1]

    def inverse(self) -> "AffinePiece":
        return AffinePiece(self.image, -self.slope_exp, -self.translation.shift(-self.slope_exp))

    def restrict(self, ball: Ball) -> "AffinePiece":
        return AffinePiece(ball, self.slope_exp, self.translation)

    def __eq__(self, other):
        return isinstance(other, AffinePiece) and self._t == other._t

    def __hash__(self):
        return hash(self._t)

    def __repr__(self):
        return f"AffinePiece({self.domain}: x -> {self.p}^{self.slope_exp} x + {self.translation})"

    def to_json(self) -> dict:
        return {
            "ball": self.domain.to_json(),
            "slope_exp": self.slope_exp,
            "translation": str(self.translation),
        }


class BallIndex:
    """Lookup structure over a family of pairwise disjoint balls."""

    def __init__(self, items: Iterable[tuple[Ball, object]]):
        self.by_level: dict[int, dict[tuple, object]] = {}
        self.inner: set[tuple] = set()
        items = list(items)
        self._coarse: dict[int, set[tuple]] = {}
        if not items:
            self.levels: list[int] = []
            self.lo = None
            return
        lo = min(b.level for b, _ in items)
        self.lo = lo
        self._floor: list[Ball] = []
        for ball, payload in items:
            self.by_level.setdefault(ball.level, {})[ball._t] = payload
            for lev in range(lo, ball.level):
                self.inner.add(ball.ancestor_key(lev))
            self._floor.append(ball.ancestor(lo))
        self.levels = sorted(self.by_level)

    def containing(self, ball: Ball):
        """Payload of the indexed ball containing ``ball``, if any."""
        for lev in self.levels:
            if lev > ball.level:
                break
            hit = self.by_level[lev].get(ball.ancestor_key(lev))
            if hit is not None:
                return hit
        return None

    def has_inside(self, ball: Ball) -> bool:
        """True if some indexed ball is strictly inside ``ball``."""
        if self.lo is None:
            return False
        if ball.level >= self.lo:
            return ball._t in self.inner
        coarse = self._coarse.get(ball.level)
        if coarse is None:
            coarse = {b.ancestor_key(ball.level) for b in self._floor}
            self._coarse[ball.level] = coarse
        return ball._t in coarse

    def at_point(self, x: Fraction, p: int):
        if not self.levels:
            return None
        num, den = x.numerator, x.denominator
        s = 0
        while den % p == 0:
            den //= p
            s += 1
        top = self.levels[-1]
        if num == 0 or top <= -s:
            digits = 0
        else:
            mod = p ** (top + s)
            digits = num * pow(den, -1, mod) % mod
        for lev in self.levels:
            if num == 0 or lev <= -s:
                key = (lev, 0, 0)
            else:
                m, e = _strip(digits % p ** (lev + s), -s, p)
                key = (lev, m, e)
            hit = self.by_level[lev].get(key)
            if hit is not None:
                return hit
        return None


def _disjoint_check(balls: Sequence[Ball], what: str) -> None:
    seen: dict[tuple, Ball] = {}
    levels = sorted({b.level for b in balls})
    for b in balls:
        if b._t in seen:
            raise NotBijective(f"{what} overlap: {b} appears twice")
        seen[b._t] = b
    for b in balls:
        for lev in levels:
            if lev >= b.level:
                break
            anc = b.ancestor(lev)._t
            if anc in seen:
                raise NotBijective(f"{what} overlap: {seen[anc]} contains {b}")


def _merge_siblings(pieces: dict[tuple, AffinePiece]) -> dict[tuple, AffinePiece]:
    if not pieces:
        return pieces
    p = next(iter(pieces.values())).p
    pending = True
    while pending:
        pending = False
        groups: dict[tuple, list[AffinePiece]] = {}
        for pc in pieces.values():
            groups.setdefault((pc.domain.parent()._t, pc.law), []).append(pc)
        for (_, law), kids in groups.items():
            if len(kids) != p:
                continue
            for k in kids:
                del pieces[k.domain._t]
            merged = AffinePiece(kids[0].domain.parent(), kids[0].slope_exp, kids[0].translation)
            if not merged.is_identity():
                pieces[merged.domain._t] = merged
            pending = True
    return pieces


def _canonical(p: int, pieces: Iterable[AffinePiece]) -> tuple[AffinePiece, ...]:
    table = {pc.domain._t: pc for pc in pieces if not pc.is_identity()}
    table = _merge_siblings(table)
    return tuple(sorted(table.values(), key=lambda pc: pc.domain.key))


class PLMap:
    """Finitely described piecewise-affine homeomorphism of Q_p.

    Identity outside the union of the piece domains.  Build one from raw
    pieces with :func:`canonicalize` (validates bijectivity) or from the
    helpers in this module.
    """

    __slots__ = ("p", "pieces", "_index", "_hash")

    def __init__(self, p: int, pieces: tuple[AffinePiece, ...]):
        # pieces must already be canonical
        self.p = p
        self.pieces = pieces
        self._index: Optional[BallIndex] = None
        self._hash: Optional[int] = None

    @classmethod
    def identity(cls, p: int) -> "PLMap":
        return cls(p, ())

    @property
    def index(self) -> BallIndex:
        if self._index is None:
            self._index = BallIndex((pc.domain, pc) for pc in self.pieces)
        return self._index

    def is_identity(self) -> bool:
        return not self.pieces

    def key(self) -> tuple:
        return (self.p, tuple(pc._t for pc in self.pieces))

    def __eq__(self, other):
        if not isinstance(other, PLMap):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self):
        if not self.pieces:
            return f"PLMap(p={self.p}, identity)"
        body = "; ".join(
            f"{pc.domain}: {self.p}^{pc.slope_exp} x + {pc.translation}" for pc in self.pieces
        )
        return f"PLMap(p={self.p}, {body})"

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        pc = self.index.at_point(x, self.p)
        return x if pc is None else pc.apply(x)

    def __mul__(self, other: "PLMap") -> "PLMap":
        return compose(self, other)

    def __invert__(self) -> "PLMap":
        return invert(self)

    def __pow__(self, n: int) -> "PLMap":
        result = PLMap.identity(self.p)
        base = self if n >= 0 else invert(self)
        for _ in range(abs(n)):
            result = compose(result, base)
        return result

    def domains(self) -> list[Ball]:
        return [pc.domain for pc in self.pieces]

    def moved_region(self) -> list[Ball]:
        """Maximal-ball decomposition of the union of the piece domains."""
        return merge_balls(self.domains())

    def to_json(self) -> dict:
        return {"p": self.p, "pieces": [pc.to_json() for pc in self.pieces]}

    @classmethod
    def from_json(cls, data: dict) -> "PLMap":
        from ..exactnum import parse_pscalar

        p = int(data["p"])
        pieces = [
            AffinePiece(
                Ball.from_json(item["ball"], p),
                int(item["slope_exp"]),
                parse_pscalar(item["translation"], p),
            )
            for item in data["pieces"]
        ]
        return canonicalize(pieces, p)


def canonicalize(pieces: Iterable[AffinePiece], p: int | None = None) -> PLMap:
    """Validate a raw piece list and return its canonical :class:`PLMap`.

    Raises :class:`NotBijective` naming the offending balls when domains or
    images overlap, or when the images do not cover the domains.
    """
    pieces = list(pieces)
    if p is None:
        if not pieces:
            raise ValueError("prime required for an empty piece list")
        p = pieces[0].p
    for pc in pieces:
        if pc.p != p:
            raise PrimeMismatch(f"piece over p={pc.p} in a p={p} map")
    domains = [pc.domain for pc in pieces]
    images = [pc.image for pc in pieces]
    _disjoint_check(domains, "domain")
    _disjoint_check(images, "image")
    dom_cover = merge_balls(domains)
    img_cover = merge_balls(images)
    if dom_cover != img_cover:
        extra = sorted(set(img_cover) ^ set(dom_cover))
        raise NotBijective(f"images do not cover the domains; mismatch near {extra[:3]}")
    return PLMap(p, _canonical(p, pieces))


def from_laws(p: int, laws: Iterable[tuple[Ball, int, object]]) -> PLMap:
    """Convenience: ``[(ball, slope_exp, translation), ...]`` to a PLMap."""
    return canonicalize(
        [AffinePiece(b, m, PScalar.from_value(t, p)) for b, m, t in laws], p
    )


def _check_limit(n: int) -> None:
    limit = max_pieces()
    if n > limit:
        raise PieceLimitExceeded(
            f"composition produced more than {limit} pieces (set CHABLAB_MAX_PIECES to raise)"
        )


def _outside(ball: Ball, idx: BallIndex) -> list[Ball]:
    if idx.containing(ball) is not None:
        return []
    if not idx.has_inside(ball):
        return [ball]
    out: list[Ball] = []
    for child in ball.children():
        out.extend(_outside(child, idx))
    return out


def _split(ball: Ball, idx: BallIndex) -> list[tuple[Ball, Optional[AffinePiece]]]:
    hit = idx.containing(ball)
    if hit is not None:
        return [(ball, hit)]
    if not idx.has_inside(ball):
        return [(ball, None)]
    out = []
    for child in ball.children():
        out.extend(_split(child, idx))
    return out


def compose(f: PLMap, g: PLMap) -> PLMap:
    """Canonical form of ``f o g`` (apply ``g`` first)."""
    if f.p != g.p:
        raise PrimeMismatch(f"composing p={f.p} with p={g.p}")
    p = f.p
    if not g.pieces:
        return f
    if not f.pieces:
        return g
    zero = PScalar.zero(p)
    work: list[tuple[Ball, int, PScalar]] = [
        (pc.domain, pc.slope_exp, pc.translation) for pc in g.pieces
    ]
    g_idx = g.index
    for pc in f.pieces:
        work.extend((b, 0, zero) for b in _outside(pc.domain, g_idx))
    f_idx = f.index
    out: list[AffinePiece] = []
    for dom, m, b in work:
        img = dom.affine_image(m, b)
        back_b = -b.shift(-m)
        for part, fpc in _split(img, f_idx):
            pre = part.affine_image(-m, back_b)
            if fpc is None:
                out.append(AffinePiece(pre, m, b))
            else:
                m2 = fpc.slope_exp + m
                b2 = b.shift(fpc.slope_exp) + fpc.translation
                out.append(AffinePiece(pre, m2, b2))
        _check_limit(len(out))
    return PLMap(p, _canonical(p, out))


def invert(f: PLMap) -> PLMap:
    return PLMap(f.p, _canonical(f.p, (pc.inverse() for pc in f.pieces)))


def commutator(f: PLMap, g: PLMap) -> PLMap:
    """``f g f^-1 g^-1``."""
    return compose(compose(f, g), compose(invert(f), invert(g)))


def translation_on(ball: Ball, amount) -> PLMap:
    """``x -> x + amount`` on ``ball`` (which must be invariant), identity elsewhere."""
    t = PScalar.from_value(amount, ball.p)
    if ball.affine_image(0, t) != ball:
        raise NotBijective(f"translation by {t} does not preserve {ball}")
    return canonicalize([AffinePiece(ball, 0, t)], ball.p)


def ball_swap(b1: Ball, b2: Ball) -> PLMap:
    """Exchange two disjoint balls of the same level by translations."""
    if b1.level != b2.level or not b1.disjoint(b2):
        raise ValueError("ball_swap needs disjoint balls of equal level")
    d = b2.residue - b1.residue
    return canonicalize([AffinePiece(b1, 0, d), AffinePiece(b2, 0, -d)], b1.p)


def ball_permutation(balls: Sequence[Ball], perm: Sequence[int]) -> PLMap:
    """Slope-one map sending ``balls[i]`` onto ``balls[perm[i]]``."""
    pieces = []
    for i, j in enumerate(perm):
        if i != j:
            pieces.append(AffinePiece(balls[i], 0, balls[j].residue - balls[i].residue))
    if not balls:
        raise ValueError("empty ball list")
    return canonicalize(pieces, balls[0].p)


def prefix_map(src: Ball, dst: Ball) -> AffinePiece:
    """The canonical prefix substitution ``src -> dst``."""
    m = dst.level - src.level
    return AffinePiece(src, m, dst.residue - src.residue.shift(m))


@dataclass(frozen=True)
class FixedPoints:
    """Fixed-point data: everything outside ``moved_region`` is fixed, plus
    the isolated fixed points inside it."""

    moved_region: tuple[Ball, ...]
    isolated: tuple[Fraction, ...]

    @property
    def everything_fixed(self) -> bool:
        return not self.moved_region

    def to_json(self) -> dict:
        return {
            "fixed_region": {"complement_of": [b.to_json() for b in self.moved_region]},
            "isolated": [str(x) for x in self.isolated],
        }


def fixed_points(f: PLMap) -> FixedPoints:
    p = f.p
    isolated = []
    for pc in f.pieces:
        if pc.slope_exp == 0:
            continue  # pure translation with nonzero shift
        cand = pc.translation.to_fraction() / (1 - Fraction(p) ** pc.slope_exp)
        if pc.domain.contains(cand):
            isolated.append(cand)
    return FixedPoints(tuple(f.moved_region()), tuple(sorted(isolated)))


@dataclass(frozen=True)
class Support:
    """``region`` minus the finitely many ``excluded`` points."""

    region: tuple[Ball, ...]
    excluded: tuple[Fraction, ...]
    compact: bool = True

    @property
    def empty(self) -> bool:
        return not self.region

    def closure(self) -> tuple[Ball, ...]:
        # removing finitely many points from a clopen set does not change its closure
        return self.region

    def contains(self, x) -> bool:
        x = Fraction(x)
        return any(b.contains(x) for b in self.region) and x not in self.excluded

    def to_json(self) -> dict:
        return {
            "region": [b.to_json() for b in self.region],
            "excluded": [str(x) for x in self.excluded],
            "compact": self.compact,
        }


def support(f: PLMap) -> Support:
    fp = fixed_points(f)
    return Support(fp.moved_region, fp.isolated, True)


def germ_trivial_at(f: PLMap, x) -> bool:
    """True iff ``f`` is the identity on some ball around ``x``."""
    # domains are clopen and canonical pieces are never the identity law
    return f.index.at_point(Fraction(x), f.p) is None


def in_gamma_p(f) -> bool:
    """Membership in the compactly supported group with Z[1/p] coefficients."""
    if isinstance(f, PLMap):
        return True
    from .gf import GFElement

    if isinstance(f, GFElement):
        return f.tail_is_trivial()
    raise TypeError(f"unsupported element {type(f).__name__}")


def in_zp(ball: Ball) -> bool:
    return ball.level >= 0 and ball.residue.exponent >= 0


def in_lambda_p(f: PLMap) -> bool:
    """True iff ``f`` preserves Z_p and is the identity outside it."""
    return all(in_zp(pc.domain) for pc in f.pieces)


def in_Vp(f: PLMap) -> bool:
    """True iff every piece is the canonical prefix substitution of its balls."""
    if not in_lambda_p(f):
        raise ValueError("in_Vp needs an element supported in Z_p")
    for pc in f.pieces:
        expected = pc.image.residue - pc.domain.residue.shift(pc.slope_exp)
        if expected != pc.translation:
            return False
    return True


def restrict_to(f: PLMap, ball: Ball) -> PLMap:
    """``f`` on ``ball`` and the identity elsewhere; ``ball`` must be invariant."""
    pieces = []
    for pc in f.pieces:
        if ball.contains_ball(pc.domain):
            pieces.append(pc)
        elif not pc.domain.disjoint(ball):
            for part in _inside(pc.domain, ball):
                pieces.append(pc.restrict(part))
    return canonicalize(pieces, f.p)


def _inside(dom: Ball, ball: Ball) -> list[Ball]:
    if ball.contains_ball(dom):
        return [dom]
    if dom.disjoint(ball):
        return []
    out = []
    for child in dom.children():
        out.extend(_inside(child, ball))
    return out


def _maps_into(f: PLMap, ball: Ball) -> bool:
    for pc in f.pieces:
        if ball.contains_ball(pc.domain):
            if not ball.contains_ball(pc.image):
                return False
        elif not pc.domain.disjoint(ball):
            # the piece domain strictly contains the ball
            if not ball.contains_ball(pc.restrict(ball).image):
                return False
    return True


def preserves(f: PLMap, ball: Ball) -> bool:
    """True iff ``f(ball) = ball``."""
    return _maps_into(f, ball) and _maps_into(invert(f), ball)


def supported_in(f: PLMap, ball: Ball) -> bool:
    return all(ball.contains_ball(pc.domain) for pc in f.pieces)
