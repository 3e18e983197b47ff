"""Families (F_n) of finite ball-permutation groups supported in the annuli X_n."""
from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .. import perms
from ..exactnum import Ball, PScalar, annulus
from ..perms import Perm
from .plmap import AffinePiece, PLMap, ball_permutation, canonicalize, commutator
from .words import GeneratorTable, Word, evaluate_word, parse_word

DEFAULT_MAX_FAMILY_ORDER = 10**5


class FamilyError(ValueError):
    pass


def max_family_order() -> int:
    return int(os.environ.get("CHABLAB_MAX_FAMILY_ORDER", DEFAULT_MAX_FAMILY_ORDER))


@dataclass(frozen=True)
class AnnulusEntry:
    depth: int
    generators: tuple[Perm, ...] = ()


@dataclass(frozen=True)
class Certificate:
    """A commutator word over compactly supported elements equal to a generator."""

    table: GeneratorTable = field(compare=False)
    word: Word

    def evaluate(self) -> PLMap:
        return evaluate_word(self.word, self.table)


def sub_balls(p: int, n: int, depth: int) -> list[Ball]:
    """The ``(p-1) p**depth`` balls of level ``-n + depth`` tiling X_n, sorted."""
    balls = annulus(n, p)
    for _ in range(depth):
        balls = [c for b in balls for c in b.children()]
    return sorted(balls)


class FamilySpec:
    """Per-annulus depths and generators, explicit for ``n < len(explicit)``.

    Beyond the explicit range the family is trivial (``rule="identity"``) or
    repeats with period ``period`` (``rule="periodic"``), entry ``n`` being the
    rescaling of entry ``n - period`` by ``x -> p**-period x``.
    """

    def __init__(self, p: int, explicit: Sequence[AnnulusEntry], rule: str = "identity", period: int = 1):
        if rule not in ("identity", "periodic"):
            raise FamilyError(f"unknown eventual rule {rule!r}")
        if rule == "periodic" and not 1 <= period <= len(explicit):
            raise FamilyError("periodic rule needs 1 <= period <= number of explicit annuli")
        self.p = p
        self.explicit = tuple(explicit)
        self.rule = rule
        self.period = period if rule == "periodic" else 0
        self._cache: dict[int, tuple[list[Perm], frozenset]] = {}
        self._lock = threading.Lock()
        for n, entry in enumerate(self.explicit):
            k = self.size(n)
            for g in entry.generators:
                if sorted(g) != list(range(k)):
                    raise FamilyError(f"generator {g} of F_{n} is not a permutation of {k} balls")
                if not perms.is_even(g):
                    raise FamilyError(f"generator {perms.to_cycle_string(g)} of F_{n} is odd")

    def __eq__(self, other):
        return isinstance(other, FamilySpec) and (self.p, self.explicit, self.rule, self.period) == (
            other.p,
            other.explicit,
            other.rule,
            other.period,
        )

    def __hash__(self):
        return hash((self.p, self.explicit, self.rule, self.period))

    def __repr__(self):
        return f"FamilySpec(p={self.p}, explicit={len(self.explicit)}, rule={self.rule}, period={self.period})"

    def entry(self, n: int) -> AnnulusEntry:
        if n < 0:
            raise ValueError("annulus index must be nonnegative")
        m = len(self.explicit)
        if n < m:
            return self.explicit[n]
        if self.rule == "identity":
            return AnnulusEntry(0, ())
        return self.explicit[m - self.period + (n - m) % self.period]

    def depth(self, n: int) -> int:
        return self.entry(n).depth

    def size(self, n: int) -> int:
        return (self.p - 1) * self.p ** self.depth(n)

    @property
    def stable_from(self) -> int:
        """Index from which entries repeat with ``max(period, 1)``."""
        return len(self.explicit)

    def classes(self, lo: int = 0) -> range:
        """Indices from ``lo`` covering every distinct entry beyond ``lo``."""
        return range(lo, max(lo, self.stable_from) + max(1, self.period))

    def balls(self, n: int) -> list[Ball]:
        return sub_balls(self.p, n, self.depth(n))

    def generators(self, n: int) -> tuple[Perm, ...]:
        return self.entry(n).generators

    def _elements(self, n: int) -> tuple[list[Perm], frozenset]:
        m = self.stable_from
        if n < m:
            key = n
        elif self.rule == "identity":
            key = -1
        else:
            key = m - self.period + (n - m) % self.period
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        elems = perms.closure(self.generators(n), self.size(n), limit=max_family_order())
        val = (elems, frozenset(elems))
        with self._lock:
            # idempotent fill
            self._cache.setdefault(key, val)
        return self._cache[key]

    def elements(self, n: int) -> list[Perm]:
        return self._elements(n)[0]

    def contains(self, n: int, perm: Perm) -> bool:
        if len(perm) != self.size(n):
            return False
        return tuple(perm) in self._elements(n)[1]

    def order(self, n: int) -> int:
        return len(self._elements(n)[0])

    def element_map(self, n: int, perm: Perm) -> PLMap:
        if len(perm) != self.size(n):
            raise FamilyError(f"permutation of {len(perm)} balls does not fit F_{n} ({self.size(n)} balls)")
        return ball_permutation(self.balls(n), perm)

    def certificate(self, n: int, gen_index: int) -> Certificate:
        return _three_cycle_certificate(self.balls(n), self.generators(n)[gen_index])

    # serialisation

    def to_json(self) -> dict:
        out = {
            "p": self.p,
            "annuli": [
                {"depth": e.depth, "generators": [perms.to_cycle_string(g) for g in e.generators]}
                for e in self.explicit
            ],
            "eventual": {"rule": self.rule},
        }
        if self.rule == "periodic":
            out["eventual"]["period"] = self.period
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "FamilySpec":
        p = int(data["p"])
        entries = []
        for item in data["annuli"]:
            depth = int(item["depth"])
            k = (p - 1) * p**depth
            gens = tuple(perms.from_cycles(perms.parse_cycles(g), k) for g in item.get("generators", []))
            entries.append(AnnulusEntry(depth, gens))
        ev = data.get("eventual", {"rule": "identity"})
        return cls(p, entries, ev.get("rule", "identity"), int(ev.get("period", 1)))

    @classmethod
    def load(cls, path) -> "FamilySpec":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def alt_generators(k: int) -> tuple[Perm, ...]:
    """3-cycles ``(0 1 i)``, ``i = 2..k-1``, generating Alt(k)."""
    return tuple(perms.from_cycles([[0, 1, i]], k) for i in range(2, k))


def make_alt_family(p: int, depths: Sequence[int], rule: str = "periodic", period: int = 1) -> FamilySpec:
    """F_n = Alt of the depth-``d_n`` sub-balls of X_n, generated by 3-cycles."""
    entries = []
    for n, d in enumerate(depths):
        k = (p - 1) * p**d
        if k < 3:
            raise FamilyError(f"annulus {n}: only {k} balls at depth {d}, need at least 3")
        entries.append(AnnulusEntry(d, alt_generators(k)))
    return FamilySpec(p, entries, rule, period)


def _three_cycle_certificate(balls: Sequence[Ball], gen: Perm) -> Certificate:
    cyc = perms.cycles(gen)
    if len(cyc) != 1 or len(cyc[0]) != 3:
        raise FamilyError("certificates are built for 3-cycle generators only")
    a, b, c = cyc[0]
    k = len(gen)
    swaps = [perms.from_cycles([[u, v]], k) for u, v in ((a, b), (a, c), (b, c))]
    for x in swaps:
        for y in swaps:
            if x == y:
                continue
            comm = perms.compose(perms.compose(x, y), perms.compose(perms.inverse(x), perms.inverse(y)))
            if comm == tuple(gen):
                table = GeneratorTable({"x": ball_permutation(balls, x), "y": ball_permutation(balls, y)})
                return Certificate(table, parse_word("x y x^-1 y^-1"))
    raise FamilyError(f"no transposition commutator found for {perms.to_cycle_string(gen)}")


def verify_certificate(family: FamilySpec, n: int, gen_index: int) -> bool:
    cert = family.certificate(n, gen_index)
    target = family.element_map(n, family.generators(n)[gen_index])
    return cert.evaluate() == target


def annulus_action(f: PLMap, balls: Sequence[Ball]) -> Perm | None:
    """The ball permutation by which ``f`` acts on ``balls``, if it is one.

    ``f`` must send each ball onto a ball of the list by the translation
    between their canonical residues; otherwise ``None``.
    """
    pos = {b._t: i for i, b in enumerate(balls)}
    img = []
    for b in balls:
        pc = f.index.containing(b)
        if pc is None:
            if f.index.has_inside(b):
                return None
            img.append(pos[b._t])
            continue
        if pc.slope_exp != 0:
            return None
        j = pos.get(b.affine_image(0, pc.translation)._t)
        if j is None or pc.translation != balls[j].residue - b.residue:
            return None
        img.append(j)
    if len(set(img)) != len(img):
        return None
    return tuple(img)


def rescale(f: PLMap, shift: int) -> PLMap:
    """Conjugate of ``f`` by ``x -> p**-shift x`` (moves Z_p onto p^-shift Z_p)."""
    zero = PScalar.zero(f.p)
    pieces = [
        AffinePiece(pc.domain.affine_image(-shift, zero), pc.slope_exp, pc.translation.shift(-shift))
        for pc in f.pieces
    ]
    return canonicalize(pieces, f.p)


def commutator_certificate(x: PLMap, y: PLMap) -> Certificate:
    return Certificate(GeneratorTable({"x": x, "y": y}), parse_word("x y x^-1 y^-1"))


__all__ = [
    "AnnulusEntry",
    "Certificate",
    "FamilyError",
    "FamilySpec",
    "alt_generators",
    "annulus_action",
    "commutator",
    "commutator_certificate",
    "make_alt_family",
    "rescale",
    "sub_balls",
    "verify_certificate",
]
