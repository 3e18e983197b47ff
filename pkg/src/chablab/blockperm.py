"""Locally elliptic permutation groups of Z built from block groups D_n.

Blocks are the intervals ``[k_n, k_{n+1} - 1]`` of Z_{>=0}.  An element is a
finitary permutation ``window`` of the integers below ``k_M`` together with a
tail giving the action ``d_n`` in D_n on every block ``n >= M``.
"""
from __future__ import annotations

import itertools
import json
import threading
from typing import Iterable, Mapping, Optional, Sequence

from . import perms
from .perms import Perm
from .tails import Tail


class BlockError(ValueError):
    pass


class BlockFamily:
    """Cut points ``k_0 = 0 < k_1 < ...`` and block groups ``D_n``.

    ``cutpoints`` lists ``k_0..k_C`` explicitly; later cut points advance by
    ``step``.  ``blocks`` lists generators (permutations of ``range(size)``,
    i.e. offsets from ``k_n``) for ``n < len(blocks)``; later blocks are
    trivial (``rule="identity"``) or repeat with ``period``.
    """

    def __init__(
        self,
        cutpoints: Sequence[int],
        step: int,
        blocks: Sequence[Sequence[Perm]],
        rule: str = "identity",
        period: int = 1,
    ):
        cut = [int(k) for k in cutpoints]
        if not cut or cut[0] != 0:
            raise BlockError("cut points must start at k_0 = 0")
        if any(b <= a for a, b in zip(cut, cut[1:])) or step < 1:
            raise BlockError("cut points must be strictly increasing")
        if rule not in ("identity", "periodic"):
            raise BlockError(f"unknown eventual rule {rule!r}")
        if rule == "periodic" and not 1 <= period <= len(blocks):
            raise BlockError("periodic rule needs 1 <= period <= number of explicit blocks")
        self.cutpoints = tuple(cut)
        self.step = int(step)
        self.blocks = tuple(tuple(tuple(g) for g in gens) for gens in blocks)
        self.rule = rule
        self.period = period if rule == "periodic" else 0
        self._cache: dict[int, tuple[list[Perm], frozenset]] = {}
        self._lock = threading.Lock()
        for n, gens in enumerate(self.blocks):
            for g in gens:
                if sorted(g) != list(range(self.size(n))):
                    raise BlockError(f"generator {g} does not permute block {n}")
                if not perms.is_even(g):
                    raise BlockError(f"generator {perms.to_cycle_string(g, self.k(n))} of D_{n} is odd")
        if rule == "periodic":
            for n in range(len(self.blocks), len(self.blocks) + period):
                if self.size(n) != self.size(self._source(n)):
                    raise BlockError("periodic blocks must keep their sizes")

    def __eq__(self, other):
        return isinstance(other, BlockFamily) and self._data() == other._data()

    def __hash__(self):
        return hash(self._data())

    def _data(self):
        return (self.cutpoints, self.step, self.blocks, self.rule, self.period)

    def __repr__(self):
        return f"BlockFamily(cutpoints={self.cutpoints}, step={self.step}, rule={self.rule})"

    def k(self, n: int) -> int:
        c = len(self.cutpoints) - 1
        if n <= c:
            return self.cutpoints[n]
        return self.cutpoints[c] + (n - c) * self.step

    def size(self, n: int) -> int:
        return self.k(n + 1) - self.k(n)

    def block_of(self, x: int) -> int:
        """Index n with ``k_n <= x < k_{n+1}`` (x >= 0)."""
        if x < 0:
            raise ValueError("negative integers are not in any block")
        c = len(self.cutpoints) - 1
        if x >= self.cutpoints[c]:
            return c + (x - self.cutpoints[c]) // self.step
        for n in range(c):
            if x < self.cutpoints[n + 1]:
                return n
        raise AssertionError("unreachable")

    def _source(self, n: int) -> int:
        m = len(self.blocks)
        if n < m:
            return n
        return m - self.period + (n - m) % self.period

    def generators(self, n: int) -> tuple[Perm, ...]:
        m = len(self.blocks)
        if n < m:
            return self.blocks[n]
        if self.rule == "identity":
            return ()
        return self.blocks[self._source(n)]

    @property
    def stable_from(self) -> int:
        return max(len(self.blocks), len(self.cutpoints) - 1)

    def _elements(self, n: int) -> tuple[list[Perm], frozenset]:
        m = len(self.blocks)
        key = n if n < m else (-1 - n if self.rule == "identity" else self._source(n))
        if self.rule == "identity" and n >= m:
            # trivial block groups; sizes may differ so do not share
            elems = [perms.identity(self.size(n))]
            return elems, frozenset(elems)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        elems = perms.closure(self.generators(n), self.size(n), limit=10**5)
        with self._lock:
            self._cache.setdefault(key, (elems, frozenset(elems)))
        return self._cache[key]

    def elements(self, n: int) -> list[Perm]:
        return self._elements(n)[0]

    def contains(self, n: int, perm: Perm) -> bool:
        return len(perm) == self.size(n) and tuple(perm) in self._elements(n)[1]

    def to_json(self) -> dict:
        out = {
            "cutpoints": list(self.cutpoints),
            "step": self.step,
            "blocks": [[perms.to_cycle_string(g, self.k(n)) for g in gens] for n, gens in enumerate(self.blocks)],
            "eventual": {"rule": self.rule},
        }
        if self.rule == "periodic":
            out["eventual"]["period"] = self.period
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "BlockFamily":
        cut = [int(k) for k in data["cutpoints"]]
        step = int(data.get("step", cut[-1] - cut[-2] if len(cut) > 1 else 1))
        ev = data.get("eventual", {"rule": "identity"})
        tmp = cls(cut, step, [], "identity")
        blocks = []
        for n, gens in enumerate(data.get("blocks", [])):
            blocks.append([perms.from_cycles(perms.parse_cycles(g), tmp.size(n), tmp.k(n)) for g in gens])
        return cls(cut, step, blocks, ev.get("rule", "identity"), int(ev.get("period", 1)))


def uniform_family(width: int, gens: Sequence[Perm], rule: str = "periodic") -> BlockFamily:
    """Blocks of constant ``width`` (``k_n = width * n``), each with the same D_n."""
    return BlockFamily([0, width], width, [list(gens)], rule, 1)


class BlockPermElement:
    """``window`` (finitary, supported below ``k_M``) times the tail from block M."""

    __slots__ = ("family", "M", "window", "tail")

    def __init__(self, family: BlockFamily, window: Mapping[int, int] | None = None, M: int = 0, tail: Optional[Tail] = None):
        window = perms.fin_normalize(window or {})
        if M < 0:
            raise BlockError("tail start must be nonnegative")
        bound = family.k(M)
        if any(x >= bound for x in window):
            raise BlockError(f"window moves points at or beyond k_{M} = {bound}")
        tail = (tail or Tail()).normalize(M, family.size)
        for n in tail.indices(M):
            d = tail.at(n, family.size)
            if not family.contains(n, d):
                raise BlockError(f"tail entry {perms.to_cycle_string(d, family.k(n))} is not in D_{n}")
        self.family = family
        self.M = M
        self.window = window
        self.tail = tail
        self._lower()

    @classmethod
    def _raw(cls, family, window, M, tail) -> "BlockPermElement":
        obj = object.__new__(cls)
        obj.family, obj.window, obj.M, obj.tail = family, window, M, tail
        obj._lower()
        return obj

    def _lower(self) -> None:
        fam = self.family
        while self.M > 0:
            n = self.M - 1
            lo, hi = fam.k(n), fam.k(self.M)
            d = tuple(self.window.get(x, x) - lo for x in range(lo, hi))
            if sorted(d) != list(range(hi - lo)) or not fam.contains(n, d):
                break
            self.window = {x: y for x, y in self.window.items() if x < lo}
            self.M = n
            self.tail = self.tail.with_entries({n: d}, n, fam.size)

    def block_action(self, n: int) -> Optional[Perm]:
        """Offset permutation of block n if g preserves it, else None."""
        fam = self.family
        if n >= self.M:
            return self.tail.at(n, fam.size)
        lo, hi = fam.k(n), fam.k(n + 1)
        d = tuple(self.window.get(x, x) - lo for x in range(lo, hi))
        return d if sorted(d) == list(range(hi - lo)) else None

    def __call__(self, x: int) -> int:
        x = int(x)
        if x < self.family.k(self.M):
            return self.window.get(x, x)
        n = self.family.block_of(x)
        lo = self.family.k(n)
        return lo + self.tail.at(n, self.family.size)[x - lo]

    def key(self):
        return (self.M, tuple(sorted(self.window.items())), self.tail)

    def __eq__(self, other):
        if not isinstance(other, BlockPermElement):
            return NotImplemented
        return self.family == other.family and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"BlockPermElement(window={perms.fin_to_string(self.window)}, M={self.M}, tail={self.tail})"

    def __mul__(self, other):
        return bp_compose(self, other)

    def __invert__(self):
        return bp_invert(self)

    def raised(self, M: int) -> tuple[dict[int, int], Tail]:
        if M < self.M:
            raise BlockError("can only raise the tail start")
        fam = self.family
        window = dict(self.window)
        for n in range(self.M, M):
            lo = fam.k(n)
            for i, j in enumerate(self.tail.at(n, fam.size)):
                if i != j:
                    window[lo + i] = lo + j
        return window, self.tail.normalize(M, fam.size)

    def to_json(self) -> dict:
        fam = self.family
        return {
            "window": perms.fin_to_string(self.window),
            "M": self.M,
            "tail": self.tail.to_json(lambda n, q: perms.to_cycle_string(q, fam.k(n))),
        }

    @classmethod
    def from_json(cls, family: BlockFamily, data: Mapping) -> "BlockPermElement":
        window = perms.fin_from_cycles(perms.parse_cycles(data.get("window", "")))
        M = int(data.get("M", 0))
        tdata = data.get("tail", {})

        def conv(n, text):
            return perms.from_cycles(perms.parse_cycles(text), family.size(n), family.k(n))

        exc = {int(n): conv(int(n), t) for n, t in tdata.get("exceptions", {}).items()}
        pattern, start = (), 0
        if "pattern" in tdata:
            start = int(tdata["pattern"]["start"])
            pattern = tuple(conv(start + i, t) for i, t in enumerate(tdata["pattern"]["period"]))
        if M == 0 and window:
            M = family.block_of(max(max(window), 0)) + 1
        return cls(family, window, M, Tail.build(exc, pattern, start))


def finitary(family: BlockFamily, cycle_text: str | Iterable[Sequence[int]]) -> BlockPermElement:
    """A finitary permutation (identity tail)."""
    cyc = perms.parse_cycles(cycle_text) if isinstance(cycle_text, str) else [list(c) for c in cycle_text]
    window = perms.fin_from_cycles(cyc)
    top = max(window, default=-1)
    M = family.block_of(top) + 1 if top >= 0 else 0
    return BlockPermElement(family, window, M)


def tail_only(family: BlockFamily, exceptions: Mapping[int, Perm] = (), pattern=(), start: int = 0) -> BlockPermElement:
    return BlockPermElement(family, {}, 0, Tail.build(exceptions, pattern, start))


def identity(family: BlockFamily) -> BlockPermElement:
    return BlockPermElement(family)


def bp_compose(g1: BlockPermElement, g2: BlockPermElement) -> BlockPermElement:
    """``g1 o g2`` (apply ``g2`` first)."""
    if g1.family != g2.family:
        raise BlockError("elements over different block families")
    fam = g1.family
    M = max(g1.M, g2.M)
    w1, t1 = g1.raised(M)
    w2, t2 = g2.raised(M)
    return BlockPermElement._raw(fam, perms.fin_compose(w1, w2), M, t1.combine(t2, perms.compose, M, fam.size))


def bp_invert(g: BlockPermElement) -> BlockPermElement:
    fam = g.family
    return BlockPermElement._raw(fam, perms.fin_inverse(g.window), g.M, g.tail.map(perms.inverse, g.M, fam.size))


def bp_in_G(g: BlockPermElement) -> bool:
    """Membership in the group generated by alt_f(Z) and the product of the D_n.

    Every representable element is a finitary ``window`` times an element of
    the product of the D_n; the D_n consist of even permutations, so the
    element lies in the generated group exactly when the window is even.
    """
    return perms.fin_parity(g.window) == 0


def parity_correction_search(g: BlockPermElement, extra_blocks: int = 1) -> Optional[dict[int, int]]:
    """Search corrections u in the direct sum of the D_n with ``window * u^-1`` even.

    Corrections range over all products of D_n elements for the blocks meeting
    the window (plus ``extra_blocks`` more).  Returns a witness remainder or
    None when no correction works.
    """
    fam = g.family
    top = g.M + extra_blocks
    blocks = [n for n in range(top) if fam.size(n) and len(fam.elements(n)) > 0]
    choices = [fam.elements(n) for n in blocks]
    for combo in itertools.product(*choices):
        u: dict[int, int] = {}
        for n, d in zip(blocks, combo):
            lo = fam.k(n)
            u.update({lo + i: lo + j for i, j in enumerate(d) if i != j})
        rem = perms.fin_compose(g.window, perms.fin_inverse(u))
        if perms.fin_parity(rem) == 0:
            return rem
    return None


def bp_in_Gn(g: BlockPermElement, n: int) -> bool:
    """True iff g is in G and acts on every block i >= n by an element of D_i."""
    if not bp_in_G(g):
        return False
    fam = g.family
    for i in range(n, max(n, g.M)):
        d = g.block_action(i)
        if d is None or not fam.contains(i, d):
            return False
    # blocks >= M carry D_i elements by construction
    return True


def bp_quotient(g: BlockPermElement, n: int) -> dict[int, int]:
    """Restriction of g to Z_{<k_n}: the quotient map G_n -> alt_f(Z_{<k_n})."""
    if not bp_in_Gn(g, n):
        raise BlockError(f"element is not in G_{n}")
    bound = g.family.k(n)
    window, _ = g.raised(max(n, g.M))
    return {x: y for x, y in window.items() if x < bound}


def bp_neighborhood_member(g: BlockPermElement, N: int) -> bool:
    """True iff g lies in U_N: fixes Z_{<k_N} and acts on blocks >= N inside D_n."""
    if not bp_in_Gn(g, N):
        return False
    bound = g.family.k(N)
    window, _ = g.raised(max(N, g.M))
    return not any(x < bound for x in window)


def bp_from_quotient(family: BlockFamily, q: Mapping[int, int], n: int) -> BlockPermElement:
    """The section alt_f(Z_{<k_n}) -> G_n with identity tail."""
    return BlockPermElement(family, q, n)


def load_family(path) -> BlockFamily:
    with open(path) as fh:
        return BlockFamily.from_json(json.load(fh))
