"""Eventually periodic sequences of finite permutations.

A :class:`Tail` stores ``n -> perm`` for ``n >= base`` as finitely many
explicit exceptions over an eventual rule: either the identity, or a pattern
of period ``T`` repeating from ``start`` on.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Callable, Iterable, Mapping

from . import perms
from .perms import Perm

SizeFn = Callable[[int], int]


@dataclass(frozen=True)
class Tail:
    exceptions: tuple[tuple[int, Perm], ...] = ()
    start: int = 0
    pattern: tuple[Perm, ...] = ()

    @classmethod
    def build(
        cls,
        exceptions: Mapping[int, Perm] | Iterable[tuple[int, Perm]] = (),
        pattern: Iterable[Perm] = (),
        start: int = 0,
    ) -> "Tail":
        exc = dict(exceptions)
        return cls(tuple(sorted((int(n), tuple(v)) for n, v in exc.items())), int(start), tuple(tuple(q) for q in pattern))

    def default(self, n: int, size: SizeFn) -> Perm:
        if self.pattern and n >= self.start:
            return self.pattern[(n - self.start) % len(self.pattern)]
        return perms.identity(size(n))

    def at(self, n: int, size: SizeFn) -> Perm:
        for k, v in self.exceptions:
            if k == n:
                return v
        return self.default(n, size)

    @property
    def period(self) -> int:
        return len(self.pattern)

    def horizon(self) -> int:
        """First index from which the sequence is given by the eventual rule."""
        last = self.exceptions[-1][0] + 1 if self.exceptions else 0
        return max(last, self.start if self.pattern else 0)

    def indices(self, lo: int) -> range:
        """Indices from ``lo`` that determine the whole sequence."""
        return range(lo, max(lo, self.horizon()) + max(1, self.period))

    def is_trivial(self) -> bool:
        return not self.exceptions and not self.pattern

    def normalize(self, base: int, size: SizeFn) -> "Tail":
        """Drop redundant data; the result depends only on the sequence from ``base``."""
        pattern = self.pattern
        start = self.start
        if pattern:
            # smallest period
            T = len(pattern)
            for d in range(1, T + 1):
                if T % d == 0 and all(pattern[i] == pattern[i % d] for i in range(T)):
                    pattern = pattern[:d]
                    break
            if all(perms.is_identity(q) for q in pattern):
                pattern = ()
        exc = {n: v for n, v in self.exceptions if n >= base}
        if pattern:
            start = max(start, base)
            # re-anchor the pattern at the (new) start
            shift = (start - self.start) % len(pattern)
            pattern = pattern[shift:] + pattern[:shift]
            while start > base:
                prev = start - 1
                cand = pattern[-1]
                if exc.get(prev, perms.identity(size(prev))) != cand:
                    break
                exc.pop(prev, None)
                pattern = pattern[-1:] + pattern[:-1]
                start = prev
        else:
            start = 0
        tmp = Tail((), start, pattern)
        exc = {n: v for n, v in exc.items() if v != tmp.default(n, size)}
        return Tail(tuple(sorted(exc.items())), start, pattern)

    def combine(self, other: "Tail", op: Callable[[Perm, Perm], Perm], base: int, size: SizeFn) -> "Tail":
        """Entry-wise ``op`` of two tails from ``base`` on."""
        if self.pattern or other.pattern:
            T = lcm(max(1, self.period), max(1, other.period))
            start = max(self.horizon(), other.horizon(), base)
            pattern = tuple(op(self.at(n, size), other.at(n, size)) for n in range(start, start + T))
        else:
            start, pattern = 0, ()
        top = max(self.horizon(), other.horizon(), base)
        exc = {}
        for n in range(base, top):
            exc[n] = op(self.at(n, size), other.at(n, size))
        return Tail.build(exc, pattern, start).normalize(base, size)

    def map(self, fn: Callable[[Perm], Perm], base: int, size: SizeFn) -> "Tail":
        return Tail.build(
            {n: fn(v) for n, v in self.exceptions}, [fn(q) for q in self.pattern], self.start
        ).normalize(base, size)

    def with_entries(self, entries: Mapping[int, Perm], base: int, size: SizeFn) -> "Tail":
        exc = dict(self.exceptions)
        exc.update(entries)
        return Tail.build(exc, self.pattern, self.start).normalize(base, size)

    def first_nontrivial(self, lo: int, size: SizeFn) -> int | None:
        for n in self.indices(lo):
            if not perms.is_identity(self.at(n, size)):
                return n
        return None

    def to_json(self, fmt: Callable[[int, Perm], str]) -> dict:
        out: dict = {"exceptions": {str(n): fmt(n, v) for n, v in self.exceptions}}
        if self.pattern:
            out["pattern"] = {
                "start": self.start,
                "period": [fmt(self.start + i, q) for i, q in enumerate(self.pattern)],
            }
        return out
