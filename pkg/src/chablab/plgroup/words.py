"""Words over named PL generators, their evaluation and the alpha-exponent index."""
from __future__ import annotations

import json
import re
from typing import Iterable, Iterator, Mapping, Sequence

from ..exactnum import Ball
from .plmap import PLMap, canonicalize, compose, invert, prefix_map, translation_on

ADDING_MACHINE = "a"

_TOKEN = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(?:\^([+-]?\d+))?$")


class WordParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class UnknownGenerator(KeyError):
    pass


Word = tuple[tuple[str, int], ...]


def parse_word(text: str, line: int | None = None) -> Word:
    """Parse whitespace separated ``gen^exp`` tokens (``gen`` means ``gen^1``)."""
    out = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if m is None:
            raise WordParseError(f"malformed token {tok!r}", line)
        exp = int(m.group(2)) if m.group(2) is not None else 1
        if exp:
            out.append((m.group(1), exp))
    return tuple(out)


def format_word(word: Word) -> str:
    return " ".join(g if e == 1 else f"{g}^{e}" for g, e in word)


def parse_word_file(text: str) -> list[Word]:
    """One word per line; blank lines are the empty word, ``#`` starts a comment.

    Lines holding only a comment are skipped.
    """
    words = []
    for i, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if "#" in raw and not body.strip():
            continue
        words.append(parse_word(body, line=i))
    return words


def inverse_word(word: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


def commutator_word(x: Word, y: Word) -> Word:
    return x + y + inverse_word(x) + inverse_word(y)


def free_reduce(word: Iterable[tuple[str, int]]) -> Word:
    out: list[tuple[str, int]] = []
    for g, e in word:
        if out and out[-1][0] == g:
            e += out.pop()[1]
        if e:
            out.append((g, e))
    return tuple(out)


class GeneratorTable(Mapping[str, PLMap]):
    """Named PL generators with cached powers."""

    def __init__(self, generators: Mapping[str, PLMap]):
        self._gens = dict(generators)
        primes = {g.p for g in self._gens.values()}
        if len(primes) > 1:
            raise ValueError(f"generators over several primes: {sorted(primes)}")
        self.p = primes.pop() if primes else None
        self._powers: dict[tuple[str, int], PLMap] = {}

    def __getitem__(self, name: str) -> PLMap:
        return self._gens[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._gens)

    def __len__(self) -> int:
        return len(self._gens)

    def power(self, name: str, exp: int) -> PLMap:
        key = (name, exp)
        hit = self._powers.get(key)
        if hit is not None:
            return hit
        try:
            g = self._gens[name]
        except KeyError:
            raise UnknownGenerator(name) from None
        if exp == 1:
            val = g
        elif exp == -1:
            val = invert(g)
        elif exp == 0:
            val = PLMap.identity(g.p)
        else:
            half = self.power(name, exp // 2 if exp > 0 else -((-exp) // 2))
            val = compose(half, half)
            if exp % 2:
                val = compose(val, self.power(name, 1 if exp > 0 else -1))
        self._powers[key] = val
        return val

    def to_json(self) -> dict:
        return {name: g.to_json() for name, g in self._gens.items()}

    @classmethod
    def from_json(cls, data: Mapping) -> "GeneratorTable":
        return cls({name: PLMap.from_json(v) for name, v in data.items()})

    @classmethod
    def load(cls, path) -> "GeneratorTable":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def evaluate_word(word: Word, table: GeneratorTable, p: int | None = None) -> PLMap:
    """Value of ``g1^e1 g2^e2 ...`` as ``g1^e1 o g2^e2 o ...`` (rightmost acts first)."""
    p = p if p is not None else table.p
    result = PLMap.identity(p)
    for name, exp in word:
        if name not in table:
            raise UnknownGenerator(name)
        result = compose(result, table.power(name, exp))
    return result


def index_of_word(word: Word, alpha: str = ADDING_MACHINE) -> int:
    """Exponent sum of the adding machine in ``word``."""
    return sum(e for g, e in word if g == alpha)


def adding_machine(p: int) -> PLMap:
    return translation_on(Ball.zp(p), 1)


def vp_swap(p: int) -> PLMap:
    """Exchange of the first two children of Z_p; a prefix substitution."""
    c0, c1 = Ball.zp(p).children()[:2]
    return canonicalize([prefix_map(c0, c1), prefix_map(c1, c0)], p)


def vp_shift(p: int) -> PLMap:
    """A baker-type element of V_p moving between levels one and two.

    ``p Z_p`` is blown up onto itself one level coarser; the remaining pieces
    are matched in lexicographic order by prefix substitutions.
    """
    zp = Ball.zp(p)
    kids = zp.children()
    grand = kids[0].children()
    last = kids[p - 1].children()
    src = [grand[0]] + grand[1:] + kids[1:]
    dst = [kids[0]] + kids[1 : p - 1] + last
    return canonicalize([prefix_map(s, d) for s, d in zip(src, dst)], p)


def lambda_table(p: int) -> GeneratorTable:
    """Generators ``s``, ``t`` of V_p and the adding machine ``a``."""
    return GeneratorTable({"s": vp_swap(p), "t": vp_shift(p), ADDING_MACHINE: adding_machine(p)})


def random_word(rng, names: Sequence[str], max_len: int, min_len: int = 0) -> Word:
    n = rng.randint(min_len, max_len)
    return tuple((rng.choice(names), rng.choice((1, -1))) for _ in range(n))


def all_words(names: Sequence[str], length: int) -> Iterator[Word]:
    """Every word of exactly ``length`` letters from ``names`` and their inverses."""
    letters = [(g, e) for g in names for e in (1, -1)]

    def rec(prefix: Word, k: int):
        if k == 0:
            yield prefix
            return
        for letter in letters:
            yield from rec(prefix + (letter,), k - 1)

    yield from rec((), length)

