"""Seeded random objects for experiments and tests."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .plgroup.family import FamilySpec, rescale
from .plgroup.gf import GFElement
from .plgroup.words import Word, evaluate_word, lambda_table, random_word
from .tails import Tail


def rng_from(seed: Optional[int]) -> random.Random:
    return random.Random(seed)


def random_rational(rng: random.Random, p: int, span: int = 1000, max_shift: int = 12) -> Fraction:
    """A rational with a random p-power factor and a denominator prime to p (sometimes)."""
    num = rng.randrange(-span, span + 1)
    den = rng.choice([1, 1, 1, p + 1, 2 * p + 1, 7])
    if den % p == 0:
        den += 1
    return Fraction(num, den) * Fraction(p) ** rng.randrange(-max_shift, max_shift + 1)


def random_zp_rational(rng: random.Random, p: int, span: int = 1000) -> Fraction:
    den = rng.choice([1, 1, p + 1, 2 * p + 1])
    if den % p == 0:
        den += 1
    return Fraction(rng.randrange(-span, span + 1), den)


def random_lambda_word(rng: random.Random, max_len: int, names: Sequence[str] = ("s", "t", "a")) -> Word:
    return random_word(rng, list(names), max_len)


def random_unit(family: FamilySpec, n: int, rng: random.Random, horizon: int = 6) -> GFElement:
    """A random element of U_n = prod_{k >= n} F_k (finite exceptions, periodic pattern)."""
    exc = {k: rng.choice(family.elements(k)) for k in range(n, n + horizon)}
    start = max(n + horizon, family.stable_from)
    period = max(1, family.period)
    pattern = [rng.choice(family.elements(start + i)) for i in range(period)]
    return GFElement(family, None, 0, Tail.build(exc, pattern, start))


def random_gf_element(family: FamilySpec, rng: random.Random, max_level: int = 3, word_len: int = 6,
                      horizon: int = 6) -> GFElement:
    """Rescaled random Lambda_p word as head, random F_n entries as tail."""
    p = family.p
    N = rng.randint(0, max_level)
    head = rescale(evaluate_word(random_lambda_word(rng, word_len), lambda_table(p)), N)
    tail_part = random_unit(family, N, rng, horizon)
    _, tail = tail_part.raised(N)
    return GFElement(family, head, N, tail)
