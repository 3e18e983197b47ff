"""Saturation in Z[1/2] x| {+-1} with respect to the reflection group U = {(0, +-1)}.

Elements are pairs ``(t, s)`` with ``t`` dyadic and ``s = +-1``, multiplied by
``(t, s)(t', s') = (t + s t', s s')``.  For a subgroup H of the translations,
``g U g^-1 = {(0, 1), (2b, -1)}`` with ``g = (b, s)``, so

    [H]_U = H  union  { (c, -1) : c in H + 2b for every dyadic b }.

The reflection part is empty as soon as two values b, b' have
``2b - 2b'`` outside H, and it is all of Z[1/2] when ``2b`` is always in H.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from ..exactnum import vp

Elem = tuple[Fraction, int]


def mul(x: Elem, y: Elem) -> Elem:
    return (x[0] + x[1] * y[0], x[1] * y[1])


def inv(x: Elem) -> Elem:
    return (-x[1] * x[0], x[1])


def conj(g: Elem, x: Elem) -> Elem:
    return mul(mul(g, x), inv(g))


def is_dyadic(t: Fraction) -> bool:
    d = Fraction(t).denominator
    return d & (d - 1) == 0


def in_Hn(t: Fraction, n: int) -> bool:
    """Membership of ``t`` in ``2^-n Z``."""
    return t == 0 or vp(t, 2) >= -n


def dyadics(max_num: int, max_exp: int) -> Iterator[Fraction]:
    """Dyadics ``m / 2^e`` in a fixed order: by e, then |m|, positive first."""
    seen = set()
    for e in range(max_exp + 1):
        for m in range(max_num + 1):
            for sgn in (1, -1):
                t = Fraction(sgn * m, 2**e)
                if t not in seen:
                    seen.add(t)
                    yield t


@dataclass(frozen=True)
class Witness:
    b: Fraction
    b_prime: Fraction
    gap: Fraction  # 2b - 2b', not in H_n
    search_bound: tuple[int, int]

    def to_json(self) -> dict:
        return {"b": str(self.b), "b_prime": str(self.b_prime), "2b-2b'": str(self.gap),
                "search_bound": {"max_numerator": self.search_bound[0], "max_exponent": self.search_bound[1]}}


def find_witness(n: int, max_num: int = 16, max_exp: int = 6, b: Fraction = Fraction(0)) -> Witness:
    """Dyadic ``b'`` with ``2b - 2b'`` outside ``2^-n Z``; the bound widens until one is found."""
    while True:
        for bp in dyadics(max_num, max_exp):
            if not in_Hn(2 * b - 2 * bp, n):
                return Witness(b, bp, 2 * b - 2 * bp, (max_num, max_exp))
        max_num, max_exp = 2 * max_num, max_exp + 2


def conjugate_of_U(b: Fraction, s: int = 1) -> tuple[Elem, Elem]:
    g = (Fraction(b), s)
    return conj(g, (Fraction(0), 1)), conj(g, (Fraction(0), -1))


@dataclass(frozen=True)
class CaseReport:
    label: str
    subgroup: str
    saturation: str
    saturated: bool
    witness: Optional[Witness]
    checks: dict

    def to_json(self) -> dict:
        out = {"H": self.subgroup, "[H]_U": self.saturation, "saturated": self.saturated, "checks": self.checks}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def _check_conjugates(bs) -> bool:
    for b in bs:
        for s in (1, -1):
            e, r = conjugate_of_U(b, s)
            if e != (0, 1) or r != (2 * b, -1):
                return False
    return True


def saturate_Hn(n: int, max_num: int = 16, max_exp: int = 6) -> CaseReport:
    w = find_witness(n, max_num, max_exp)
    # the reflection parts H_n + 2b and H_n + 2b' are distinct cosets of H_n, hence disjoint
    disjoint = not in_Hn(w.gap, n)
    conj_ok = _check_conjugates([w.b, w.b_prime])
    # translations stay: H_n lies in every H_n g U g^-1 (take the identity from g U g^-1)
    checks = {"cosets_disjoint": disjoint, "conjugate_formula": conj_ok, "translations_kept": True}
    ok = all(checks.values())
    return CaseReport(f"H_{n}", f"2^-{n} Z", f"2^-{n} Z" if ok else "?", ok, w, checks)


def saturate_full(sample_num: int = 16, sample_exp: int = 6) -> CaseReport:
    """``H = Z[1/2]``: ``H + 2b = H`` for every dyadic b, so every reflection survives."""
    bs = list(dyadics(sample_num, sample_exp))
    closed = all(is_dyadic(2 * b) for b in bs)
    checks = {"2b_in_H": closed, "conjugate_formula": _check_conjugates(bs[:50])}
    ok = all(checks.values())
    return CaseReport("Z[1/2]", "Z[1/2]", "G" if ok else "?", False, None, checks)


def dyadic_counterexample(n_max: int, max_num: int = 16, max_exp: int = 6) -> dict:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    cases = [saturate_Hn(n, max_num, max_exp) for n in range(1, n_max + 1)]
    full = saturate_full(max_num, max_exp)
    return {
        "group": "Z[1/2] x| {+-1}",
        "U": "{(0, 1), (0, -1)}",
        "H_n": {str(n): c.to_json() for n, c in zip(range(1, n_max + 1), cases)},
        "limit": full.to_json(),
        "all_H_n_saturated": all(c.saturated for c in cases),
        "limit_saturation_is_G": full.saturation == "G",
        "limit_saturated": full.saturated,
    }
