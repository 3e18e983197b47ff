"""URS and IRS of finite groups, and pushforwards along trunc-saturation maps.

For a finite group Sub(G) is discrete: a URS is a conjugacy class of
subgroups and the ergodic IRS are the uniform measures on those classes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .group import FiniteGroup, GroupError, Subgroup, SubgroupLattice, image_subgroup, preimage_subgroup, quotient_group
from .saturation import Tower, is_saturated, trunc_saturation


@dataclass(frozen=True)
class URS:
    members: tuple[Subgroup, ...]
    trivial: bool  # the class {{1}} or {G}

    @property
    def order(self) -> int:
        return self.members[0].order

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "size": len(self.members),
            "trivial": self.trivial,
            "members": [H.elements() for H in self.members],
        }


def urs_list(G: FiniteGroup, lattice: Optional[SubgroupLattice] = None) -> list[URS]:
    lat = lattice or SubgroupLattice(G)
    out = []
    for cls in lat.classes:
        members = tuple(lat.subgroups[i] for i in cls)
        trivial = len(members) == 1 and members[0] in (G.trivial, G.whole)
        out.append(URS(members, trivial))
    return out


@dataclass(frozen=True)
class InvariantMeasure:
    """Finitely supported probability measure on the subgroups of a group of order n."""

    n: int
    weights: tuple[tuple[Subgroup, Fraction], ...] = field(default=())

    @classmethod
    def build(cls, n: int, weights: Mapping[Subgroup, Fraction]) -> "InvariantMeasure":
        w = {}
        for H, x in weights.items():
            x = Fraction(x)
            if x < 0:
                raise ValueError("negative weight")
            if x:
                w[H] = w.get(H, Fraction(0)) + x
        if sum(w.values(), Fraction(0)) != 1:
            raise ValueError("weights must sum to 1")
        return cls(n, tuple(sorted(w.items(), key=lambda kv: kv[0].sort_key())))

    @classmethod
    def dirac(cls, H: Subgroup) -> "InvariantMeasure":
        return cls.build(H.n, {H: Fraction(1)})

    @classmethod
    def uniform(cls, members) -> "InvariantMeasure":
        members = list(members)
        return cls.build(members[0].n, {H: Fraction(1, len(members)) for H in members})

    def as_dict(self) -> dict[Subgroup, Fraction]:
        return dict(self.weights)

    def support(self) -> list[Subgroup]:
        return [H for H, _ in self.weights]

    def weight(self, H: Subgroup) -> Fraction:
        return self.as_dict().get(H, Fraction(0))

    def is_invariant(self, G: FiniteGroup, ambient: Optional[Subgroup] = None) -> bool:
        A = ambient or G.whole
        d = self.as_dict()
        return all(d.get(G.conjugate(H, g), Fraction(0)) == x for H, x in self.weights for g in A.elements())

    def pushforward(self, fn) -> "InvariantMeasure":
        out: dict[Subgroup, Fraction] = {}
        for H, x in self.weights:
            K = fn(H)
            out[K] = out.get(K, Fraction(0)) + x
        n = next(iter(out)).n if out else self.n
        return InvariantMeasure.build(n, out)

    def to_json(self) -> dict:
        return {"support": [{"elements": H.elements(), "weight": str(x)} for H, x in self.weights]}


def irs_vertices(G: FiniteGroup, lattice: Optional[SubgroupLattice] = None) -> list[InvariantMeasure]:
    """Extreme invariant measures: one uniform measure per conjugacy class."""
    lat = lattice or SubgroupLattice(G)
    return [InvariantMeasure.uniform(lat.subgroups[i] for i in cls) for cls in lat.classes]


@dataclass(frozen=True)
class PushResult:
    saturated: InvariantMeasure  # on U_n-saturated subgroups of G_n
    quotient: InvariantMeasure  # the same measure read on Sub(G_n / U_n)
    quotient_group: FiniteGroup
    coset_of: tuple[int, ...]
    verified: bool


def saturated_push(T: Tower, n: int, mu: InvariantMeasure) -> PushResult:
    """Push ``mu`` along the trunc-saturation map and read it on the quotient.

    For normal U_n the U_n-saturated subgroups of G_n are the subgroups
    containing U_n, which correspond to subgroups of G_n/U_n.
    """
    G = T.group
    Gn, Un = T.level(n)
    if not G.is_normal(Un, Gn):
        raise GroupError(f"U_{n} is not normal in G_{n}")
    sat = mu.pushforward(lambda H: trunc_saturation(T, n, H))
    Q, which = quotient_group(G, Un, Gn)
    quot = sat.pushforward(lambda H: image_subgroup(which, Q, H))
    ok = all(Un <= H and H <= Gn and is_saturated(G, Un, H, Gn) for H in sat.support())
    ok = ok and sat.is_invariant(G, Gn) and quot.is_invariant(Q)
    ok = ok and all(preimage_subgroup(which, G.n, K) in set(sat.support()) for K in quot.support())
    return PushResult(sat, quot, Q, tuple(which), ok)


def lift_from_quotient(T: Tower, n: int, nu: InvariantMeasure) -> InvariantMeasure:
    """Inverse of the quotient identification: K -> its preimage in G_n."""
    G = T.group
    Gn, Un = T.level(n)
    Q, which = quotient_group(G, Un, Gn)
    if nu.n != Q.n:
        raise ValueError("measure is not on the quotient")
    return nu.pushforward(lambda K: preimage_subgroup(which, G.n, K))
