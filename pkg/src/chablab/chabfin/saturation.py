"""U-saturation of subgroups, towers and trunc-saturation maps.

``[H]_U`` is the set of elements preserving every H-orbit on the coset
space G/U.  Two independent routes compute it: the orbit definition and the
intersection ``H g U g^-1`` over g.  Every function takes an optional
``ambient`` subgroup A, in which case the computation happens inside A
(cosets A/U, g ranging over A); H and U must then lie in A.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .. import kernels
from .group import FiniteGroup, GroupError, Subgroup


def _prep(G: FiniteGroup, U: Subgroup, H: Subgroup, ambient: Optional[Subgroup]):
    ambient = ambient or G.whole
    if not (U <= ambient and H <= ambient):
        raise GroupError("U and H must lie in the ambient group")
    return ambient


def saturation_orbit(G: FiniteGroup, U: Subgroup, H: Subgroup, ambient: Optional[Subgroup] = None) -> Subgroup:
    """Elements k with ``k g U`` in the H-orbit of ``g U`` for every coset."""
    A = _prep(G, U, H, ambient)
    return Subgroup.from_mask(kernels.saturation_orbit(G.table, G.inv, G.n, A.mask(), U.mask(), H.mask()))


def saturation_formula(G: FiniteGroup, U: Subgroup, H: Subgroup, ambient: Optional[Subgroup] = None) -> Subgroup:
    """The intersection of the sets ``H g U g^-1`` over g in the ambient group."""
    A = _prep(G, U, H, ambient)
    return Subgroup.from_mask(kernels.saturation_formula(G.table, G.inv, G.n, A.mask(), U.mask(), H.mask()))


def saturation(G: FiniteGroup, U: Subgroup, H: Subgroup, ambient: Optional[Subgroup] = None,
               method: str = "formula") -> Subgroup:
    if method == "formula":
        return saturation_formula(G, U, H, ambient)
    if method == "orbit":
        return saturation_orbit(G, U, H, ambient)
    raise ValueError(f"unknown saturation method {method!r}")


def is_saturated(G: FiniteGroup, U: Subgroup, H: Subgroup, ambient: Optional[Subgroup] = None) -> bool:
    return saturation_formula(G, U, H, ambient) == H


def orbit_partition(G: FiniteGroup, U: Subgroup, H: Subgroup, ambient: Optional[Subgroup] = None) -> list[list[int]]:
    """H-orbits on the left cosets of U, as sorted lists of coset indices."""
    cosets = G.left_cosets(U, ambient)
    where = {}
    for k, c in enumerate(cosets):
        for x in c.elements():
            where[x] = k
    reps = [min(c.elements()) for c in cosets]
    label = [-1] * len(cosets)
    blocks = []
    for c in range(len(cosets)):
        if label[c] >= 0:
            continue
        block = {where[G.mul(h, reps[c])] for h in H.elements()}
        for d in block:
            label[d] = len(blocks)
        blocks.append(sorted(block))
    return blocks


def partition_fixer(G: FiniteGroup, U: Subgroup, blocks: Sequence[Sequence[int]], ambient: Optional[Subgroup] = None) -> Subgroup:
    """Elements of the ambient group mapping each block of cosets into itself."""
    A = ambient or G.whole
    cosets = G.left_cosets(U, A)
    where = {}
    for k, c in enumerate(cosets):
        for x in c.elements():
            where[x] = k
    reps = [min(c.elements()) for c in cosets]
    label = {}
    for b, block in enumerate(blocks):
        for c in block:
            label[c] = b
    if sorted(label) != list(range(len(cosets))):
        raise ValueError("blocks do not partition the coset space")
    keep = [k for k in A.elements() if all(label[where[G.mul(k, reps[c])]] == label[c] for c in range(len(cosets)))]
    return Subgroup.from_elements(G.n, keep)


def set_partitions(items: Sequence[int]):
    """All set partitions of ``items`` (restricted growth strings)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def saturation_table(G: FiniteGroup, Us: Sequence[Subgroup], Hs: Sequence[Subgroup], method: str = "formula",
                     threads: int = 1, ambient: Optional[Subgroup] = None) -> list[list[Subgroup]]:
    """``table[i][j] = [Hs[j]]_{Us[i]}``; row order is fixed whatever the thread count."""

    def row(U):
        return [saturation(G, U, H, ambient, method) for H in Hs]

    if threads <= 1:
        return [row(U) for U in Us]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(row, Us))


@dataclass(frozen=True)
class Tower:
    """``G_1 <= ... <= G_N = G`` with ``U_1 >= ... >= U_N = {1}``, ``U_i <= G_i``."""

    group: FiniteGroup
    G: tuple[Subgroup, ...]
    U: tuple[Subgroup, ...]

    def __post_init__(self):
        grp = self.group
        if len(self.G) != len(self.U) or not self.G:
            raise GroupError("a tower needs matching nonempty chains")
        for S in self.G + self.U:
            if not grp.is_subgroup(S):
                raise GroupError("tower entries must be subgroups")
        for i in range(len(self.G) - 1):
            if not self.G[i] <= self.G[i + 1]:
                raise GroupError(f"G_{i + 1} is not contained in G_{i + 2}")
            if not self.U[i + 1] <= self.U[i]:
                raise GroupError(f"U_{i + 2} is not contained in U_{i + 1}")
        for i in range(len(self.G)):
            if not self.U[i] <= self.G[i]:
                raise GroupError(f"U_{i + 1} is not contained in G_{i + 1}")
        if self.G[-1] != grp.whole or self.U[-1] != grp.trivial:
            raise GroupError("the top of the tower must be (G, {1})")

    @property
    def length(self) -> int:
        return len(self.G)

    def level(self, n: int) -> tuple[Subgroup, Subgroup]:
        if not 1 <= n <= self.length:
            raise IndexError(f"tower level {n} outside 1..{self.length}")
        return self.G[n - 1], self.U[n - 1]

    def to_json(self) -> dict:
        return {
            "G": [S.elements() for S in self.G],
            "U": [S.elements() for S in self.U],
        }

    @classmethod
    def from_json(cls, group: FiniteGroup, data) -> "Tower":
        return cls(
            group,
            tuple(group.subgroup(e) for e in data["G"]),
            tuple(group.subgroup(e) for e in data["U"]),
        )

    @classmethod
    def from_generators(cls, group: FiniteGroup, G_gens: Sequence[Iterable[int]], U_gens: Sequence[Iterable[int]]) -> "Tower":
        return cls(group, tuple(group.generate(list(g)) for g in G_gens), tuple(group.generate(list(u)) for u in U_gens))


def trunc_saturation(T: Tower, n: int, H: Subgroup, method: str = "formula") -> Subgroup:
    """``[H meet G_n]`` saturated with respect to U_n inside G_n."""
    Gn, Un = T.level(n)
    return saturation(T.group, Un, H & Gn, Gn, method)


def saturated_subgroups(G: FiniteGroup, U: Subgroup, subgroups: Iterable[Subgroup], ambient: Optional[Subgroup] = None) -> list[Subgroup]:
    A = ambient or G.whole
    return [H for H in subgroups if H <= A and is_saturated(G, U, H, A)]


def all_pairs(subgroups: Sequence[Subgroup]):
    return itertools.product(subgroups, repeat=2)
