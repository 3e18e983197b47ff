"""Finite groups as multiplication tables, subgroups as bitmasks, subgroup lattices."""
from __future__ import annotations

import json
import os
from array import array
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Optional, Sequence

from .. import kernels, perms

DEFAULT_MAX_ORDER = 200


class GroupError(ValueError):
    pass


def max_order() -> int:
    return int(os.environ.get("CHABLAB_MAX_ORDER", DEFAULT_MAX_ORDER))


@dataclass(frozen=True)
class Subgroup:
    """A subset of ``range(n)`` stored as an int bitmask (bit i = element i)."""

    n: int
    bits: int

    @property
    def order(self) -> int:
        return self.bits.bit_count()

    def elements(self) -> list[int]:
        return [i for i in range(self.n) if self.bits >> i & 1]

    def __contains__(self, i: int) -> bool:
        return bool(self.bits >> i & 1)

    def __le__(self, other: "Subgroup") -> bool:  # type: ignore[override]
        return self.bits & ~other.bits == 0

    def __lt__(self, other: "Subgroup") -> bool:  # type: ignore[override]
        return self <= other and self.bits != other.bits

    def __and__(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.n, self.bits & other.bits)

    def mask(self) -> bytes:
        b = self.bits
        return bytes((b >> i) & 1 for i in range(self.n))

    @classmethod
    def from_mask(cls, mask) -> "Subgroup":
        bits = 0
        for i, v in enumerate(mask):
            if v:
                bits |= 1 << i
        return cls(len(mask), bits)

    @classmethod
    def from_elements(cls, n: int, elems: Iterable[int]) -> "Subgroup":
        bits = 0
        for i in elems:
            bits |= 1 << i
        return cls(n, bits)

    def sort_key(self) -> tuple[int, int]:
        return (self.order, self.bits)


class FiniteGroup:
    """Elements ``0..n-1`` with 0 the identity; ``table[i*n + j]`` is ``i*j``."""

    def __init__(self, table: Sequence[int], n: int, labels: Optional[Sequence] = None, name: str = "",
                 generators: Optional[Sequence[int]] = None, degree: Optional[int] = None):
        if n > max_order():
            raise GroupError(f"group order {n} exceeds the configured bound {max_order()}")
        self.n = n
        self.table = array("i", table)
        if len(self.table) != n * n:
            raise GroupError("table has the wrong size")
        self.labels = list(labels) if labels is not None else list(range(n))
        self.name = name
        self.generators = list(generators) if generators is not None else list(range(1, n))
        self.degree = degree
        inv = array("i", [-1] * n)
        for i in range(n):
            row = self.table[i * n:(i + 1) * n]
            if sorted(row) != list(range(n)):
                raise GroupError(f"row {i} is not a permutation")
            if self.table[i] != i or self.table[i * n] != i:
                raise GroupError("element 0 is not the identity")
            inv[i] = row.index(0)
        self.inv = inv
        self._check_associative()
        self._conj: Optional[list[list[int]]] = None

    def _check_associative(self) -> None:
        # checking (a b) g = a (b g) for generators g suffices once rows are permutations
        n, t = self.n, self.table
        for g in self.generators:
            for a in range(n):
                for b in range(n):
                    if t[t[a * n + b] * n + g] != t[a * n + t[b * n + g]]:
                        raise GroupError("table is not associative")
        whole = self.closure_bits(self.generators)
        if whole.order != n:
            raise GroupError("generators do not generate the group")

    # construction

    @classmethod
    def from_elements(cls, elements: Sequence[Hashable], mul: Callable, name: str = "",
                      generators: Optional[Sequence[Hashable]] = None, degree: Optional[int] = None) -> "FiniteGroup":
        index = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        table = []
        for a in elements:
            for b in elements:
                c = mul(a, b)
                if c not in index:
                    raise GroupError("elements are not closed under the product")
                table.append(index[c])
        gens = [index[g] for g in generators] if generators is not None else None
        return cls(table, n, elements, name, gens, degree)

    @classmethod
    def generated(cls, gens: Sequence[Hashable], mul: Callable, identity: Hashable, name: str = "",
                  limit: Optional[int] = None, degree: Optional[int] = None) -> "FiniteGroup":
        """Close ``gens`` under ``mul`` (BFS, identity first)."""
        limit = max_order() if limit is None else limit
        seen = {identity: None}
        order = [identity]
        queue = deque([identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen[y] = None
                    order.append(y)
                    if len(order) > limit:
                        raise GroupError(f"group exceeds {limit} elements")
                    queue.append(y)
        return cls.from_elements(order, mul, name, gens, degree)

    @classmethod
    def from_permutations(cls, gens: Sequence[Sequence[int]], degree: Optional[int] = None, name: str = "") -> "FiniteGroup":
        gens = [tuple(g) for g in gens]
        if degree is None:
            degree = max((len(g) for g in gens), default=1)
        gens = [g + tuple(range(len(g), degree)) for g in gens]
        return cls.generated(gens, perms.compose, perms.identity(degree), name, degree=degree)

    @classmethod
    def from_cycle_strings(cls, gens: Sequence[str], degree: Optional[int] = None, name: str = "") -> "FiniteGroup":
        cyc = [perms.parse_cycles(g) for g in gens]
        if degree is None:
            degree = 1 + max((x for c in cyc for cy in c for x in cy), default=0)
        return cls.from_permutations([perms.from_cycles(c, degree) for c in cyc], degree, name)

    @classmethod
    def from_table(cls, rows: Sequence[Sequence[int]], name: str = "") -> "FiniteGroup":
        n = len(rows)
        flat = [int(x) for r in rows for x in r]
        if any(len(r) != n for r in rows):
            raise GroupError("table is not square")
        return cls(flat, n, None, name)

    def to_json(self) -> dict:
        if self.degree is not None:
            return {
                "name": self.name,
                "degree": self.degree,
                "generators": [perms.to_cycle_string(self.labels[g]) for g in self.generators],
            }
        return {"name": self.name, "table": [list(self.table[i * self.n:(i + 1) * self.n]) for i in range(self.n)]}

    @classmethod
    def from_json(cls, data: Mapping) -> "FiniteGroup":
        name = data.get("name", "")
        if "table" in data:
            return cls.from_table(data["table"], name)
        if "generators" in data:
            return cls.from_cycle_strings(data["generators"], data.get("degree"), name)
        raise GroupError("group JSON needs 'generators' or 'table'")

    @classmethod
    def load(cls, path) -> "FiniteGroup":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.n})"

    # arithmetic

    def mul(self, a: int, b: int) -> int:
        return self.table[a * self.n + b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.table[self.table[g * self.n + x] * self.n + self.inv[g]]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return all(self.mul(a, b) == self.mul(b, a) for a in self.generators for b in self.generators)

    def _conj_rows(self) -> list[list[int]]:
        if self._conj is None:
            self._conj = [[self.conj(g, x) for x in range(self.n)] for g in range(self.n)]
        return self._conj

    # subgroups

    @property
    def trivial(self) -> Subgroup:
        return Subgroup(self.n, 1)

    @property
    def whole(self) -> Subgroup:
        return Subgroup(self.n, (1 << self.n) - 1)

    def closure_bits(self, elems: Iterable[int]) -> Subgroup:
        seed = bytearray(self.n)
        for e in elems:
            seed[e] = 1
        return Subgroup.from_mask(kernels.closure(self.table, self.n, seed))

    def generate(self, *parts) -> Subgroup:
        """Subgroup generated by element lists and/or subgroups."""
        elems: list[int] = []
        for part in parts:
            if isinstance(part, Subgroup):
                elems.extend(part.elements())
            elif isinstance(part, int):
                elems.append(part)
            else:
                elems.extend(part)
        return self.closure_bits(elems)

    def subgroup(self, elems: Iterable[int]) -> Subgroup:
        """Validated subgroup from its full element list."""
        s = Subgroup.from_elements(self.n, elems)
        if self.closure_bits(s.elements()) != s:
            raise GroupError("elements do not form a subgroup")
        return s

    def is_subgroup(self, s: Subgroup) -> bool:
        return self.closure_bits(s.elements()) == s

    def conjugate(self, H: Subgroup, g: int) -> Subgroup:
        row = self._conj_rows()[g]
        bits = 0
        for x in H.elements():
            bits |= 1 << row[x]
        return Subgroup(self.n, bits)

    def is_normal(self, N: Subgroup, ambient: Optional[Subgroup] = None) -> bool:
        ambient = ambient or self.whole
        return all(self.conjugate(N, g) == N for g in ambient.elements())

    def normalizer(self, H: Subgroup) -> Subgroup:
        return Subgroup.from_elements(self.n, (g for g in range(self.n) if self.conjugate(H, g) == H))

    def product_set(self, A: Subgroup, B: Subgroup) -> Subgroup:
        """The set ``A B`` (a Subgroup only when it is one)."""
        return Subgroup.from_mask(kernels.product_mask(self.table, self.n, A.mask(), B.mask()))

    def left_cosets(self, U: Subgroup, ambient: Optional[Subgroup] = None) -> list[Subgroup]:
        ambient = ambient or self.whole
        seen = 0
        out = []
        for g in ambient.elements():
            if seen >> g & 1:
                continue
            c = Subgroup.from_elements(self.n, (self.mul(g, u) for u in U.elements()))
            seen |= c.bits
            out.append(c)
        return out

    def cyclic_subgroups(self) -> list[Subgroup]:
        found = {self.closure_bits([g]) for g in range(self.n)}
        return sorted(found, key=Subgroup.sort_key)


def subgroup_lattice(G: FiniteGroup) -> list[Subgroup]:
    """All subgroups of G, by repeatedly joining with cyclic subgroups."""
    if G.n > max_order():
        raise GroupError(f"group order {G.n} exceeds the configured bound {max_order()}")
    cyclic = G.cyclic_subgroups()
    found = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        new = []
        for S in frontier:
            for C in cyclic:
                if C <= S:
                    continue
                J = G.closure_bits(S.elements() + C.elements())
                if J not in found:
                    found.add(J)
                    new.append(J)
        frontier = new
    return sorted(found, key=Subgroup.sort_key)


class SubgroupLattice:
    """The subgroups of a finite group with their conjugacy classes."""

    def __init__(self, G: FiniteGroup):
        self.group = G
        self.subgroups = subgroup_lattice(G)
        self.index = {H: i for i, H in enumerate(self.subgroups)}
        self._conj_index: list[list[int]] = []
        classes: list[list[int]] = []
        class_of = [-1] * len(self.subgroups)
        for i, H in enumerate(self.subgroups):
            if class_of[i] >= 0:
                continue
            members = sorted({self.index[G.conjugate(H, g)] for g in range(G.n)})
            for j in members:
                class_of[j] = len(classes)
            classes.append(members)
        self.classes = classes
        self.class_of = class_of

    def __len__(self):
        return len(self.subgroups)

    def __iter__(self):
        return iter(self.subgroups)

    def conjugation_action(self) -> list[list[int]]:
        """``action[g][i]`` = index of ``g H_i g^-1``."""
        if not self._conj_index:
            G = self.group
            self._conj_index = [[self.index[G.conjugate(H, g)] for H in self.subgroups] for g in range(G.n)]
        return self._conj_index

    def normal_subgroups(self) -> list[Subgroup]:
        return [self.subgroups[c[0]] for c in self.classes if len(c) == 1]

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges (i, j): H_i is maximal in H_j."""
        subs = self.subgroups
        out = []
        for j, K in enumerate(subs):
            below = [i for i, H in enumerate(subs) if H < K]
            for i in below:
                H = subs[i]
                if not any(H < subs[m] and subs[m] < K for m in below):
                    out.append((i, j))
        return out

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "order": self.group.n,
            "subgroups": [{"order": H.order, "elements": H.elements()} for H in self.subgroups],
            "classes": self.classes,
        }


def quotient_group(G: FiniteGroup, N: Subgroup, ambient: Optional[Subgroup] = None) -> tuple[FiniteGroup, list[int]]:
    """``ambient / N`` as a table group plus the map element -> coset index (-1 outside)."""
    ambient = ambient or G.whole
    if not N <= ambient or not G.is_normal(N, ambient):
        raise GroupError("quotient needs a normal subgroup of the ambient group")
    cosets = G.left_cosets(N, ambient)
    which = [-1] * G.n
    for k, c in enumerate(cosets):
        for x in c.elements():
            which[x] = k
    reps = [min(c.elements()) for c in cosets]
    m = len(cosets)
    table = [which[G.mul(reps[a], reps[b])] for a in range(m) for b in range(m)]
    name = f"{G.name}/N" if G.name else ""
    return FiniteGroup(table, m, reps, name), which


def image_subgroup(which: Sequence[int], Q: FiniteGroup, H: Subgroup) -> Subgroup:
    return Subgroup.from_elements(Q.n, {which[x] for x in H.elements() if which[x] >= 0})


def preimage_subgroup(which: Sequence[int], n: int, K: Subgroup) -> Subgroup:
    return Subgroup.from_elements(n, (x for x in range(n) if which[x] >= 0 and which[x] in K))
