"""Every group of order at most 24, up to isomorphism (74 groups).

Most are metacyclic ``<a, b | a^m, b^n = a^t, b a b^-1 = a^r>`` or direct
products; the rest are given by explicit small constructions.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable

from .. import perms
from .group import FiniteGroup


def metacyclic(m: int, n: int, r: int, t: int = 0, name: str = "") -> FiniteGroup:
    """Elements ``a^i b^j`` (``i < m``, ``j < n``) with ``b a b^-1 = a^r`` and ``b^n = a^t``."""
    if pow(r, n, m) != 1 % m or (r * t - t) % m:
        raise ValueError("inconsistent metacyclic data")

    def mul(x, y):
        i, j = x
        k, l = y
        a = (i + pow(r, j, m) * k) % m
        s = j + l
        if s >= n:
            a, s = (a + t) % m, s - n
        return (a, s)

    return FiniteGroup.generated([(1 % m, 0), (0, 1 % n)], mul, (0, 0), name)


def cyclic(m: int) -> FiniteGroup:
    return metacyclic(m, 1, 1, 0, f"C{m}")


def dihedral(m: int) -> FiniteGroup:
    """Dihedral group of order 2m."""
    return metacyclic(m, 2, m - 1, 0, f"D{2 * m}")


def dicyclic(m: int) -> FiniteGroup:
    """Dicyclic group of order 4m (quaternion for m a power of 2)."""
    return metacyclic(2 * m, 2, 2 * m - 1, m, f"Dic{m}")


def direct_product(*groups: FiniteGroup, name: str = "") -> FiniteGroup:
    idx = [range(G.n) for G in groups]

    def mul(x, y):
        return tuple(G.mul(a, b) for G, a, b in zip(groups, x, y))

    gens = []
    for k, G in enumerate(groups):
        for g in G.generators:
            e = [0] * len(groups)
            e[k] = g
            gens.append(tuple(e))
    ident = tuple(0 for _ in idx)
    return FiniteGroup.generated(gens, mul, ident, name or " x ".join(G.name for G in groups))


def abelian(*orders: int) -> FiniteGroup:
    return direct_product(*(cyclic(m) for m in orders), name=" x ".join(f"C{m}" for m in orders))


def perm_group(gens: list[str], degree: int, name: str) -> FiniteGroup:
    return FiniteGroup.from_cycle_strings(gens, degree, name)


def _matrix_group(gens, mod: int, name: str) -> FiniteGroup:
    def mul(x, y):
        (a, b), (c, d) = x
        (e, f), (g, h) = y
        return (((a * e + b * g) % mod, (a * f + b * h) % mod), ((c * e + d * g) % mod, (c * f + d * h) % mod))

    return FiniteGroup.generated(gens, mul, ((1, 0), (0, 1)), name)


def sl23() -> FiniteGroup:
    return _matrix_group([((1, 1), (0, 1)), ((0, 2), (1, 0))], 3, "SL(2,3)")


def _gauss_mul(x, y):
    # Gaussian integers as (re, im)
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gauss_add(x, y):
    return (x[0] + y[0], x[1] + y[1])


def pauli() -> FiniteGroup:
    """Group generated by the Pauli matrices (central product C4 o D8)."""

    def mul(x, y):
        (a, b), (c, d) = x
        (e, f), (g, h) = y
        m = _gauss_mul
        s = _gauss_add
        return ((s(m(a, e), m(b, g)), s(m(a, f), m(b, h))), (s(m(c, e), m(d, g)), s(m(c, f), m(d, h))))

    z, o, i, mo, mi = (0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)
    X = ((z, o), (o, z))
    Y = ((z, mi), (i, z))
    Z = ((o, z), (z, mo))
    return FiniteGroup.generated([X, Y, Z], mul, ((o, z), (z, o)), "Pauli")


def c2sq_rtimes_c4() -> FiniteGroup:
    """``<a, b, c | a^4, b^2, c^2, [a,b], [b,c], c a c^-1 = a b>``, order 16."""

    def mul(x, y):
        i, j, k = x
        i2, j2, k2 = y
        # c^k acts on a^i2 b^j2 as a^i2 b^(j2 + k i2)
        return ((i + i2) % 4, (j + j2 + k * i2) % 2, (k + k2) % 2)

    return FiniteGroup.generated([(1, 0, 0), (0, 1, 0), (0, 0, 1)], mul, (0, 0, 0), "C2^2 x| C4")


def c3_rtimes_d8() -> FiniteGroup:
    """``C3 x| D8`` where D8 acts through the quotient by a Klein four-subgroup."""

    def dmul(x, y):
        i, j = x
        k, l = y
        return ((i + (-1) ** j * k) % 4, (j + l) % 2)

    def mul(x, y):
        z, d = x
        z2, d2 = y
        sign = (-1) ** d[0]
        return ((z + sign * z2) % 3, dmul(d, d2))

    return FiniteGroup.generated([(1, (0, 0)), (0, (1, 0)), (0, (0, 1))], mul, (0, (0, 0)), "C3 x| D8")


def c3sq_rtimes_c2() -> FiniteGroup:
    """Generalised dihedral group of C3 x C3."""

    def mul(x, y):
        a, b, s = x
        c, d, t = y
        sg = -1 if s else 1
        return ((a + sg * c) % 3, (b + sg * d) % 3, (s + t) % 2)

    return FiniteGroup.generated([(1, 0, 0), (0, 1, 0), (0, 0, 1)], mul, (0, 0, 0), "C3^2 x| C2")


def alternating(k: int) -> FiniteGroup:
    gens = [perms.from_cycles([[0, 1, i]], k) for i in range(2, k)]
    return FiniteGroup.from_permutations(gens, k, f"A{k}")


def symmetric(k: int) -> FiniteGroup:
    gens = [perms.from_cycles([list(range(k))], k), perms.from_cycles([[0, 1]], k)]
    return FiniteGroup.from_permutations(gens, k, f"S{k}")


def _builders() -> dict[int, list[Callable[[], FiniteGroup]]]:
    Q8 = lambda: dicyclic(2)  # noqa: E731
    S3 = lambda: dihedral(3)  # noqa: E731
    return {
        1: [lambda: cyclic(1)],
        2: [lambda: cyclic(2)],
        3: [lambda: cyclic(3)],
        4: [lambda: cyclic(4), lambda: abelian(2, 2)],
        5: [lambda: cyclic(5)],
        6: [lambda: cyclic(6), S3],
        7: [lambda: cyclic(7)],
        8: [lambda: cyclic(8), lambda: abelian(4, 2), lambda: abelian(2, 2, 2), lambda: dihedral(4), Q8],
        9: [lambda: cyclic(9), lambda: abelian(3, 3)],
        10: [lambda: cyclic(10), lambda: dihedral(5)],
        11: [lambda: cyclic(11)],
        12: [
            lambda: cyclic(12),
            lambda: abelian(6, 2),
            lambda: dihedral(6),
            lambda: dicyclic(3),
            lambda: alternating(4),
        ],
        13: [lambda: cyclic(13)],
        14: [lambda: cyclic(14), lambda: dihedral(7)],
        15: [lambda: cyclic(15)],
        16: [
            lambda: cyclic(16),
            lambda: abelian(4, 4),
            lambda: c2sq_rtimes_c4(),
            lambda: metacyclic(4, 4, 3, 0, "C4 x| C4"),
            lambda: abelian(8, 2),
            lambda: metacyclic(8, 2, 5, 0, "M16"),
            lambda: dihedral(8),
            lambda: metacyclic(8, 2, 3, 0, "SD16"),
            lambda: dicyclic(4),
            lambda: abelian(4, 2, 2),
            lambda: direct_product(dihedral(4), cyclic(2)),
            lambda: direct_product(Q8(), cyclic(2)),
            lambda: pauli(),
            lambda: abelian(2, 2, 2, 2),
        ],
        17: [lambda: cyclic(17)],
        18: [
            lambda: dihedral(9),
            lambda: cyclic(18),
            lambda: direct_product(cyclic(3), S3()),
            lambda: c3sq_rtimes_c2(),
            lambda: abelian(6, 3),
        ],
        19: [lambda: cyclic(19)],
        20: [
            lambda: dicyclic(5),
            lambda: cyclic(20),
            lambda: metacyclic(5, 4, 2, 0, "F20"),
            lambda: dihedral(10),
            lambda: abelian(10, 2),
        ],
        21: [lambda: metacyclic(7, 3, 2, 0, "C7 x| C3"), lambda: cyclic(21)],
        22: [lambda: dihedral(11), lambda: cyclic(22)],
        23: [lambda: cyclic(23)],
        24: [
            lambda: metacyclic(3, 8, 2, 0, "C3 x| C8"),
            lambda: cyclic(24),
            lambda: sl23(),
            lambda: dicyclic(6),
            lambda: direct_product(cyclic(4), S3()),
            lambda: dihedral(12),
            lambda: direct_product(cyclic(2), dicyclic(3)),
            lambda: c3_rtimes_d8(),
            lambda: abelian(12, 2),
            lambda: direct_product(cyclic(3), dihedral(4)),
            lambda: direct_product(cyclic(3), Q8()),
            lambda: symmetric(4),
            lambda: direct_product(cyclic(2), alternating(4)),
            lambda: direct_product(abelian(2, 2), S3()),
            lambda: abelian(6, 2, 2),
        ],
    }


@lru_cache(maxsize=None)
def corpus(max_order: int = 24) -> tuple[FiniteGroup, ...]:
    """The bundled groups of order at most ``max_order`` (at most 24)."""
    if max_order > 24:
        raise ValueError("the corpus stops at order 24")
    out = []
    for n, builders in sorted(_builders().items()):
        if n <= max_order:
            for b in builders:
                G = b()
                if G.n != n:
                    raise AssertionError(f"{G.name} has order {G.n}, expected {n}")
                out.append(G)
    return tuple(out)


def by_name(name: str) -> FiniteGroup:
    special = {"S4": lambda: symmetric(4), "A4": lambda: alternating(4), "Q8": lambda: dicyclic(2),
               "S3": lambda: dihedral(3)}
    if name in special:
        return special[name]()
    for G in corpus():
        if G.name == name:
            return G
    raise KeyError(f"no group named {name!r} in the corpus")
