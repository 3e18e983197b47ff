"""Pure-Python kernels over a multiplication table and element masks.

Subgroups are passed as ``bytearray``/``bytes`` masks of length ``n``; the
table is a flat sequence with ``table[i * n + j] = i * j``.
"""
from __future__ import annotations


def closure(table, n: int, seed) -> bytearray:
    """Mask of the subgroup generated by the elements flagged in ``seed``."""
    inside = bytearray(n)
    inside[0] = 1
    elems = [0]
    gens = [i for i in range(n) if seed[i]]
    k = 0
    while k < len(elems):
        x = elems[k]
        k += 1
        base = x * n
        for g in gens:
            y = table[base + g]
            if not inside[y]:
                inside[y] = 1
                elems.append(y)
    return inside


def product_mask(table, n: int, a, b) -> bytearray:
    """Mask of the set product ``A B``."""
    out = bytearray(n)
    bs = [j for j in range(n) if b[j]]
    for i in range(n):
        if a[i]:
            base = i * n
            for j in bs:
                out[table[base + j]] = 1
    return out


def saturation_formula(table, inv, n: int, ambient, u, h) -> bytearray:
    """``intersection over g in ambient of H g U g^-1``, restricted to ambient."""
    result = bytearray(ambient)
    hs = [i for i in range(n) if h[i]]
    us = [i for i in range(n) if u[i]]
    for g in range(n):
        if not ambient[g]:
            continue
        gi = inv[g]
        conj = bytearray(n)
        for x in us:
            conj[table[table[g * n + x] * n + gi]] = 1
        prod = bytearray(n)
        cs = [i for i in range(n) if conj[i]]
        for a in hs:
            base = a * n
            for c in cs:
                prod[table[base + c]] = 1
        for i in range(n):
            if result[i] and not prod[i]:
                result[i] = 0
    return result


def saturation_orbit(table, inv, n: int, ambient, u, h) -> bytearray:
    """Elements of ambient preserving every H-orbit on ambient/U (left cosets gU)."""
    coset = [-1] * n
    reps = []
    us = [i for i in range(n) if u[i]]
    for g in range(n):
        if ambient[g] and coset[g] < 0:
            c = len(reps)
            reps.append(g)
            for x in us:
                coset[table[g * n + x]] = c
    m = len(reps)
    orbit = [-1] * m
    hs = [i for i in range(n) if h[i]]
    o = 0
    for c in range(m):
        if orbit[c] >= 0:
            continue
        orbit[c] = o
        stack = [c]
        while stack:
            d = stack.pop()
            r = reps[d]
            for a in hs:
                e = coset[table[a * n + r]]
                if orbit[e] < 0:
                    orbit[e] = o
                    stack.append(e)
        o += 1
    out = bytearray(n)
    for k in range(n):
        if not ambient[k]:
            continue
        base = k * n
        ok = 1
        for c in range(m):
            if orbit[coset[table[base + reps[c]]]] != orbit[c]:
                ok = 0
                break
        out[k] = ok
    return out
