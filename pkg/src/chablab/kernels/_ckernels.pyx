# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the table kernels in ``_fallback``."""
from libc.stdlib cimport malloc, free
from libc.string cimport memset


def closure(const int[:] table, int n, const unsigned char[:] seed):
    cdef bytearray out = bytearray(n)
    cdef unsigned char[:] inside = out
    cdef int *elems = <int *> malloc(n * sizeof(int))
    cdef int *gens = <int *> malloc(n * sizeof(int))
    cdef int ng = 0, top = 1, k = 0, x, y, i, base
    if elems == NULL or gens == NULL:
        free(elems); free(gens)
        raise MemoryError()
    try:
        for i in range(n):
            if seed[i]:
                gens[ng] = i
                ng += 1
        inside[0] = 1
        elems[0] = 0
        while k < top:
            x = elems[k]
            k += 1
            base = x * n
            for i in range(ng):
                y = table[base + gens[i]]
                if not inside[y]:
                    inside[y] = 1
                    elems[top] = y
                    top += 1
    finally:
        free(elems); free(gens)
    return out


def product_mask(const int[:] table, int n, const unsigned char[:] a, const unsigned char[:] b):
    cdef bytearray out = bytearray(n)
    cdef unsigned char[:] o = out
    cdef int i, j, base
    for i in range(n):
        if a[i]:
            base = i * n
            for j in range(n):
                if b[j]:
                    o[table[base + j]] = 1
    return out


def saturation_formula(const int[:] table, const int[:] inv, int n, const unsigned char[:] ambient,
                       const unsigned char[:] u, const unsigned char[:] h):
    cdef bytearray out = bytearray(ambient)
    cdef unsigned char[:] res = out
    cdef unsigned char *conj = <unsigned char *> malloc(n)
    cdef unsigned char *prod = <unsigned char *> malloc(n)
    cdef int *hs = <int *> malloc(n * sizeof(int))
    cdef int *cs = <int *> malloc(n * sizeof(int))
    cdef int nh = 0, nc, g, gi, x, a, c, i, base
    if conj == NULL or prod == NULL or hs == NULL or cs == NULL:
        free(conj); free(prod); free(hs); free(cs)
        raise MemoryError()
    try:
        for i in range(n):
            if h[i]:
                hs[nh] = i
                nh += 1
        for g in range(n):
            if not ambient[g]:
                continue
            gi = inv[g]
            memset(conj, 0, n)
            memset(prod, 0, n)
            for x in range(n):
                if u[x]:
                    conj[table[table[g * n + x] * n + gi]] = 1
            nc = 0
            for i in range(n):
                if conj[i]:
                    cs[nc] = i
                    nc += 1
            for a in range(nh):
                base = hs[a] * n
                for c in range(nc):
                    prod[table[base + cs[c]]] = 1
            for i in range(n):
                if res[i] and not prod[i]:
                    res[i] = 0
    finally:
        free(conj); free(prod); free(hs); free(cs)
    return out


def saturation_orbit(const int[:] table, const int[:] inv, int n, const unsigned char[:] ambient,
                     const unsigned char[:] u, const unsigned char[:] h):
    cdef bytearray out = bytearray(n)
    cdef unsigned char[:] o = out
    cdef int *coset = <int *> malloc(n * sizeof(int))
    cdef int *reps = <int *> malloc(n * sizeof(int))
    cdef int *orbit = <int *> malloc(n * sizeof(int))
    cdef int *stack = <int *> malloc(n * sizeof(int))
    cdef int m = 0, g, x, c, d, e, r, a, sp, lab = 0, k, base, ok
    if coset == NULL or reps == NULL or orbit == NULL or stack == NULL:
        free(coset); free(reps); free(orbit); free(stack)
        raise MemoryError()
    try:
        for g in range(n):
            coset[g] = -1
        for g in range(n):
            if ambient[g] and coset[g] < 0:
                reps[m] = g
                for x in range(n):
                    if u[x]:
                        coset[table[g * n + x]] = m
                m += 1
        for c in range(m):
            orbit[c] = -1
        for c in range(m):
            if orbit[c] >= 0:
                continue
            orbit[c] = lab
            sp = 0
            stack[sp] = c
            sp += 1
            while sp > 0:
                sp -= 1
                d = stack[sp]
                r = reps[d]
                for a in range(n):
                    if h[a]:
                        e = coset[table[a * n + r]]
                        if orbit[e] < 0:
                            orbit[e] = lab
                            stack[sp] = e
                            sp += 1
            lab += 1
        for k in range(n):
            if not ambient[k]:
                continue
            base = k * n
            ok = 1
            for c in range(m):
                if orbit[coset[table[base + reps[c]]]] != orbit[c]:
                    ok = 0
                    break
            o[k] = ok
    finally:
        free(coset); free(reps); free(orbit); free(stack)
    return out
