"""Permutation helpers: tuples on ``range(n)`` and finitary dicts on integers."""
from __future__ import annotations

import re
from collections import deque
from typing import Iterable, Mapping, Sequence

Perm = tuple[int, ...]

_CYCLE = re.compile(r"\(([^()]*)\)")


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(a: Sequence[int], b: Sequence[int]) -> Perm:
    """``a o b``: apply ``b`` first."""
    return tuple(a[i] for i in b)


def inverse(a: Sequence[int]) -> Perm:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def is_identity(a: Sequence[int]) -> bool:
    return all(i == j for i, j in enumerate(a))


def cycles(a: Sequence[int]) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for i in range(len(a)):
        if i in seen or a[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = a[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = a[j]
        out.append(tuple(cyc))
    return out


def parity(a: Sequence[int]) -> int:
    """0 for even, 1 for odd."""
    return sum(len(c) - 1 for c in cycles(a)) % 2


def is_even(a: Sequence[int]) -> bool:
    return parity(a) == 0


def parse_cycles(text: str) -> list[list[int]]:
    """``"(0 1 2)(3 4)"`` -> ``[[0, 1, 2], [3, 4]]``; commas are allowed."""
    text = text.strip()
    if not text or text in ("()", "id", "e"):
        return []
    found = _CYCLE.findall(text)
    if _CYCLE.sub("", text).strip():
        raise ValueError(f"malformed cycle notation {text!r}")
    out = []
    for body in found:
        pts = [int(t) for t in body.replace(",", " ").split()]
        if len(set(pts)) != len(pts):
            raise ValueError(f"repeated point in cycle ({body})")
        if len(pts) > 1:
            out.append(pts)
    return out


def from_cycles(cyc: Iterable[Sequence[int]], n: int, offset: int = 0) -> Perm:
    """Tuple permutation of ``range(n)`` from cycles on ``offset..offset+n-1``."""
    img = list(range(n))
    touched = set()
    for c in cyc:
        for k, x in enumerate(c):
            i = x - offset
            if not 0 <= i < n:
                raise ValueError(f"point {x} outside {offset}..{offset + n - 1}")
            if i in touched:
                raise ValueError(f"point {x} appears in two cycles")
            touched.add(i)
            img[i] = c[(k + 1) % len(c)] - offset
    return tuple(img)


def to_cycle_string(a: Sequence[int], offset: int = 0) -> str:
    cs = cycles(a)
    if not cs:
        return "()"
    return "".join("(" + " ".join(str(x + offset) for x in c) + ")" for c in cs)


def closure(gens: Iterable[Sequence[int]], n: int, limit: int | None = None) -> list[Perm]:
    """All elements of the group generated by ``gens`` (BFS order, identity first)."""
    gens = [tuple(g) for g in gens]
    start = identity(n)
    seen = {start: None}
    order = [start]
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(g, x)
            if y not in seen:
                seen[y] = None
                order.append(y)
                if limit is not None and len(order) > limit:
                    raise OverflowError(f"group exceeds {limit} elements")
                queue.append(y)
    return order


# finitary permutations of Z as {point: image} with only moved points stored

FinPerm = Mapping[int, int]


def fin_normalize(a: Mapping[int, int]) -> dict[int, int]:
    out = {int(k): int(v) for k, v in a.items() if k != v}
    if sorted(out) != sorted(out.values()):
        raise ValueError("not a permutation of its support")
    return out


def fin_apply(a: Mapping[int, int], x: int) -> int:
    return a.get(x, x)


def fin_compose(a: Mapping[int, int], b: Mapping[int, int]) -> dict[int, int]:
    """``a o b`` on finitary permutations."""
    pts = set(a) | set(b)
    out = {}
    for x in pts:
        y = a.get(b.get(x, x), b.get(x, x))
        if y != x:
            out[x] = y
    return out


def fin_inverse(a: Mapping[int, int]) -> dict[int, int]:
    return {v: k for k, v in a.items()}


def fin_parity(a: Mapping[int, int]) -> int:
    seen = set()
    total = 0
    for start in a:
        if start in seen:
            continue
        length = 0
        x = start
        while x not in seen:
            seen.add(x)
            x = a.get(x, x)
            length += 1
        total += length - 1
    return total % 2


def fin_from_cycles(cyc: Iterable[Sequence[int]]) -> dict[int, int]:
    out: dict[int, int] = {}
    for c in cyc:
        for k, x in enumerate(c):
            if x in out:
                raise ValueError(f"point {x} appears in two cycles")
            out[x] = c[(k + 1) % len(c)]
    return fin_normalize(out)


def fin_cycles(a: Mapping[int, int]) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for start in sorted(a):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        x = a[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = a[x]
        out.append(tuple(cyc))
    return out


def fin_to_string(a: Mapping[int, int]) -> str:
    cs = fin_cycles(a)
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cs) or "()"
