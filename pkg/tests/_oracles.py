"""Independent brute-force helpers used as test oracles.

They work on plain tuples and share no code with the package.
"""

from __future__ import annotations

from collections import deque


def mul(a: tuple, b: tuple) -> tuple:
    """Apply ``a`` first, then ``b``."""
    return tuple(b[i] for i in a)


def inv(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def closure(gens: list[tuple], limit: int = 200_000) -> set[tuple]:
    n = len(gens[0])
    e = tuple(range(n))
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                if len(seen) > limit:
                    raise ValueError("closure too large")
                queue.append(y)
    return seen


def order(a: tuple) -> int:
    e = tuple(range(len(a)))
    k, x = 1, a
    while x != e:
        x = mul(x, a)
        k += 1
    return k


def conj(t: tuple, g: tuple) -> tuple:
    return mul(mul(inv(g), t), g)


def component(C: set[tuple], t: tuple, p: int) -> set[tuple]:
    """Component of ``t`` in GG(C) by direct search over ``C``."""
    def adjacent(x, y):
        if x == y or mul(x, y) != mul(y, x):
            return False
        return mul(x, inv(y)) in C or (p != 2 and mul(inv(x), y) in C)

    seen = {t}
    queue = deque([t])
    while queue:
        x = queue.popleft()
        for y in C:
            if y not in seen and adjacent(x, y):
                seen.add(y)
                queue.append(y)
    return seen


def setwise_stabilizer_order(elements: set[tuple], S: set[tuple]) -> int:
    return sum(1 for g in elements if {conj(s, g) for s in S} == S)

