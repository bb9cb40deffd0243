"""Write generators of the E8 Weyl group, acting on the 240 roots, as a GAP list.

Usage (from the repository root)::

    python3 tools/e8_roots.py

Produces ``tools/e8gens.g`` for ``tools/build_groups.g``. Roots are stored
with doubled coordinates so that every entry is an integer.
"""

from __future__ import annotations

import itertools
from pathlib import Path

import numpy as np

# Bourbaki simple roots, doubled coordinates
SIMPLE = [
    (1, -1, -1, -1, -1, -1, -1, 1),
    (2, 2, 0, 0, 0, 0, 0, 0),
    (-2, 2, 0, 0, 0, 0, 0, 0),
    (0, -2, 2, 0, 0, 0, 0, 0),
    (0, 0, -2, 2, 0, 0, 0, 0),
    (0, 0, 0, -2, 2, 0, 0, 0),
    (0, 0, 0, 0, -2, 2, 0, 0),
    (0, 0, 0, 0, 0, -2, 2, 0),
]


def roots() -> list[tuple[int, ...]]:
    out = []
    for i, j in itertools.combinations(range(8), 2):
        for si, sj in itertools.product((2, -2), repeat=2):
            v = [0] * 8
            v[i], v[j] = si, sj
            out.append(tuple(v))
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            out.append(signs)
    return out


def reflections(R: list[tuple[int, ...]]) -> list[list[int]]:
    """Images of the roots under each simple reflection ``v - 2(v.a)/(a.a) a``."""
    index = {r: i for i, r in enumerate(R)}
    V = np.array(R)
    gens = []
    for a in map(np.array, SIMPLE):
        # a.a = 8 in doubled coordinates
        gens.append([index[tuple(v - (2 * int(v @ a) // 8) * a)] for v in V])
    return gens


def main() -> None:
    R = roots()
    assert len(R) == 240
    body = [",".join(str(x + 1) for x in g) for g in reflections(R)]
    lists = ",\n".join(f"PermList([{b}])" for b in body)
    Path("tools/e8gens.g").write_text(f"E8gens := [\n{lists}];\n")
    print(f"wrote tools/e8gens.g: {len(SIMPLE)} generators on {len(R)} roots")


if __name__ == "__main__":
    main()
