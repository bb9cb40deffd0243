"""Backtrack search over a stabilizer chain for conjugating elements.

Both searches walk the chain level by level choosing base images. For
``x^g = y`` the relation ``(q^x)^g = (q^g)^y`` means that fixing the image
of one point fixes the image of its whole ``x``-cycle, which must land on a
``y``-cycle of the same length. The chain base is built from one point per
``x``-cycle, longest cycles first, so a handful of choices pin ``g`` down.

A partial choice is pruned when some point ``q`` with a forced image
``f(q)`` can no longer be reached: the remaining freedom is an element ``s``
of the next stabilizer with ``g = s h``, so ``f(q)^(h^-1)`` must lie in the
orbit of ``q`` under that stabilizer.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from . import kernels
from .permcore import PermGroup, Permutation, StabilizerChain

__all__ = ["base_preference", "centralizer_search", "conjugating_element"]

log = logging.getLogger(__name__)


def base_preference(x: np.ndarray) -> list[int]:
    """One point from each cycle of ``x``, longest cycles first, then fixed points."""
    n = x.size
    seen = np.zeros(n, dtype=bool)
    reps = []
    for i in range(n):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = int(x[j])
            length += 1
        reps.append((-length, i))
    reps.sort()
    return [i for _, i in reps]


def _cycle_lengths(x: np.ndarray) -> np.ndarray:
    n = x.size
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        if out[i]:
            continue
        cyc = [i]
        j = int(x[i])
        while j != i:
            cyc.append(j)
            j = int(x[j])
        out[cyc] = len(cyc)
    return out


def _orbit_labels(gens: list[np.ndarray], n: int) -> np.ndarray:
    label = np.full(n, -1, dtype=np.int64)
    for start in range(n):
        if label[start] >= 0:
            continue
        label[start] = start
        stack = [start]
        while stack:
            a = stack.pop()
            for s in gens:
                b = int(s[a])
                if label[b] < 0:
                    label[b] = start
                    stack.append(b)
    return label


def _chain_for(G: PermGroup, x: np.ndarray) -> StabilizerChain:
    cache = G.__dict__.setdefault("_backtrack_chains", {})
    key = x.tobytes()
    ch = cache.get(key)
    if ch is None:
        if len(cache) > 64:
            cache.clear()
        ch = G.chain_with_base(base_preference(x))
        cache[key] = ch
    return ch


class _Search:
    """Packed search state for one pair ``(x, y)`` over one chain."""

    def __init__(self, chain: StabilizerChain, x: np.ndarray, y: np.ndarray):
        self.chain = chain
        self.x = np.ascontiguousarray(x, dtype=np.int32)
        self.y = np.ascontiguousarray(y, dtype=np.int32)
        self.n = n = chain.degree
        self.k = k = len(chain.base)
        self.xlen = _cycle_lengths(self.x)
        self.ylen = self.xlen if y is x else _cycle_lengths(self.y)
        labels = [_orbit_labels(chain.level_generators(j), n) for j in range(k)]
        labels.append(np.arange(n, dtype=np.int64))
        self.labels = np.stack(labels)
        self.base, self.in_orbit, _ = chain._pack()
        self.trans = chain.packed_transversals()
        self.img = np.full(n, -1, dtype=np.int64)
        self.used = np.zeros(n, dtype=np.bool_)
        self.nodes = 0

    def pin(self, points: Sequence[int]) -> None:
        """Force ``g`` to fix each point in ``points`` (and so its x-cycle)."""
        x = self.x
        for b in points:
            a = b
            while self.img[a] < 0:
                self.img[a] = a
                self.used[a] = True
                a = int(x[a])

    def clear(self) -> None:
        self.img[:] = -1
        self.used[:] = False

    def run(self, start: int, allowed: np.ndarray | None = None) -> np.ndarray | None:
        h0 = self.chain._ident
        if start == self.k:
            return h0 if np.array_equal(h0[self.x], self.y[h0]) else None
        if allowed is None:
            allowed = np.ones(self.n, dtype=np.bool_)
        found, g, nodes = kernels.backtrack_search(
            start, h0, self.img, self.used, allowed, self.base, self.in_orbit, self.trans,
            self.labels, self.x, self.y, self.xlen, self.ylen,
        )
        self.nodes += int(nodes)
        return g if found else None


def _orbit_reps_mask(n: int, gens: Sequence[Permutation]) -> np.ndarray:
    """Mask selecting the smallest point of every orbit of ``gens``."""
    lab = _orbit_labels([g.array for g in gens], n)
    return lab == np.arange(n)


def conjugating_element(
    G: PermGroup,
    x: Permutation,
    y: Permutation,
    *,
    y_centralizer: Sequence[Permutation] | None = None,
) -> Permutation | None:
    """Some ``g`` in ``G`` with ``x^g = y``, or None.

    Solutions form a coset ``g C_G(y)``; when generators of ``C_G(y)`` are
    supplied only one image per ``C_G(y)``-orbit is tried for the first base
    point.
    """
    if x.cycle_type() != y.cycle_type():
        return None
    if x == y:
        return G.identity()
    chain = _chain_for(G, x.array)
    s = _Search(chain, x.array, y.array)
    allowed = _orbit_reps_mask(s.n, y_centralizer) if y_centralizer else None
    g = s.run(0, allowed)
    log.debug("conjugator search: %d nodes", s.nodes)
    if g is None:
        return None
    g = Permutation._wrap(g)
    if x.conjugate(g) != y:  # pragma: no cover - guards the search itself
        raise AssertionError("backtrack produced a wrong conjugator")
    return g


def centralizer_search(G: PermGroup, x: Permutation) -> tuple[list[Permutation], int]:
    """Generators and order of ``C_G(x)``.

    Works bottom-up through the chain: at level ``l`` the centralizer of
    ``x`` inside the stabilizer of the first ``l`` base points is built from
    the one at level ``l+1`` by searching, for each base image not yet in
    the orbit of the known generators, for a centralizing element realising
    it. Images whose search fails are remembered together with their orbit.
    """
    xa = x.array
    chain = _chain_for(G, xa)
    s = _Search(chain, xa, xa)
    n, k = s.n, s.k
    found: list[np.ndarray] = []
    order = 1
    one = np.zeros(n, dtype=np.bool_)
    for l in range(k - 1, -1, -1):
        s.clear()
        s.pin(chain.base[:l])
        b = chain.base[l]
        level_gens = list(found)  # all found so far fix b_0..b_{l-1}
        reach = _orbit_of(b, level_gens)
        dead: set[int] = set()
        for gamma in chain.orbits[l]:
            if gamma in reach or gamma in dead:
                continue
            if s.xlen[gamma] != s.xlen[b]:
                dead.add(gamma)
                continue
            one[gamma] = True
            g = s.run(l, one)
            one[gamma] = False
            if g is None:
                dead.update(_orbit_of(gamma, level_gens))
            else:
                found.append(g)
                level_gens.append(g)
                reach = _orbit_of(b, level_gens)
        order *= len(reach)
    s.clear()
    log.debug("centralizer search: %d nodes, order %d", s.nodes, order)
    gens = [Permutation._wrap(g) for g in found]
    for g in gens:
        if not g.commutes_with(x):  # pragma: no cover - guards the search itself
            raise AssertionError("centralizer generator does not commute")
    return gens, order


def _orbit_of(point: int, gens: Sequence[np.ndarray]) -> set[int]:
    orbit = {point}
    stack = [point]
    while stack:
        a = stack.pop()
        for g in gens:
            c = int(g[a])
            if c not in orbit:
                orbit.add(c)
                stack.append(c)
    return orbit
