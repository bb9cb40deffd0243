"""Permutations, stabilizer chains and permutation groups.

Conventions used throughout the package:

* points are ``0 .. n-1`` internally and ``1 .. n`` in files and printed
  cycle notation;
* permutations act on the right, ``i^(pq) = (i^p)^q``, so ``compose(p, q)``
  applies ``p`` first and ``p * q`` is the same product;
* conjugation is ``t^g = g^-1 t g``.
"""

from __future__ import annotations

import itertools
import math
import random
import re
from collections.abc import Iterable, Iterator, Sequence

import numpy as np

from . import kernels

__all__ = [
    "PermGroup",
    "Permutation",
    "StabilizerChain",
    "build_bsgs",
    "compose",
    "element_order",
    "format_cycles",
    "group_order",
    "inverse",
    "membership",
    "normal_closure",
    "parse_cycles",
    "random_element",
]

_DTYPE = np.int32


def _as_array(images) -> np.ndarray:
    if isinstance(images, Permutation):
        return images.array
    return np.asarray(images, dtype=_DTYPE)


class Permutation:
    """An immutable permutation of ``0..degree-1`` stored as an image array."""

    __slots__ = ("_a", "_h")

    def __init__(self, images: Sequence[int] | np.ndarray, *, check: bool = True):
        a = np.array(images, dtype=_DTYPE)
        if check:
            if a.ndim != 1 or a.size == 0:
                raise ValueError("a permutation needs a non-empty 1-d image list")
            seen = np.zeros(a.size, dtype=bool)
            if a.min() < 0 or a.max() >= a.size:
                raise ValueError("images out of range")
            seen[a] = True
            if not seen.all():
                raise ValueError("images do not form a bijection")
        a.setflags(write=False)
        self._a = a
        self._h = None

    @classmethod
    def _wrap(cls, a: np.ndarray) -> Permutation:
        obj = object.__new__(cls)
        if a.dtype != _DTYPE:
            a = a.astype(_DTYPE)
        elif a.flags.writeable:
            a = a.copy()
        a.setflags(write=False)
        obj._a = a
        obj._h = None
        return obj

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls._wrap(np.arange(degree, dtype=_DTYPE))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int, *, one_based: bool = False) -> Permutation:
        a = np.arange(degree, dtype=_DTYPE)
        shift = 1 if one_based else 0
        used: set[int] = set()
        for cyc in cycles:
            pts = [int(x) - shift for x in cyc]
            if any(x < 0 or x >= degree for x in pts):
                raise ValueError(f"cycle {tuple(cyc)} leaves 0..{degree - 1 + shift}")
            if used.intersection(pts) or len(set(pts)) != len(pts):
                raise ValueError("cycles are not disjoint")
            used.update(pts)
            for x, y in zip(pts, pts[1:] + pts[:1]):
                a[x] = y
        return cls._wrap(a)

    @classmethod
    def from_string(cls, text: str, degree: int) -> Permutation:
        return parse_cycles(text, degree)

    # basic protocol

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def degree(self) -> int:
        return int(self._a.size)

    @property
    def key(self) -> bytes:
        return self._a.tobytes()

    def __call__(self, point: int) -> int:
        return int(self._a[point])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._a.size == other._a.size and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash(self._a.tobytes())
        return self._h

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __pow__(self, k: int) -> Permutation:
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        o = self.order()
        k %= o
        return Permutation._wrap(kernels.power_rows(self._a[None, :], k)[0])

    def __repr__(self) -> str:
        return f"Permutation.from_string({format_cycles(self)!r}, {self.degree})"

    def __str__(self) -> str:
        return format_cycles(self)

    # group-theoretic helpers

    def inverse(self) -> Permutation:
        inv = np.empty_like(self._a)
        inv[self._a] = np.arange(self._a.size, dtype=_DTYPE)
        return Permutation._wrap(inv)

    def is_identity(self) -> bool:
        return bool((self._a == np.arange(self._a.size)).all())

    def conjugate(self, g: Permutation) -> Permutation:
        """``self^g = g^-1 self g``."""
        a, ga = self._a, g.array
        out = np.empty_like(a)
        out[ga] = ga[a]
        return Permutation._wrap(out)

    def commutes_with(self, other: Permutation) -> bool:
        a, b = self._a, other.array
        return bool(np.array_equal(b[a], a[b]))

    def cycles(self, *, include_fixed: bool = False) -> list[tuple[int, ...]]:
        a = self._a.tolist()
        seen = [False] * len(a)
        out = []
        for i in range(len(a)):
            if seen[i]:
                continue
            cyc = [i]
            seen[i] = True
            j = a[i]
            while j != i:
                seen[j] = True
                cyc.append(j)
                j = a[j]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """All cycle lengths (fixed points included), longest first."""
        return tuple(sorted((len(c) for c in self.cycles(include_fixed=True)), reverse=True))

    def order(self) -> int:
        return element_order(self)

    def support(self) -> list[int]:
        return np.nonzero(self._a != np.arange(self._a.size))[0].tolist()


def compose(p: Permutation, q: Permutation) -> Permutation:
    """The product ``pq``: apply ``p`` first, then ``q``."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    return Permutation._wrap(q.array[p.array])


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def element_order(p: Permutation) -> int:
    lengths = [len(c) for c in p.cycles()]
    return math.lcm(*lengths) if lengths else 1


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse 1-based cycle notation such as ``(1 2 3)(4 5)`` or ``(1,2)``."""
    text = text.strip()
    if text in ("", "()"):
        return Permutation.identity(degree)
    pos = 0
    cycles = []
    for m in _CYCLE_RE.finditer(text):
        if text[pos : m.start()].strip():
            raise ValueError(f"unexpected text {text[pos:m.start()]!r} in {text!r}")
        body = m.group(1).replace(",", " ").split()
        if body:
            try:
                cycles.append([int(x) for x in body])
            except ValueError:
                raise ValueError(f"bad cycle ({m.group(1)}) in {text!r}") from None
        pos = m.end()
    if text[pos:].strip():
        raise ValueError(f"unexpected trailing text in {text!r}")
    return Permutation.from_cycles(cycles, degree, one_based=True)


def format_cycles(p: Permutation) -> str:
    cyc = p.cycles()
    if not cyc:
        return "()"
    return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cyc)


# -- stabilizer chains ----------------------------------------------------------------


def _inv_array(a: np.ndarray) -> np.ndarray:
    inv = np.empty_like(a)
    inv[a] = np.arange(a.size, dtype=_DTYPE)
    return inv


class StabilizerChain:
    """Base and strong generating set with explicit transversals.

    Level ``i`` holds the basic orbit of ``base[i]`` under the strong
    generators fixing ``base[:i]``; ``trans[i][x]`` maps ``base[i]`` to
    ``x``. ``preferred`` lists points to try first when the base needs a new
    point; backtrack searches use it to put informative points early.
    """

    def __init__(self, degree: int, preferred: Sequence[int] | None = None):
        self.degree = degree
        self.base: list[int] = []
        self.strong: list[np.ndarray] = []
        self._depth: list[int] = []
        self.orbits: list[list[int]] = []
        self.trans: list[dict[int, np.ndarray]] = []
        self.tinv: list[dict[int, np.ndarray]] = []
        self._pref = list(dict.fromkeys(int(x) for x in (preferred or ())))
        self._packed = None
        self._packed_trans = None
        self._ident = np.arange(degree, dtype=_DTYPE)

    # structure

    def __len__(self) -> int:
        return len(self.base)

    def order(self) -> int:
        return math.prod(len(o) for o in self.orbits)

    def level_generators(self, i: int) -> list[np.ndarray]:
        return [s for s, d in zip(self.strong, self._depth) if d >= i]

    def orbit_sizes(self) -> list[int]:
        return [len(o) for o in self.orbits]

    def _fix_depth(self, s: np.ndarray) -> int:
        d = 0
        for b in self.base:
            if s[b] != b:
                break
            d += 1
        return d

    def _choose_point(self, h: np.ndarray) -> int:
        for x in self._pref:
            if h[x] != x and x not in self.base:
                return x
        moved = np.nonzero(h != self._ident)[0]
        return int(moved[0])

    def _recompute_level(self, i: int) -> None:
        b = self.base[i]
        gens = self.level_generators(i)
        ident = self._ident
        trans = {b: ident}
        tinv = {b: ident}
        orbit = [b]
        j = 0
        while j < len(orbit):
            x = orbit[j]
            ux = trans[x]
            for s in gens:
                y = int(s[x])
                if y not in trans:
                    uy = s[ux]
                    trans[y] = uy
                    tinv[y] = _inv_array(uy)
                    orbit.append(y)
            j += 1
        self.orbits[i] = orbit
        self.trans[i] = trans
        self.tinv[i] = tinv
        self._packed = None
        self._packed_trans = None

    def _append_base_point(self, x: int) -> None:
        k = len(self.base)
        self.base.append(x)
        self.orbits.append([x])
        self.trans.append({x: self._ident})
        self.tinv.append({x: self._ident})
        for idx, s in enumerate(self.strong):
            if self._depth[idx] == k and s[x] == x:
                self._depth[idx] = k + 1
        self._packed = None

    def add_strong_generator(self, h: np.ndarray) -> None:
        """Add ``h`` (not the identity) and refresh the levels it touches."""
        d = self._fix_depth(h)
        if d == len(self.base):
            self._append_base_point(self._choose_point(h))
        self.strong.append(h)
        self._depth.append(d)
        for i in range(d + 1):
            self._recompute_level(i)

    def _pack(self):
        if self._packed is None:
            k, n = len(self.base), self.degree
            base = np.array(self.base, dtype=_DTYPE)
            in_orbit = np.zeros((k, n), dtype=np.bool_)
            tinv = np.empty((k, n, n), dtype=_DTYPE)
            tinv[:] = self._ident
            for i in range(k):
                for x, u in self.tinv[i].items():
                    in_orbit[i, x] = True
                    tinv[i, x] = u
            self._packed = (base, in_orbit, tinv)
        return self._packed

    def packed_transversals(self) -> np.ndarray:
        """``(k, n, n)`` array whose row ``[i, x]`` maps ``base[i]`` to ``x``."""
        if getattr(self, "_packed_trans", None) is None or self._packed_trans.shape[0] != len(self.base):
            k, n = len(self.base), self.degree
            trans = np.empty((k, n, n), dtype=_DTYPE)
            trans[:] = self._ident
            for i in range(k):
                for x, u in self.trans[i].items():
                    trans[i, x] = u
            self._packed_trans = trans
        return self._packed_trans

    def sift(self, g: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        if not self.base:
            return g, 0
        base, in_orbit, tinv = self._pack()
        return kernels.sift(np.ascontiguousarray(g, dtype=_DTYPE), base, in_orbit, tinv, start)

    def contains(self, g: np.ndarray) -> bool:
        h, lvl = self.sift(g)
        return lvl == len(self.base) and bool((h == self._ident).all())

    def random_element(self, rng: random.Random) -> np.ndarray:
        g = self._ident
        for i in reversed(range(len(self.base))):
            x = self.orbits[i][rng.randrange(len(self.orbits[i]))]
            g = self.trans[i][x][g]
        return g

    def transversal_arrays(self, i: int) -> np.ndarray:
        return np.stack([self.trans[i][x] for x in self.orbits[i]])

    def iter_element_chunks(self, chunk: int = 200_000) -> Iterator[np.ndarray]:
        """Yield every group element exactly once, in row blocks."""
        k = len(self.base)
        if k == 0:
            yield self._ident[None, :].copy()
            return
        split = k
        size = 1
        while split > 0 and size * len(self.orbits[split - 1]) <= chunk:
            split -= 1
            size *= len(self.orbits[split])
        deep = self._ident[None, :].copy()
        for i in range(k - 1, split - 1, -1):
            deep = kernels.product_rows(deep, self.transversal_arrays(i))
        outer = [self.transversal_arrays(i) for i in range(split - 1, -1, -1)]
        if not outer:
            yield deep
            return
        for combo in itertools.product(*(range(len(t)) for t in outer)):
            top = self._ident
            for t, j in zip(outer, combo):
                top = t[j][top]
            yield top[deep]

    def copy(self) -> StabilizerChain:
        c = StabilizerChain(self.degree, self._pref)
        c.base = list(self.base)
        c.strong = list(self.strong)
        c._depth = list(self._depth)
        c.orbits = [list(o) for o in self.orbits]
        c.trans = [dict(t) for t in self.trans]
        c.tinv = [dict(t) for t in self.tinv]
        return c


class _ProductReplacement:
    def __init__(self, gens: list[np.ndarray], rng: random.Random, degree: int):
        self.rng = rng
        ident = np.arange(degree, dtype=_DTYPE)
        gens = gens or [ident]
        size = max(10, len(gens) + 1)
        self.state = [gens[i % len(gens)] for i in range(size)]
        self.acc = ident
        for _ in range(50):
            self.next()

    def next(self) -> np.ndarray:
        st, rng = self.state, self.rng
        i, j = rng.sample(range(len(st)), 2)
        if rng.random() < 0.5:
            st[i] = st[j][st[i]]  # st[i] * st[j]
        else:
            st[i] = st[i][st[j]]  # st[j] * st[i]
        self.acc = st[i][self.acc]
        return self.acc


def _schreier_sims(
    gens: list[np.ndarray],
    degree: int,
    *,
    preferred: Sequence[int] | None = None,
    known_order: int | None = None,
    rng: random.Random | None = None,
    chain: StabilizerChain | None = None,
) -> StabilizerChain:
    """Randomised Schreier-Sims followed by a deterministic check.

    With ``known_order`` the random phase stops as soon as the chain reaches
    that order, which certifies completeness because every strong generator
    is a product of the inputs. Without it every Schreier generator is sifted.
    """
    rng = rng or random.Random(0x5EED)
    ident = np.arange(degree, dtype=_DTYPE)
    gens = [g for g in gens if not np.array_equal(g, ident)]
    if chain is None:
        chain = StabilizerChain(degree, preferred)
    for g in gens:
        h, lvl = chain.sift(g)
        if lvl < len(chain.base) or not np.array_equal(h, ident):
            chain.add_strong_generator(h)
    if not chain.strong:
        return chain
    if known_order is not None and chain.order() == known_order:
        return chain
    pr = _ProductReplacement(gens, rng, degree)
    streak = 0
    target_streak = 40 if known_order is None else 400
    while streak < target_streak:
        h, lvl = chain.sift(pr.next())
        if lvl < len(chain.base) or not np.array_equal(h, ident):
            chain.add_strong_generator(h)
            streak = 0
            if known_order is not None and chain.order() >= known_order:
                break
        else:
            streak += 1
    if known_order is not None and chain.order() == known_order:
        return chain
    _verify(chain)
    if known_order is not None and chain.order() != known_order:
        raise ValueError(f"group order {chain.order()} differs from stated order {known_order}")
    return chain


def _verify(chain: StabilizerChain) -> None:
    """Sift every Schreier generator, adding residues until the chain closes."""
    ident = chain._ident
    i = len(chain.base) - 1
    while i >= 0:
        added = None
        gens = chain.level_generators(i)
        trans, tinv = chain.trans[i], chain.tinv[i]
        for x in list(chain.orbits[i]):
            ux = trans[x]
            for s in gens:
                y = int(s[x])
                h = tinv[y][s[ux]]  # u_x * s * u_y^-1
                if np.array_equal(h, ident):
                    continue
                res, lvl = chain.sift(h, i + 1)
                if lvl < len(chain.base) or not np.array_equal(res, ident):
                    chain.add_strong_generator(res)
                    added = chain._depth[-1]
                    break
            if added is not None:
                break
        if added is None:
            i -= 1
        else:
            i = min(added, len(chain.base) - 1)


# -- groups -------------------------------------------------------------------


class PermGroup:
    """A permutation group given by generators, with a lazily built chain.

    ``known_order`` must be exact when given; it lets the chain builder stop
    early. Group files never pass their declared order here: that number is
    checked against the computed one instead.
    """

    def __init__(
        self,
        generators: Iterable[Permutation | Sequence[int]],
        degree: int | None = None,
        *,
        known_order: int | None = None,
        name: str | None = None,
        chain: StabilizerChain | None = None,
    ):
        gens = [g if isinstance(g, Permutation) else Permutation(g) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group without generators")
            degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise ValueError("generators of different degrees")
        self.degree = degree
        self.generators = gens
        self.name = name
        self._known = known_order
        self._chain = chain

    def __repr__(self) -> str:
        label = self.name or f"<{len(self.generators)} generators>"
        return f"PermGroup({label}, degree={self.degree})"

    @classmethod
    def trivial(cls, degree: int) -> PermGroup:
        return cls([], degree, known_order=1)

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = _schreier_sims([g.array for g in self.generators], self.degree, known_order=self._known)
        return self._chain

    def order(self) -> int:
        return self.chain.order()

    def __contains__(self, g: Permutation) -> bool:
        return membership(self, g)

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self.generators)

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(a.commutes_with(b) for i, a in enumerate(gs) for b in gs[i + 1 :])

    def random_element(self, rng: random.Random) -> Permutation:
        return random_element(self, rng)

    def chain_with_base(self, preferred: Sequence[int], rng: random.Random | None = None) -> StabilizerChain:
        """A fresh chain for this group whose base follows ``preferred``."""
        gens = [g.array for g in self.generators] + list(self.chain.strong)
        return _schreier_sims(gens, self.degree, preferred=preferred, known_order=self.order(), rng=rng)

    def elements(self, limit: int = 2_000_000) -> np.ndarray:
        if self.order() > limit:
            raise ValueError(f"group of order {self.order()} exceeds enumeration limit {limit}")
        return np.concatenate(list(self.chain.iter_element_chunks()))

    def orbit(self, point: int) -> list[int]:
        seen = {point}
        orbit = [point]
        for x in orbit:
            for g in self.generators:
                y = g(x)
                if y not in seen:
                    seen.add(y)
                    orbit.append(y)
        return orbit

    def subgroup(self, generators: Iterable[Permutation], **kw) -> PermGroup:
        return PermGroup(list(generators), self.degree, **kw)

    def is_subgroup(self, other: PermGroup) -> bool:
        """True when every generator of ``self`` lies in ``other``."""
        return all(membership(other, g) for g in self.generators)


def build_bsgs(G: PermGroup, seed: Sequence[int] | None = None, rng: random.Random | None = None) -> StabilizerChain:
    """Build (and cache, when ``seed`` is empty) a verified chain for ``G``."""
    if not seed:
        return G.chain
    return _schreier_sims([g.array for g in G.generators], G.degree, preferred=seed, rng=rng)


def group_order(G: PermGroup) -> int:
    return G.order()


def membership(G: PermGroup, p: Permutation) -> bool:
    if p.degree != G.degree:
        raise ValueError("degree mismatch")
    return G.chain.contains(p.array)


def random_element(G: PermGroup, rng: random.Random | None = None) -> Permutation:
    """A uniformly distributed element of ``G``."""
    rng = rng or random.Random()
    return Permutation._wrap(G.chain.random_element(rng))


def normal_closure(G: PermGroup, seeds: Iterable[Permutation]) -> PermGroup:
    """Smallest normal subgroup of ``G`` containing ``seeds``."""
    gens = [s for s in seeds if not s.is_identity()]
    if not gens:
        return PermGroup.trivial(G.degree)
    chain = _schreier_sims([g.array for g in gens], G.degree)
    queue = list(gens)
    while queue:
        n = queue.pop()
        for g in G.generators:
            c = n.conjugate(g)
            if not chain.contains(c.array):
                gens.append(c)
                queue.append(c)
                h, _ = chain.sift(c.array)
                chain.add_strong_generator(h)
                _verify(chain)
    return PermGroup(gens, G.degree, chain=chain)
