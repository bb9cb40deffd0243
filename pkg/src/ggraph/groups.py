"""Built-in group constructors and the ``.grp`` file format.

Constructors cover the small families used in tests: symmetric,
alternating, cyclic, dihedral and quaternion groups, ``PSL(2,q)`` on the
projective line, ``SL(2,q)`` on nonzero vectors, ``GL(2,q)`` and direct
products. Finite fields of prime-power order are built from a brute-force
irreducible polynomial, which is plenty for ``q`` up to a few hundred.

``.grp`` files are line based::

    # comment
    name M11
    degree 11
    order 7920
    gen (1 2 3 4 5 6 7 8 9 10 11)
    gen (3 7 11 8)(4 10 5 6)
    classmap o3s440a 3A
    classrep 3A (1 2 3)(4 5 6)(7 8 9)
    center (1 2 3)(4 5 6)

``classmap`` names a class by its fingerprint label; ``classrep`` names the
class of an explicit element and wins when both are present, which matters
when several classes share a fingerprint. Points are 1-based. A declared
order is a hard gate: a file whose generators produce a group of another
order is rejected.
"""

from __future__ import annotations

import itertools
import logging
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .backtrack import conjugating_element
from .classops import ConjClassRep
from .permcore import PermGroup, Permutation, parse_cycles

__all__ = [
    "GF",
    "GroupFile",
    "GroupFileError",
    "alt",
    "builtin_group",
    "cyclic",
    "data_dir",
    "dihedral",
    "direct_product",
    "gl2",
    "load_group",
    "psl2",
    "quaternion",
    "read_group_file",
    "sl2",
    "sym",
]

log = logging.getLogger(__name__)


# -- small families ------------------------------------------------------------------------


def sym(n: int) -> PermGroup:
    if n < 1:
        raise ValueError("degree must be positive")
    if n == 1:
        return PermGroup.trivial(1)
    gens = [Permutation.from_cycles([range(n)], n)]
    gens.append(Permutation.from_cycles([(0, 1)], n))
    if n == 2:
        gens = gens[1:]
    return PermGroup(gens, n, known_order=math.factorial(n), name=f"Sym({n})")


def alt(n: int) -> PermGroup:
    if n < 3:
        return PermGroup.trivial(max(n, 1))
    gens = [Permutation.from_cycles([(i, i + 1, i + 2)], n) for i in range(n - 2)]
    return PermGroup(gens, n, known_order=math.factorial(n) // 2, name=f"Alt({n})")


def cyclic(n: int) -> PermGroup:
    if n == 1:
        return PermGroup.trivial(1)
    return PermGroup([Permutation.from_cycles([range(n)], n)], n, known_order=n, name=f"C{n}")


def dihedral(n: int) -> PermGroup:
    """Dihedral group of order ``2n`` acting on ``n`` points (``n >= 3``)."""
    r = Permutation.from_cycles([range(n)], n)
    s = Permutation([(-i) % n for i in range(n)])
    return PermGroup([r, s], n, known_order=2 * n, name=f"D{2 * n}")


def quaternion(n: int = 8) -> PermGroup:
    """Generalized quaternion group of order ``n = 2^k >= 8`` in its regular action.

    Elements ``a^i b^j`` (``0 <= i < n/2``, ``j = 0,1``) with ``a^(n/2) = 1``,
    ``b^2 = a^(n/4)`` and ``a^b = a^-1``; point ``i + j*n/2``.
    """
    m = n // 2
    if n < 8 or n & (n - 1):
        raise ValueError("order must be a power of 2, at least 8")

    def mul(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
        (i, j), (k, l) = x, y
        # a^i b^j a^k b^l = a^(i + (-1)^j k) b^(j+l)
        i2 = (i + (k if j == 0 else -k)) % m
        if j and l:
            return ((i2 + m // 2) % m, 0)
        return (i2, (j + l) % 2)

    pts = [(i, j) for j in range(2) for i in range(m)]
    index = {x: t for t, x in enumerate(pts)}
    gens = [Permutation([index[mul(x, g)] for x in pts]) for g in ((1, 0), (0, 1))]
    return PermGroup(gens, n, known_order=n, name=f"Q{n}")


def direct_product(*groups: PermGroup) -> PermGroup:
    """Direct product acting on the disjoint union of the point sets."""
    degree = sum(G.degree for G in groups)
    gens = []
    offset = 0
    for G in groups:
        for g in G.generators:
            img = np.arange(degree, dtype=np.int64)
            img[offset : offset + G.degree] = g.array + offset
            gens.append(Permutation(img))
        offset += G.degree
    order = math.prod(G.order() for G in groups)
    name = " x ".join(G.name or "?" for G in groups)
    return PermGroup(gens, degree, known_order=order, name=name)


# -- finite fields -------------------------------------------------------------------------------


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            k, m = 0, q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                break
            return p, k
    raise ValueError(f"{q} is not a prime power")


class GF:
    """The field with ``q`` elements as integers ``0..q-1`` with lookup tables.

    Element ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}`` stands for the residue of
    ``c_0 + c_1 X + ...`` modulo a fixed irreducible polynomial of degree ``k``.
    """

    def __init__(self, q: int):
        p, k = _prime_power(q)
        self.q, self.p, self.k = q, p, k
        digits = np.array([[(a // p**i) % p for i in range(k)] for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(k)
        self.add = (digits[:, None, :] + digits[None, :, :]) % p @ weights
        self.neg = ((-digits) % p) @ weights
        poly = _irreducible(p, k)
        self.mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                c = _polymulmod(digits[a], digits[b], poly, p) @ weights
                self.mul[a, b] = self.mul[b, a] = c
        self.inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv[a] = int(np.flatnonzero(self.mul[a] == 1)[0])
        self.primitive = next(a for a in range(2, q + 1) if a == q or self._order(a) == q - 1) if q > 2 else 1

    def _order(self, a: int) -> int:
        x, n = a, 1
        while x != 1:
            x = int(self.mul[x, a])
            n += 1
        return n


def _polymulmod(a: np.ndarray, b: np.ndarray, poly: np.ndarray, p: int) -> np.ndarray:
    k = a.size
    prod = np.convolve(a, b) % p
    for d in range(prod.size - 1, k - 1, -1):
        c = prod[d]
        if c:
            prod[d - k : d + 1] = (prod[d - k : d + 1] - c * poly) % p
    return prod[:k]


def _irreducible(p: int, k: int) -> np.ndarray:
    """Monic irreducible polynomial of degree ``k`` over ``F_p`` (coefficients low to high)."""
    if k == 1:
        return np.array([0, 1], dtype=np.int64)
    for tail in itertools.product(range(p), repeat=k):
        f = np.array(list(tail) + [1], dtype=np.int64)
        if f[0] == 0:
            continue
        if not any(_has_factor(f, d, p) for d in range(1, k // 2 + 1)):
            return f
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def _has_factor(f: np.ndarray, d: int, p: int) -> bool:
    for tail in itertools.product(range(p), repeat=d):
        g = np.array(list(tail) + [1], dtype=np.int64)
        r = f.copy()
        for i in range(r.size - 1, d - 1, -1):
            c = r[i]
            if c:
                r[i - d : i + 1] = (r[i - d : i + 1] - c * g) % p
        if not r[:d].any():
            return True
    return False


# -- 2x2 linear groups ----------------------------------------------------------------------


def _sl2_generators(F: GF) -> list[np.ndarray]:
    """Matrices ``[[a, b], [c, d]]`` generating ``SL(2, q)``."""
    a = F.primitive
    return [
        np.array([[1, 1], [0, 1]]),
        np.array([[a, 0], [0, int(F.inv[a])]]),
        np.array([[0, int(F.neg[1])], [1, 0]]),
    ]


def _act(F: GF, m: np.ndarray, v: tuple[int, int]) -> tuple[int, int]:
    # row vector times matrix, so products act left to right like permutations
    x, y = v
    return (
        int(F.add[F.mul[x, m[0, 0]], F.mul[y, m[1, 0]]]),
        int(F.add[F.mul[x, m[0, 1]], F.mul[y, m[1, 1]]]),
    )


def _normalize(F: GF, v: tuple[int, int]) -> tuple[int, int]:
    x, y = v
    if y:
        return (int(F.mul[x, F.inv[y]]), 1)
    return (1, 0)


def psl2(q: int) -> PermGroup:
    """``PSL(2, q)`` on the ``q + 1`` points of the projective line."""
    F = GF(q)
    pts = [(x, 1) for x in range(q)] + [(1, 0)]
    index = {v: i for i, v in enumerate(pts)}
    gens = [Permutation([index[_normalize(F, _act(F, m, v))] for v in pts]) for m in _sl2_generators(F)]
    order = q * (q * q - 1) // math.gcd(2, q - 1)
    G = PermGroup([g for g in gens if not g.is_identity()], q + 1, name=f"L2({q})")
    if G.order() != order:  # pragma: no cover - construction guard
        raise AssertionError(f"PSL(2,{q}) built with order {G.order()}")
    return G


def sl2(q: int) -> PermGroup:
    """``SL(2, q)`` on the ``q^2 - 1`` nonzero vectors."""
    F = GF(q)
    pts = [(x, y) for y in range(q) for x in range(q) if x or y]
    index = {v: i for i, v in enumerate(pts)}
    gens = [Permutation([index[_act(F, m, v)] for v in pts]) for m in _sl2_generators(F)]
    order = q * (q * q - 1)
    G = PermGroup([g for g in gens if not g.is_identity()], len(pts), name=f"SL(2,{q})")
    if G.order() != order:  # pragma: no cover - construction guard
        raise AssertionError(f"SL(2,{q}) built with order {G.order()}")
    return G


def gl2(q: int) -> PermGroup:
    """``GL(2, q)`` on the ``q^2 - 1`` nonzero vectors."""
    F = GF(q)
    pts = [(x, y) for y in range(q) for x in range(q) if x or y]
    index = {v: i for i, v in enumerate(pts)}
    mats = _sl2_generators(F) + [np.array([[F.primitive, 0], [0, 1]])]
    gens = [Permutation([index[_act(F, m, v)] for v in pts]) for m in mats]
    order = (q * q - 1) * (q * q - q)
    G = PermGroup([g for g in gens if not g.is_identity()], len(pts), name=f"GL(2,{q})")
    if G.order() != order:  # pragma: no cover - construction guard
        raise AssertionError(f"GL(2,{q}) built with order {G.order()}")
    return G


# -- group files ---------------------------------------------------------------------------------


class GroupFileError(ValueError):
    """Malformed group file, or a declared order that does not match."""


@dataclass
class GroupFile:
    path: str
    name: str
    degree: int
    generators: list[Permutation]
    declared_order: int | None = None
    classmap: dict[str, str] = field(default_factory=dict)
    center: list[Permutation] = field(default_factory=list)
    classreps: list[tuple[str, Permutation]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    group: PermGroup | None = None

    def name_classes(self, classes: list[ConjClassRep]) -> None:
        """Set ``name`` on each class from ``classrep`` lines, else from ``classmap``."""
        G = self.group
        for c in classes:
            c.name = self.classmap.get(c.label) if c.label else None
        for name, r in self.classreps:
            for c in classes:
                same_shape = c.elt_order == r.order() and c.cycle_type == r.cycle_type()
                if same_shape and conjugating_element(G, c.rep, r) is not None:
                    c.name = name
                    break


def read_group_file(path: str | os.PathLike, *, check_order: bool = True) -> GroupFile:
    """Parse a ``.grp`` file and build its group, enforcing the declared order."""
    path = Path(path)
    name, degree, order = path.stem, None, None
    gen_text: list[tuple[int, str]] = []
    center_text: list[tuple[int, str]] = []
    rep_text: list[tuple[int, str, str]] = []
    classmap: dict[str, str] = {}
    notes: list[str] = []
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            notes.append(line[1:].strip())
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if word == "name":
                name = rest
            elif word == "degree":
                degree = int(rest)
            elif word == "order":
                order = int(rest)
            elif word == "gen":
                gen_text.append((lineno, rest))
            elif word == "center":
                center_text.append((lineno, rest))
            elif word == "classrep":
                label, _, cyc = rest.partition(" ")
                rep_text.append((lineno, label, cyc))
            elif word == "classmap":
                key, label = rest.split()
                classmap[key] = label
            else:
                raise GroupFileError(f"{path}:{lineno}: unknown keyword {word!r}")
        except ValueError as exc:
            if isinstance(exc, GroupFileError):
                raise
            raise GroupFileError(f"{path}:{lineno}: {exc}") from exc
    if degree is None:
        raise GroupFileError(f"{path}: missing degree line")
    if not gen_text:
        raise GroupFileError(f"{path}: no generators")

    def parse(items: list[tuple[int, str]]) -> list[Permutation]:
        out = []
        for lineno, text in items:
            try:
                out.append(parse_cycles(text, degree))
            except ValueError as exc:
                raise GroupFileError(f"{path}:{lineno}: {exc}") from exc
        return out

    gf = GroupFile(
        path=str(path),
        name=name,
        degree=degree,
        generators=parse(gen_text),
        declared_order=order,
        classmap=classmap,
        center=parse(center_text),
        classreps=[(label, r) for (_, label, _), r in zip(rep_text, parse([(n, c) for n, _, c in rep_text]))],
        notes=notes,
    )
    G = PermGroup(gf.generators, degree, name=name)
    if check_order and order is not None and G.order() != order:
        raise GroupFileError(f"{path}: generators give order {G.order()}, file declares {order}")
    gf.group = G
    return gf


def data_dir() -> Path:
    """Directory holding the shipped data; ``GG_DATA_DIR`` overrides it."""
    env = os.environ.get("GG_DATA_DIR")
    if env:
        return Path(env)
    return Path(str(resources.files("ggraph") / "data"))


def _resolve(spec: str, suffix: str) -> Path:
    p = Path(spec)
    if p.exists():
        return p
    for base in (data_dir(), Path(str(resources.files("ggraph") / "data"))):
        for cand in (base / spec, base / f"{spec}{suffix}", base / p.name):
            if cand.exists():
                return cand
    raise FileNotFoundError(f"no data file for {spec!r}")


_BUILTIN = {
    "sym": sym,
    "alt": alt,
    "cyclic": cyclic,
    "dihedral": dihedral,
    "psl2": psl2,
    "sl2": sl2,
    "gl2": gl2,
    "quaternion": quaternion,
}


def builtin_group(spec: str) -> PermGroup | None:
    """Groups named like ``alt:7``, ``sym:5``, ``psl2:11`` or ``sl2:5``."""
    kind, _, arg = spec.partition(":")
    fn = _BUILTIN.get(kind.lower())
    if fn is None or not arg.isdigit():
        return None
    return fn(int(arg))


@lru_cache(maxsize=32)
def _load_cached(path: str) -> GroupFile:
    return read_group_file(path)


def load_group(spec: str) -> GroupFile:
    """A group from a built-in name (``alt:5``) or a ``.grp`` file path or stem."""
    G = builtin_group(spec)
    if G is not None:
        return GroupFile(path=spec, name=G.name or spec, degree=G.degree, generators=G.generators, group=G)
    return _load_cached(str(_resolve(spec, ".grp").resolve()))
