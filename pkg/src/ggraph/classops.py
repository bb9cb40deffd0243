"""Conjugacy-class machinery: centralizers, conjugators, classes of elements
of prime order, Sylow subgroups and small structural probes."""

from __future__ import annotations

import logging
import math
import random
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .backtrack import centralizer_search, conjugating_element
from .permcore import PermGroup, Permutation, membership, normal_closure

__all__ = [
    "ClassesIncomplete",
    "ConjClassRep",
    "StructureInfo",
    "SylowNotFound",
    "center",
    "centralizer",
    "classes_of_order_p",
    "conjugator",
    "fingerprint_labels",
    "identify_class",
    "is_prime",
    "omega1",
    "p_part",
    "structure_probe",
    "sylow_p",
]

log = logging.getLogger(__name__)

ENUMERATION_BOUND = 1_000_000


class SylowNotFound(RuntimeError):
    """Raised when the Sylow search gives up; never returns a smaller p-group."""


class ClassesIncomplete(RuntimeError):
    """Raised when the class list cannot be certified complete."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def _require_member(G: PermGroup, x: Permutation, what: str = "element") -> None:
    if not membership(G, x):
        raise ValueError(f"{what} {x} is not in the group")


# -- centralizers and conjugators -----------------------------------------------------------


def centralizer(G: PermGroup, x: Permutation) -> PermGroup:
    """``C_G(x)`` by backtrack search; the order is exact by construction."""
    _require_member(G, x)
    if x.is_identity():
        return G
    gens, order = centralizer_search(G, x)
    return PermGroup(gens, G.degree, known_order=order)


def conjugator(G: PermGroup, x: Permutation, y: Permutation) -> Permutation | None:
    """Some ``g`` in ``G`` with ``x^g = y`` or None when they are not conjugate."""
    _require_member(G, x)
    _require_member(G, y)
    return conjugating_element(G, x, y)


def center(G: PermGroup) -> PermGroup:
    """``Z(G)`` as the elements of ``G`` centralizing every generator.

    Each step searches ``C_C(g)`` for the current subgroup ``C``; the search
    only needs ``g`` as a permutation, not as a member of ``C``.
    """
    C = G
    for g in G.generators:
        if not all(g.commutes_with(c) for c in C.generators):
            gens, order = centralizer_search(C, g)
            C = PermGroup(gens, G.degree, known_order=order)
    return C


# -- conjugacy classes ---------------------------------------------------------------------


@dataclass
class ConjClassRep:
    """A conjugacy class of ``G`` given by a representative and its centralizer."""

    rep: Permutation
    centralizer: PermGroup
    class_size: int
    elt_order: int
    cycle_type: tuple[int, ...]
    label: str | None = None
    name: str | None = None  # ATLAS-style name from group metadata, when known

    @property
    def centralizer_order(self) -> int:
        return self.centralizer.order()

    @property
    def key(self) -> str:
        return f"o{self.elt_order}s{self.class_size}"

    @property
    def fingerprint(self) -> tuple:
        return (self.elt_order, self.class_size, self.cycle_type)

    def display_name(self) -> str:
        return self.name or self.label or self.key


def _make_class(G: PermGroup, r: Permutation, C: PermGroup | None = None) -> ConjClassRep:
    C = C if C is not None else centralizer(G, r)
    size = G.order() // C.order()
    return ConjClassRep(rep=r, centralizer=C, class_size=size, elt_order=r.order(), cycle_type=r.cycle_type())


def fingerprint_labels(classes: list[ConjClassRep]) -> None:
    """Assign ``o{order}s{size}{letter}`` labels in place.

    Classes sharing order and size get letters by ascending cycle type
    (lengths listed longest first), keeping the given order on ties.
    """
    groups: dict[str, list[int]] = {}
    for i, c in enumerate(classes):
        groups.setdefault(c.key, []).append(i)
    for key, idx in groups.items():
        idx.sort(key=lambda i: (classes[i].cycle_type, i))
        for j, i in enumerate(idx):
            classes[i].label = key + _letters(j)


def _letters(j: int) -> str:
    s = ""
    j += 1
    while j:
        j, r = divmod(j - 1, 26)
        s = chr(ord("a") + r) + s
    return s


def _p_elements(S: PermGroup, p: int) -> np.ndarray:
    if S.order() > ENUMERATION_BOUND:
        raise ClassesIncomplete(f"Sylow {p}-subgroup of order {S.order()} too large to enumerate")
    E = S.elements()
    return E[kernels.element_orders(E) == p]


def _orbits_under(gens: Sequence[Permutation], rows: np.ndarray) -> list[list[int]]:
    """Conjugation orbits of the rows of ``rows`` (a set closed under ``gens``)."""
    index = {rows[i].tobytes(): i for i in range(rows.shape[0])}
    seen = np.zeros(rows.shape[0], dtype=bool)
    out = []
    garr = [(g.array, g.inverse().array) for g in gens]
    for i in range(rows.shape[0]):
        if seen[i]:
            continue
        seen[i] = True
        orb = [i]
        j = 0
        while j < len(orb):
            x = rows[orb[j]]
            for a, ainv in garr:
                # x^a = a^-1 x a
                y = a[x[ainv]]
                k = index[y.tobytes()]
                if not seen[k]:
                    seen[k] = True
                    orb.append(k)
            j += 1
        out.append(orb)
    return out


def classes_of_order_p(
    G: PermGroup,
    p: int,
    rng: random.Random | None = None,
    *,
    sylow: PermGroup | None = None,
) -> list[ConjClassRep]:
    """One representative per conjugacy class of elements of order ``p``.

    Every element of order ``p`` is conjugate into a Sylow ``p``-subgroup
    ``S``, so the classes are found by splitting the order-``p`` elements of
    ``S`` into ``S``-classes and fusing those in ``G``. The number of
    order-``p`` elements of ``S`` must equal the sum over the ``G``-classes
    found of their intersections with ``S``; the fusion step checks this.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    rng = rng or random.Random(0)
    if G.order() % p:
        return []
    S = sylow if sylow is not None else sylow_p(G, p, rng)
    E = _p_elements(S, p)
    orbits = _orbits_under(S.generators, E)
    classes: list[ConjClassRep] = []
    meets: list[int] = []
    # bigger S-classes first: they tend to lie in the big G-classes
    orbits.sort(key=lambda o: (-len(o), o[0]))
    for orb in orbits:
        r = Permutation._wrap(E[orb[0]])
        home = identify_class(G, classes, r)
        if home is None:
            classes.append(_make_class(G, r))
            meets.append(len(orb))
        else:
            meets[home] += len(orb)
    if sum(meets) != E.shape[0]:  # pragma: no cover - bookkeeping guard
        raise ClassesIncomplete("fusion count mismatch")
    classes.sort(key=lambda c: (c.class_size, c.cycle_type))
    fingerprint_labels(classes)
    return classes


def identify_class(G: PermGroup, classes: Sequence[ConjClassRep], g: Permutation) -> int | None:
    """Index of the class containing ``g``, by elimination then conjugator search."""
    ct = g.cycle_type()
    cands = [i for i, c in enumerate(classes) if c.cycle_type == ct and c.elt_order == g.order()]
    if not cands:
        return None
    if len(cands) > 1:
        corder = None
        sizes = {classes[i].centralizer_order for i in cands}
        if len(sizes) > 1:
            corder = centralizer(G, g).order()
            cands = [i for i in cands if classes[i].centralizer_order == corder]
    for i in cands:
        if conjugating_element(G, classes[i].rep, g) is not None:
            return i
    return None


# -- Sylow subgroups ------------------------------------------------------------------------


def _is_p_power(n: int, p: int) -> bool:
    return p_part(n, p) == n


def _random_p_element(G: PermGroup, p: int, rng: random.Random) -> Permutation | None:
    g = G.random_element(rng)
    o = g.order()
    m = o // p_part(o, p)
    y = g**m
    return None if y.is_identity() else y


def sylow_p(G: PermGroup, p: int, rng: random.Random | None = None, *, _core: PermGroup | None = None) -> PermGroup:
    """A Sylow ``p``-subgroup of ``G``.

    Keeps a normal ``p``-subgroup ``V`` of ``G`` (initially trivial) and looks
    for a ``p``-element ``y`` such that ``W = <V, y>`` is a ``p``-group whose
    normalizer still has full ``p``-part. ``N_G(W)`` is
    ``<C_G(y), g_w : y^(g_w) = w in W>`` because ``V`` is normal. A proper
    normalizer becomes the new ambient group; ``N_G(W) = G`` enlarges ``V``.
    The result's order is checked against the ``p``-part of ``|G|``.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    rng = rng or random.Random(0)
    target = p_part(G.order(), p)
    if target == 1:
        return PermGroup.trivial(G.degree)
    if target == G.order():
        return G
    V = _core if _core is not None else PermGroup.trivial(G.degree)
    tries = 0
    while tries < 400:
        if V.order() == target:
            return V
        y = _random_p_element(G, p, rng)
        tries += 1
        if y is None:
            continue
        # try the order-p power first, then larger powers
        o = y.order()
        powers = []
        e = o // p
        while e >= 1:
            powers.append(y**e)
            e //= p
        for z in powers:
            if membership(V, z):
                continue
            W = PermGroup(V.generators + [z], G.degree)
            if not _is_p_power(W.order(), p):
                continue
            N = _normalizer_of_extension(G, W, z)
            if p_part(N.order(), p) < target:
                continue
            if N.order() == G.order():
                V = W
                break
            S = sylow_p(N, p, rng, _core=W)
            if S.order() != target:  # pragma: no cover - recursion keeps the p-part
                raise SylowNotFound("normalizer recursion lost the full p-part")
            return PermGroup(S.generators, G.degree, known_order=target, name=f"Sylow {p}")
    raise SylowNotFound(f"sylow-not-found: no Sylow {p}-subgroup after {tries} attempts")


def _normalizer_of_extension(G: PermGroup, W: PermGroup, z: Permutation) -> PermGroup:
    """``N_G(W)`` for ``W = <V, z>`` with ``V`` normal in ``G``."""
    C = centralizer(G, z)
    gens = list(C.generators)
    ct = z.cycle_type()
    Welts = W.elements()
    cands = [Permutation._wrap(w) for w in Welts if not np.array_equal(w, z.array)]
    cands = [w for w in cands if w.cycle_type() == ct]
    H = PermGroup(gens, G.degree, known_order=C.order())
    for w in cands:
        # skip w already reached from z by the normalizer found so far
        if _maps_into(H, z, w):
            continue
        g = conjugating_element(G, z, w)
        if g is not None:
            gens.append(g)
            H = PermGroup(gens, G.degree)
    return H


def _maps_into(H: PermGroup, z: Permutation, w: Permutation) -> bool:
    return conjugating_element(H, z, w) is not None


def omega1(P: PermGroup, p: int) -> PermGroup:
    """Subgroup generated by the elements of order ``p`` of the ``p``-group ``P``."""
    if not _is_p_power(P.order(), p):
        raise ValueError(f"group of order {P.order()} is not a {p}-group")
    if P.order() == 1:
        return P
    E = _p_elements(P, p)
    return _generated_by_rows(E, P.degree)


def _generated_by_rows(E: np.ndarray, degree: int) -> PermGroup:
    gens: list[Permutation] = []
    H = PermGroup.trivial(degree)
    for row in E:
        g = Permutation._wrap(row)
        if not membership(H, g):
            gens.append(g)
            H = PermGroup(gens, degree)
    return H


# -- structure probes ---------------------------------------------------------------------------


@dataclass
class StructureInfo:
    order: int
    is_abelian: bool
    abelian_invariants: tuple[int, ...] | None = None
    is_cyclic: bool | None = None
    is_generalized_quaternion: bool = False
    is_elementary_abelian: bool = False
    prime: int | None = None
    derived_length: int | None = None
    is_perfect: bool = False
    notes: list[str] = field(default_factory=list)

    def describe(self) -> str:
        if self.order == 1:
            return "1"
        if self.is_elementary_abelian and self.prime:
            k = round(math.log(self.order, self.prime))
            return f"{self.prime}^{k}"
        if self.is_abelian and self.abelian_invariants:
            return "x".join(str(a) for a in self.abelian_invariants)
        if self.is_generalized_quaternion:
            return f"Q{self.order}"
        if self.is_perfect:
            return f"perfect of order {self.order}"
        if self.derived_length:
            return f"solvable of order {self.order}, derived length {self.derived_length}"
        return f"nonabelian of order {self.order}"


def _invariants_from_orders(orders: np.ndarray, n: int) -> tuple[int, ...]:
    """Invariant factors of an abelian group from its element orders."""
    prime_parts: list[list[int]] = []
    m = n
    q = 2
    primes = []
    while m > 1:
        if m % q == 0:
            primes.append(q)
            while m % q == 0:
                m //= q
        q += 1
    for q in primes:
        e_max = round(math.log(p_part(n, q), q))
        counts = [1]  # |Omega_0|
        for k in range(1, e_max + 1):
            counts.append(int(np.count_nonzero((q**k) % orders == 0)))
        ranks = [round(math.log(counts[k], q)) - round(math.log(counts[k - 1], q)) for k in range(1, e_max + 1)]
        ranks.append(0)
        exps = []
        for k in range(1, e_max + 1):
            exps += [k] * (ranks[k - 1] - ranks[k])
        prime_parts.append(sorted((q**e for e in exps), reverse=True))
    width = max((len(x) for x in prime_parts), default=0)
    inv = []
    for i in range(width):
        inv.append(math.prod(x[i] for x in prime_parts if i < len(x)))
    return tuple(sorted(inv))


def derived_subgroup(H: PermGroup) -> PermGroup:
    gens = H.generators
    comms = []
    for i, a in enumerate(gens):
        for b in gens[i + 1 :]:
            c = a.inverse() * b.inverse() * a * b
            if not c.is_identity():
                comms.append(c)
    return normal_closure(H, comms)


def structure_probe(H: PermGroup, p: int | None = None, *, bound: int = ENUMERATION_BOUND) -> StructureInfo:
    n = H.order()
    info = StructureInfo(order=n, is_abelian=H.is_abelian(), prime=p)
    if n == 1:
        info.abelian_invariants = ()
        info.is_cyclic = True
        info.derived_length = 0
        return info
    small = n <= bound
    orders = kernels.element_orders(H.elements(bound)) if small else None
    if info.is_abelian:
        info.derived_length = 1
        if small:
            info.abelian_invariants = _invariants_from_orders(orders, n)
            info.is_cyclic = len(info.abelian_invariants) == 1
        else:
            info.notes.append("order-only")
        if p is not None and _is_p_power(n, p):
            info.is_elementary_abelian = all(g.order() == p for g in H.generators) if n > 1 else False
        return info
    if small:
        info.is_cyclic = False
        if n >= 8 and _is_p_power(n, 2):
            info.is_generalized_quaternion = (
                int(np.count_nonzero(orders == 2)) == 1 and int(np.count_nonzero(orders == n // 2)) > 0
            )
    # derived series, stopping when it stabilises
    D = H
    length = 0
    while D.order() > 1 and length < 12:
        D2 = derived_subgroup(D)
        length += 1
        if D2.order() == D.order():
            info.is_perfect = length == 1
            info.notes.append("not solvable")
            break
        D = D2
    else:
        info.derived_length = length
    return info
