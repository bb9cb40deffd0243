"""Components of the graph GG(C) without building the graph.

``C`` is a union of conjugacy classes of elements of prime order ``p``.
Distinct ``u, v`` in ``C`` are adjacent when they commute and ``uv^-1`` or
``u^-1 v`` lies in ``C``; for involutions this is just ``uv in C``.

Conjugation by ``G`` permutes the components, and the component ``L``
through ``t`` is the orbit of a few anchor vertices under its setwise
stabilizer ``N = N_G(L)``. The stabilizer is found from neighbours alone:

* pick an anchor ``a_i = t_i^(c_i)`` in every seed class ``i`` that meets
  ``L`` (``t_i`` the class representative);
* the neighbours of ``a_i`` fall into ``C_G(a_i)``-orbits, the conjugates by
  ``c_i`` of the ``C_G(t_i)``-orbits of neighbours of ``t_i``;
* a neighbour ``u^(c_i)`` with ``t_j^h = u`` either becomes the anchor of
  class ``j`` (``c_j = h c_i``) or contributes ``c_j^-1 h c_i``, which maps
  ``a_j`` into ``L``.

The anchors' centralizers together with those elements generate ``N``
exactly: their orbit on the anchors is closed under adjacency, hence is
``L``, and an element of ``N`` moving ``a_0`` to ``a_0^k`` differs from
``k`` by an element of ``C_G(a_0)``. Then ``|L| = sum_i |N : C_G(a_i)|`` and
``<L>`` is the normal closure of the anchors in ``N``. For one class this
is the familiar ``N = <C_G(t), g_1, ..., g_r>`` with ``|L| = |N : C_G(t)|``.
"""

from __future__ import annotations

import logging
import random
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .backtrack import conjugating_element
from .classops import (
    ENUMERATION_BOUND,
    ClassesIncomplete,
    ConjClassRep,
    StructureInfo,
    SylowNotFound,
    _orbits_under,
    _p_elements,
    centralizer,
    classes_of_order_p,
    is_prime,
    structure_probe,
    sylow_p,
)
from .permcore import (
    PermGroup,
    Permutation,
    format_cycles,
    membership,
    normal_closure,
    parse_cycles,
)

__all__ = [
    "HYPOTHESIS_FAILED",
    "ClassUnion",
    "ComponentReport",
    "Neighbor",
    "OracleComponent",
    "QuotientCertificate",
    "analyze",
    "brute_force_component",
    "component_stabilizer",
    "component_stabilizer_sylow",
    "conjugacy_orbit",
    "enumerate_union",
    "in_class_union",
    "is_adjacent",
    "is_pure",
    "lex_product_check",
    "neighbor_orbit_reps",
    "order_p_classes",
    "quotient_map",
    "quotient_transfer",
    "strongly_p_embedded",
]

log = logging.getLogger(__name__)

ORACLE_BOUND = 20_000
HYPOTHESIS_FAILED = "hypothesis-failed"

METHOD_STABILIZER = "stabilizer-algorithm"
METHOD_SYLOW = "sylow-neighbours"
METHOD_SHORTCUT = "cyclic-sylow-shortcut"
METHOD_BRUTE = "brute-force"


# -- class unions ------------------------------------------------------------------------


def order_p_classes(G: PermGroup, p: int, rng: random.Random | None = None) -> tuple[list[ConjClassRep], PermGroup]:
    """Classes of elements of order ``p`` together with the Sylow subgroup used."""
    rng = rng or random.Random(0)
    S = sylow_p(G, p, rng)
    classes = classes_of_order_p(G, p, rng, sylow=S)
    return classes, S


@dataclass
class ClassUnion:
    """A normal subset ``C`` of ``G``: the union of the classes in ``seeds``.

    ``classes`` lists every class of elements of order ``p`` (empty when
    unknown) and makes membership tests cheap. With ``rational`` set the
    seeds are the distinct classes among the powers of the first seed.
    """

    group: PermGroup
    seeds: list[ConjClassRep]
    p: int
    rational: bool = False
    classes: list[ConjClassRep] = field(default_factory=list)  # all order-p classes, or empty
    sylow: PermGroup | None = None
    _memo: dict[bytes, int | None] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if not self.seeds:
            raise ValueError("a class union needs at least one class")
        for s in self.seeds:
            if s.elt_order != self.p:
                raise ValueError(f"class {s.display_name()} does not have order {self.p}")

    @classmethod
    def single(cls, G: PermGroup, c: ConjClassRep, classes: Sequence[ConjClassRep] = (), **kw) -> ClassUnion:
        return cls(G, [c], c.elt_order, classes=list(classes), **kw)

    @classmethod
    def union(
        cls, G: PermGroup, seeds: Sequence[ConjClassRep], classes: Sequence[ConjClassRep] = (), **kw
    ) -> ClassUnion:
        seeds = list(seeds)
        return cls(G, seeds, seeds[0].elt_order, classes=list(classes), **kw)

    @classmethod
    def rational_closure(
        cls, G: PermGroup, c: ConjClassRep, classes: Sequence[ConjClassRep], **kw
    ) -> ClassUnion:
        """Seeds are the classes of ``t, t^2, ..., t^(p-1)``, first seed ``t``'s."""
        p = c.elt_order
        classes = list(classes)
        seeds = [c]
        for a in range(2, p):
            ta = c.rep**a
            if any(_same_class(G, s, ta) for s in seeds):
                continue
            home = next((k for k in classes if _same_class(G, k, ta)), None)
            if home is None:
                raise ClassesIncomplete(f"power t^{a} of {c.display_name()} is in no listed class")
            seeds.append(home)
        return cls(G, seeds, p, rational=True, classes=classes, **kw)

    @classmethod
    def all_of_order(cls, G: PermGroup, p: int, rng: random.Random | None = None) -> ClassUnion:
        classes, S = order_p_classes(G, p, rng)
        if not classes:
            raise ValueError(f"group has no elements of order {p}")
        return cls(G, list(classes), p, classes=classes, sylow=S)

    def describe(self) -> str:
        names = "+".join(s.display_name() for s in self.seeds)
        return f"rational({self.seeds[0].display_name()})" if self.rational else names

    @property
    def size(self) -> int:
        return sum(s.class_size for s in self.seeds)

    def seed_index(self, g: Permutation) -> int | None:
        """Index of the seed class containing ``g``, or None when ``g`` is not in ``C``."""
        k = g.key
        if k in self._memo:
            return self._memo[k]
        out = None
        if g.order() == self.p:
            ct = g.cycle_type()
            cands = [i for i, s in enumerate(self.seeds) if s.cycle_type == ct]
            # with the full class list, a cycle type owned by one class decides
            sharing = [c for c in self.classes if c.cycle_type == ct]
            if len(cands) == 1 and len(sharing) == 1 and sharing[0] is self.seeds[cands[0]]:
                out = cands[0]
            elif cands:
                out = self._search(g, cands)
        self._memo[k] = out
        return out

    def _search(self, g: Permutation, cands: list[int]) -> int | None:
        if len(cands) > 1:
            orders = {self.seeds[i].centralizer_order for i in cands}
            if len(orders) > 1:
                co = centralizer(self.group, g).order()
                cands = [i for i in cands if self.seeds[i].centralizer_order == co]
        for i in cands:
            if conjugating_element(self.group, self.seeds[i].rep, g) is not None:
                return i
        return None


def _same_class(G: PermGroup, c: ConjClassRep, g: Permutation) -> bool:
    if c.cycle_type != g.cycle_type() or c.elt_order != g.order():
        return False
    return conjugating_element(G, c.rep, g) is not None


def in_class_union(C: ClassUnion, g: Permutation) -> bool:
    if not membership(C.group, g):
        raise ValueError(f"{g} is not in the group")
    return C.seed_index(g) is not None


def _adjacent(C: ClassUnion, u: Permutation, v: Permutation) -> bool:
    if u == v:
        return False
    if C.p == 2:
        return C.seed_index(u * v) is not None
    if not u.commutes_with(v):
        return False
    return C.seed_index(u * v.inverse()) is not None or C.seed_index(u.inverse() * v) is not None


def is_adjacent(C: ClassUnion, u: Permutation, v: Permutation) -> bool:
    """Adjacency in GG(C); both vertices must lie in ``C``."""
    for w in (u, v):
        if not in_class_union(C, w):
            raise ValueError(f"{w} is not in the class union")
    return _adjacent(C, u, v)


# -- neighbours and stabilizers -----------------------------------------------------------


class Neighbor(NamedTuple):
    rep: Permutation  # a neighbour u of t
    seed: int  # index j of the seed class containing u
    conj: Permutation  # h with t_j^h = u


def neighbor_orbit_reps(C: ClassUnion, t: Permutation, *, rng: random.Random | None = None) -> list[Neighbor]:
    """Representatives of the ``C_G(t)``-orbits on the neighbours of ``t``.

    Neighbours of ``t`` commute with it, so they are elements of order ``p``
    of ``C_G(t)``; adjacency to ``t`` is constant on ``C_G(t)``-classes.
    """
    G = C.group
    CT = centralizer(G, t)
    reps = [c.rep for c in classes_of_order_p(CT, C.p, rng or random.Random(1))]
    return _keep_neighbours(C, t, reps)


def _sylow_neighbour_reps(C: ClassUnion, t: Permutation, *, rng: random.Random | None = None) -> list[Neighbor]:
    """Neighbours of ``t`` inside ``S in Syl_p(C_G(t))``, one per ``S``-orbit.

    Every neighbour generates a ``p``-subgroup of ``C_G(t)`` and so has a
    ``C_G(t)``-conjugate in ``S``; the list may hold several
    representatives of one ``C_G(t)``-orbit, which is harmless.
    """
    CT = centralizer(C.group, t)
    S = sylow_p(CT, C.p, rng or random.Random(1))
    if S.order() > ENUMERATION_BOUND:
        raise ClassesIncomplete(f"Sylow subgroup of order {S.order()} too large to enumerate")
    E = _p_elements(S, C.p)
    reps = [Permutation._wrap(E[o[0]]) for o in _orbits_under(S.generators, E)]
    return _keep_neighbours(C, t, reps)


def _keep_neighbours(C: ClassUnion, t: Permutation, reps: Iterable[Permutation]) -> list[Neighbor]:
    out = []
    for u in reps:
        j = C.seed_index(u)
        if j is None or not _adjacent(C, t, u):
            continue
        h = conjugating_element(C.group, C.seeds[j].rep, u)
        if h is None:  # pragma: no cover - seed_index already proved conjugacy
            raise AssertionError("conjugator vanished")
        out.append(Neighbor(u, j, h))
    return out


@dataclass
class _Sweep:
    """Anchors and stabilizer generators for the component of the first seed."""

    anchors: dict[int, Permutation]  # seed index -> c_i with a_i = t_i^(c_i)
    gens: list[Permutation]
    lambda_size: int
    stabilizer: PermGroup


def _sweep(C: ClassUnion, neighbours, start: int = 0) -> _Sweep:
    G = C.group
    ident = G.identity()
    anchors: dict[int, Permutation] = {start: ident}
    gens: list[Permutation] = []
    queue = deque([start])
    while queue:
        i = queue.popleft()
        ci = anchors[i]
        gens.extend(g.conjugate(ci) for g in C.seeds[i].centralizer.generators)
        for nb in neighbours(C, C.seeds[i].rep):
            hc = nb.conj * ci  # t_j^(h c_i) is a neighbour of a_i
            j = nb.seed
            if j not in anchors:
                anchors[j] = hc
                queue.append(j)
            else:
                g = anchors[j].inverse() * hc
                if not g.is_identity():
                    gens.append(g)
    gens = _dedupe(gens)
    H = PermGroup(gens, G.degree) if gens else PermGroup.trivial(G.degree)
    lam = sum(H.order() // C.seeds[i].centralizer_order for i in anchors)
    return _Sweep(anchors, gens, lam, H)


def _dedupe(gens: list[Permutation]) -> list[Permutation]:
    seen, out = set(), []
    for g in gens:
        if g.key not in seen and not g.is_identity():
            seen.add(g.key)
            out.append(g)
    return out


def component_stabilizer(C: ClassUnion, t: Permutation | None = None) -> PermGroup:
    """``N_G(L)`` for the component ``L`` of the first seed representative.

    ``t`` may be given for clarity; it must be that representative.
    """
    _check_start(C, t)
    return _sweep(C, neighbor_orbit_reps).stabilizer


def component_stabilizer_sylow(C: ClassUnion, t: Permutation | None = None) -> PermGroup:
    """As :func:`component_stabilizer`, scanning neighbours inside Sylow subgroups."""
    _check_start(C, t)
    try:
        return _sweep(C, _sylow_neighbour_reps).stabilizer
    except ClassesIncomplete as exc:
        log.info("falling back to class-based neighbour scan: %s", exc)
        return component_stabilizer(C)


def _check_start(C: ClassUnion, t: Permutation | None) -> None:
    if t is not None and t != C.seeds[0].rep:
        raise ValueError("t must be the representative of the first seed class")


# -- reports ---------------------------------------------------------------------------------


@dataclass
class ComponentReport:
    group: str
    class_union: str
    p: int
    rational: bool
    class_order: int
    class_size: int
    centralizer_order: int
    label: str | None
    lambda_size: int | None
    stabilizer_order: int | None
    stabilizer_gens: list[Permutation]
    delta: StructureInfo | None
    connected: str  # "yes" | "no" | "unknown"
    seeds_met: list[str]
    method: str
    union_size: int
    notes: list[str] = field(default_factory=list)
    citations: list[str] = field(default_factory=list)
    delta_group: PermGroup | None = field(default=None, repr=False)
    stabilizer: PermGroup | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        d = self.delta
        delta = None
        if d is not None:
            delta = {"order": d.order, "abelian": d.is_abelian}
            if d.abelian_invariants is not None:
                delta["invariants"] = list(d.abelian_invariants)
            delta.update(
                cyclic=d.is_cyclic,
                elementary_abelian=d.is_elementary_abelian,
                generalized_quaternion=d.is_generalized_quaternion,
                prime=d.prime,
                derived_length=d.derived_length,
                perfect=d.is_perfect,
                structure=d.describe(),
                notes=list(d.notes),
            )
        cls = {"order": self.class_order, "size": self.class_size, "centralizer_order": self.centralizer_order}
        if self.label:
            cls["label"] = self.label
        return {
            "group": self.group,
            "class": cls,
            "class_union": self.class_union,
            "p": self.p,
            "rational": self.rational,
            "union_size": self.union_size,
            "lambda_size": self.lambda_size,
            "delta": delta,
            "stabilizer_order": self.stabilizer_order,
            "stabilizer_gens": [format_cycles(g) for g in self.stabilizer_gens],
            "degree": self.stabilizer_gens[0].degree if self.stabilizer_gens else None,
            "connected": self.connected,
            "seeds_met": list(self.seeds_met),
            "method": self.method,
            "notes": list(self.notes),
            "citations": list(self.citations),
        }

    @classmethod
    def from_dict(cls, d: dict) -> ComponentReport:
        """Inverse of :meth:`to_dict` (the group objects are not serialized)."""
        delta = None
        if d["delta"] is not None:
            x = d["delta"]
            inv = x.get("invariants")
            delta = StructureInfo(
                order=x["order"],
                is_abelian=x["abelian"],
                abelian_invariants=tuple(inv) if inv is not None else None,
                is_cyclic=x["cyclic"],
                is_generalized_quaternion=x["generalized_quaternion"],
                is_elementary_abelian=x["elementary_abelian"],
                prime=x["prime"],
                derived_length=x["derived_length"],
                is_perfect=x["perfect"],
                notes=list(x["notes"]),
            )
        c = d["class"]
        gens = [parse_cycles(g, d["degree"]) for g in d["stabilizer_gens"]]
        return cls(
            group=d["group"],
            class_union=d["class_union"],
            p=d["p"],
            rational=d["rational"],
            class_order=c["order"],
            class_size=c["size"],
            centralizer_order=c["centralizer_order"],
            label=c.get("label"),
            lambda_size=d["lambda_size"],
            stabilizer_order=d["stabilizer_order"],
            stabilizer_gens=gens,
            delta=delta,
            connected=d["connected"],
            seeds_met=list(d["seeds_met"]),
            method=d["method"],
            union_size=d["union_size"],
            notes=list(d["notes"]),
            citations=list(d["citations"]),
        )


def _sylow_is_cyclic_or_quaternion(C: ClassUnion, rng: random.Random) -> bool | None:
    """True when a Sylow ``p``-subgroup has exactly ``p - 1`` elements of order ``p``.

    Those are precisely the cyclic and (for ``p = 2``) generalized
    quaternion ``p``-groups. None when the Sylow subgroup is too large.
    """
    S = C.sylow if C.sylow is not None else sylow_p(C.group, C.p, rng)
    C.sylow = S
    if S.order() > ENUMERATION_BOUND:
        return None
    return _p_elements(S, C.p).shape[0] == C.p - 1


def _shortcut(C: ClassUnion) -> tuple[int, PermGroup, list[int]]:
    """Component of ``t`` when every order-``p`` element commuting with ``t`` is a power of ``t``.

    Vertices are then powers ``t^a``; ``N_G(L)`` normalizes ``<t>`` and
    acts on exponents by multiplication by units ``r`` with ``t^r`` in
    ``t^G``, so it is ``C_G(t)`` extended by conjugators for those ``r``
    that preserve the exponent set.
    """
    G, p, t = C.group, C.p, C.seeds[0].rep
    inside = {a: C.seed_index(t**a) for a in range(1, p)}
    inside = {a: j for a, j in inside.items() if j is not None}

    def adjacent(a: int, b: int) -> bool:
        return ((a - b) % p) in inside or ((b - a) % p) in inside

    E = {1}
    queue = deque([1])
    while queue:
        a = queue.popleft()
        for b in inside:
            if b not in E and adjacent(a, b):
                E.add(b)
                queue.append(b)
    gens = list(C.seeds[0].centralizer.generators)
    for r in sorted(E):
        if r == 1 or inside[r] != 0:
            continue
        if {(a * r) % p for a in E} != E:
            continue
        g = conjugating_element(G, t, t**r)
        if g is not None:
            gens.append(g)
    H = PermGroup(_dedupe(gens), G.degree) if gens else PermGroup.trivial(G.degree)
    met = sorted({inside[a] for a in E})
    return len(E), H, met


def analyze(
    C: ClassUnion,
    *,
    rng: random.Random | None = None,
    use_shortcut: bool = True,
    sylow_neighbours: bool = False,
    probe_bound: int = ENUMERATION_BOUND,
) -> ComponentReport:
    """Component size, component group and stabilizer for the first seed."""
    rng = rng or random.Random(0)
    G, t0 = C.group, C.seeds[0]
    base = {
        "group": G.name or "G",
        "class_union": C.describe(),
        "p": C.p,
        "rational": C.rational,
        "class_order": t0.elt_order,
        "class_size": t0.class_size,
        "centralizer_order": t0.centralizer_order,
        "label": t0.name or t0.label,
        "union_size": C.size,
    }
    notes: list[str] = []
    try:
        method = METHOD_STABILIZER
        shortcut = use_shortcut and _sylow_is_cyclic_or_quaternion(C, rng)
        if shortcut:
            method = METHOD_SHORTCUT
            lam, H, met = _shortcut(C)
            anchors = [t0.rep]
        else:
            fn = _sylow_neighbour_reps if sylow_neighbours else neighbor_orbit_reps
            if sylow_neighbours:
                method = METHOD_SYLOW
            sw = _sweep(C, lambda CU, t: fn(CU, t, rng=rng))
            lam, H, met = sw.lambda_size, sw.stabilizer, sorted(sw.anchors)
            anchors = [C.seeds[i].rep.conjugate(c) for i, c in sw.anchors.items()]
    except (ClassesIncomplete, SylowNotFound) as exc:
        log.warning("analysis incomplete: %s", exc)
        return ComponentReport(
            **base,
            lambda_size=None,
            stabilizer_order=None,
            stabilizer_gens=[],
            delta=None,
            connected="unknown",
            seeds_met=[],
            method=METHOD_STABILIZER,
            notes=[f"incomplete: {exc}"],
        )
    order_H = H.order()
    if len(C.seeds) == 1 and lam * t0.centralizer_order != order_H:  # pragma: no cover - orbit-stabilizer guard
        raise AssertionError("component size times centralizer order differs from stabilizer order")
    D = normal_closure(H, anchors)
    delta = structure_probe(D, C.p, bound=probe_bound)
    connected = order_H == G.order() and len(met) == len(C.seeds)
    if order_H == G.order() and not connected:
        notes.append("stabilizer is G but some seed classes are not met")
    return ComponentReport(
        **base,
        lambda_size=lam,
        stabilizer_order=order_H,
        stabilizer_gens=list(H.generators),
        delta=delta,
        connected="yes" if connected else "no",
        seeds_met=[C.seeds[i].display_name() for i in met],
        method=method,
        notes=notes,
        delta_group=D,
        stabilizer=H,
    )


# -- brute-force oracle ----------------------------------------------------------------------


class OracleComponent(NamedTuple):
    vertices: np.ndarray  # rows: the component of t, in breadth-first order
    stabilizer_order: int
    union_size: int
    class_size: int  # |t^G| counted by the oracle


def enumerate_union(C: ClassUnion, bound: int = ORACLE_BOUND) -> list[np.ndarray]:
    """Every seed class listed explicitly, by breadth-first conjugation."""
    out = []
    total = 0
    gens = [g.array for g in C.group.generators]
    for s in C.seeds:
        rows = conjugacy_orbit(s.rep.array, gens, bound - total)
        total += rows.shape[0]
        out.append(rows)
    return out


def conjugacy_orbit(x: np.ndarray, gens: list[np.ndarray], bound: int) -> np.ndarray:
    """Rows of the conjugacy class of ``x`` under the group generated by ``gens``."""
    x = x.astype(np.int32)
    seen = {x.tobytes()}
    rows = [x]
    frontier = np.array([x], dtype=np.int32)
    while frontier.shape[0]:
        new = []
        for g in gens:
            Y = kernels.conjugate_rows(frontier, g)
            for y in Y:
                k = y.tobytes()
                if k not in seen:
                    seen.add(k)
                    new.append(y)
        if len(seen) > bound:
            raise ValueError(f"class union exceeds the oracle bound of {bound} vertices")
        rows.extend(new)
        frontier = np.array(new, dtype=np.int32).reshape(-1, x.size)
    return np.array(rows, dtype=np.int32)


def _vertex_index(blocks: list[np.ndarray]) -> tuple[np.ndarray, dict[bytes, int], np.ndarray]:
    V = np.concatenate(blocks)
    index = {V[i].tobytes(): i for i in range(V.shape[0])}
    which = np.concatenate([np.full(b.shape[0], k) for k, b in enumerate(blocks)])
    return V, index, which


def _neighbours_of(i: int, V: np.ndarray, index: dict[bytes, int], p: int) -> list[int]:
    u = V[i]
    uinv = np.argsort(u).astype(np.int32)
    mask = kernels.commuting_with(u, V)
    mask[i] = False
    out = []
    for j in np.flatnonzero(mask):
        v = V[j]
        # u v^-1 as a row: apply u then v^-1
        vinv = np.argsort(v).astype(np.int32)
        if vinv[u].tobytes() in index or p != 2 and v[uinv].tobytes() in index:
            out.append(int(j))
    return out


def brute_force_component(C: ClassUnion, t: Permutation | None = None, *, bound: int = ORACLE_BOUND) -> OracleComponent:
    """Explicit component of ``t`` (default: the first seed representative).

    The stabilizer order is ``|L meet t^G| * |G| / |t^G|``: the stabilizer
    is transitive on that set with point stabilizer ``C_G(t)``.
    """
    t = t if t is not None else C.seeds[0].rep
    blocks = enumerate_union(C, bound)
    V, index, which = _vertex_index(blocks)
    start = index.get(t.array.astype(np.int32).tobytes())
    if start is None:
        raise ValueError("t is not in the class union")
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for j in _neighbours_of(i, V, index, C.p):
            if j not in seen:
                seen.add(j)
                order.append(j)
                queue.append(j)
    k = int(which[start])
    in_class = sum(1 for i in order if which[i] == k)
    class_size = blocks[k].shape[0]
    G_order = C.group.order()
    return OracleComponent(V[order], in_class * G_order // class_size, V.shape[0], class_size)


# -- strongly p-embedded subgroups ----------------------------------------------------------


def strongly_p_embedded(G: PermGroup, p: int, rng: random.Random | None = None) -> bool | None:
    """Whether ``G`` has a strongly ``p``-embedded subgroup; None when undecided.

    This holds exactly when the commuting graph on the elements of order
    ``p`` is disconnected, and on that set it coincides with GG(C).
    """
    if G.order() % p:
        raise ValueError(f"{p} does not divide the group order")
    try:
        C = ClassUnion.all_of_order(G, p, rng)
    except (ClassesIncomplete, SylowNotFound) as exc:
        log.warning("class enumeration incomplete: %s", exc)
        return None
    rep = analyze(C, rng=rng)
    if rep.connected == "unknown":
        return None
    return rep.connected == "no"


# -- central quotients -----------------------------------------------------------------------


def _check_central(G: PermGroup, Z: PermGroup) -> None:
    for z in Z.generators:
        if not membership(G, z):
            raise ValueError("Z is not a subgroup of G")
        if not all(z.commutes_with(g) for g in G.generators):
            raise ValueError("Z is not central in G")


def quotient_map(G: PermGroup, Z: PermGroup, *, bound: int = 200_000):
    """A faithful permutation action of ``G/Z`` and the map from ``G``.

    Tries the action on the ``Z``-orbits (blocks, as ``Z`` is normal); when
    its kernel is larger than ``Z`` falls back to the action on the cosets
    of ``Z``, which needs ``G`` enumerated. Returns ``(Q, phi, how)``.
    """
    _check_central(G, Z)
    n = G.degree
    label = np.full(n, -1, dtype=np.int64)
    nb = 0
    for a in range(n):
        if label[a] < 0:
            for b in Z.orbit(a):
                label[b] = nb
            nb += 1
    reps = np.array([int(np.flatnonzero(label == k)[0]) for k in range(nb)])

    def on_blocks(g: Permutation) -> Permutation:
        return Permutation(label[g.array[reps]])

    qgens = [on_blocks(g) for g in G.generators]
    Q = PermGroup(qgens, nb)
    if Q.order() * Z.order() == G.order():
        return Q, on_blocks, "block-action"
    if G.order() > bound:
        raise ValueError("block action is not faithful on G/Z and G is too large for the coset action")
    E = G.elements()
    index: dict[bytes, int] = {}
    cosets: list[np.ndarray] = []
    Zelts = Z.elements()
    for row in E:
        if row.tobytes() in index:
            continue
        k = len(cosets)
        coset = Zelts[:, row]  # z * g
        for c in coset:
            index[c.tobytes()] = k
        cosets.append(row)

    def on_cosets(g: Permutation) -> Permutation:
        ga = g.array
        return Permutation([index[c[ga].tobytes()] for c in cosets])

    Q = PermGroup([on_cosets(g) for g in G.generators], len(cosets))
    return Q, on_cosets, "coset-action"


@dataclass
class QuotientCertificate:
    method: str
    classes: list[tuple[str, int, int]]  # (class of G, |class|, |image class|)
    pairs_checked: int
    pairs_agreeing: int

    @property
    def ok(self) -> bool:
        return self.pairs_checked == self.pairs_agreeing and all(a == b for _, a, b in self.classes)


def quotient_transfer(
    G: PermGroup,
    Z: PermGroup,
    p: int,
    *,
    samples: int = 200,
    rng: random.Random | None = None,
) -> QuotientCertificate:
    """Check that ``g -> Zg`` carries GG(C) for each order-``p`` class isomorphically.

    Needs ``Z`` central with ``p`` coprime to ``|Z|``. Class sizes must
    match and adjacency must agree on sampled commuting pairs.
    """
    if Z.order() % p == 0:
        raise ValueError(f"{p} divides |Z|")
    _check_central(G, Z)
    rng = rng or random.Random(0)
    if Z.order() == 1:
        return QuotientCertificate("identity", [], 0, 0)
    Q, phi, how = quotient_map(G, Z)
    classes, _ = order_p_classes(G, p, rng)
    qclasses, _ = order_p_classes(Q, p, rng)
    rows = []
    checked = agree = 0
    for c in classes:
        img = phi(c.rep)
        home = next((k for k in qclasses if _same_class(Q, k, img)), None)
        rows.append((c.display_name(), c.class_size, home.class_size if home else 0))
        if home is None:
            continue
        CU = ClassUnion.single(G, c, classes)
        QU = ClassUnion.single(Q, home, qclasses)
        CT = centralizer(G, c.rep)
        for _ in range(max(1, samples // len(classes))):
            g = G.random_element(rng)
            u = c.rep.conjugate(g)
            # a random order-p element commuting with u, or a random conjugate
            v = _random_order_p(CT, p, rng)
            v = v.conjugate(g) if v is not None else c.rep.conjugate(G.random_element(rng))
            if CU.seed_index(v) is None:
                continue
            checked += 1
            agree += _adjacent(CU, u, v) == _adjacent(QU, phi(u), phi(v))
    return QuotientCertificate(how, rows, checked, agree)


def _random_order_p(H: PermGroup, p: int, rng: random.Random) -> Permutation | None:
    for _ in range(20):
        g = H.random_element(rng)
        o = g.order()
        if o % p == 0:
            return g ** (o // p)
    return None


def lex_product_check(
    G: PermGroup,
    Z: PermGroup,
    c: ConjClassRep,
    *,
    bound: int = ORACLE_BOUND,
) -> bool | str:
    """Brute-force check that GG(t^G) is GG(image class) blown up by edgeless fibres.

    ``Z`` must be a central 2-group and ``t^G`` must be the full preimage of
    an involution class of ``G/Z``; otherwise :data:`HYPOTHESIS_FAILED` is
    returned. The check compares, for every vertex ``u``, the neighbour set
    of ``u`` with the preimage of the neighbour set of its image.
    """
    _check_central(G, Z)
    z = Z.order()
    if z & (z - 1):
        raise ValueError("Z must be a 2-group")
    if c.elt_order != 2:
        return HYPOTHESIS_FAILED
    if z == 1:
        return True
    Q, phi, _ = quotient_map(G, Z)
    tbar = phi(c.rep)
    if tbar.order() != 2:
        return HYPOTHESIS_FAILED
    qc = ConjClassRep(tbar, centralizer(Q, tbar), 0, 2, tbar.cycle_type())
    qc.class_size = Q.order() // qc.centralizer_order
    if c.class_size != z * qc.class_size:
        return HYPOTHESIS_FAILED
    CU = ClassUnion.single(G, c)
    QU = ClassUnion.single(Q, qc)
    (V,) = enumerate_union(CU, bound)
    (W,) = enumerate_union(QU, bound)
    index = {V[i].tobytes(): i for i in range(V.shape[0])}
    qindex = {W[i].tobytes(): i for i in range(W.shape[0])}
    img = np.array([qindex[phi(Permutation._wrap(v)).array.tobytes()] for v in V])
    fibres: list[list[int]] = [[] for _ in range(W.shape[0])]
    for i, k in enumerate(img):
        fibres[k].append(i)
    qnb: dict[int, set[int]] = {}
    for i in range(V.shape[0]):
        k = int(img[i])
        if k not in qnb:
            qnb[k] = set(_neighbours_of(k, W, qindex, 2))
        expect = {j for m in qnb[k] for j in fibres[m]}
        if set(_neighbours_of(i, V, index, 2)) != expect:
            return False
    return True


# -- purity ----------------------------------------------------------------------------------


def is_pure(C: ClassUnion, H: PermGroup, *, bound: int = ENUMERATION_BOUND) -> bool:
    """True when every non-identity element of ``H`` lies in ``C``."""
    if H.order() > bound:
        raise ValueError(f"subgroup of order {H.order()} exceeds the enumeration bound")
    for g in H.generators:
        if not membership(C.group, g):
            raise ValueError("H is not a subgroup of G")
    E = H.elements(bound)
    orders = kernels.element_orders(E)
    if np.any((orders != 1) & (orders != C.p)):
        return False
    for row in E[orders == C.p]:
        if C.seed_index(Permutation._wrap(row)) is None:
            return False
    return True
