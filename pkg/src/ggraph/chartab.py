"""Character tables, class multiplication coefficients and the
coefficient-based tests for GG(C).

Tables are read from ``.ctbl`` files and validated before use: both
orthogonality relations are checked exactly in cyclotomic arithmetic.

File grammar (one record per line, ``#`` starts a comment line)::

    name <text>
    order <int>
    conductor <int>
    class <label> <size> <element order> [power <p>:<label>]... [inverse <label>]
    char <entry> <entry> ...          # one entry per class, in class order

An entry is a sum of terms with an optional leading sign, each term being
``c``, ``c*z^k``, ``c*z``, ``z^k`` or ``z`` with ``c`` an integer or a fraction
``a/b``; ``z`` is a primitive ``conductor``-th root of unity.  Any other
token is rejected.

The class multiplication coefficient ``n(C1, C2, C3)`` counts pairs
``(x, y)`` in ``C1 x C2`` with ``xy = t`` for a fixed ``t`` in ``C3``; from the
table it is ``|C1||C2|/|G| * sum_chi chi(g1) chi(g2) conj(chi(g3)) / chi(1)``.
"""

from __future__ import annotations

import itertools
import logging
import os
import re
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from .classops import ConjClassRep, _make_class
from .cyclotomic import Cyclotomic, csum, factor
from .gggraph import ORACLE_BOUND, conjugacy_orbit
from .groups import _resolve
from .permcore import PermGroup, Permutation

log = logging.getLogger(__name__)

__all__ = [
    "CharacterTable",
    "DataIntegrityError",
    "OrthogonalityError",
    "TableClass",
    "TableParseError",
    "brute_force_coeff",
    "class_mult_coeff",
    "clique_test",
    "edge_exists",
    "group_classes",
    "load_table",
    "match_classes",
    "multiclass_lift_test",
    "parse_entry",
    "parse_table",
]


class TableParseError(ValueError):
    """The file does not follow the ``.ctbl`` grammar."""


class OrthogonalityError(ValueError):
    """An orthogonality relation fails; ``pair`` names the offending rows or columns."""

    def __init__(self, message: str, kind: str, pair: tuple[str, str]):
        super().__init__(message)
        self.kind = kind
        self.pair = pair


class DataIntegrityError(ValueError):
    """A table-derived quantity that must be a non-negative integer is not."""


@dataclass(frozen=True)
class TableClass:
    label: str
    size: int
    order: int
    power: dict[int, str] = field(default_factory=dict)
    inverse: str | None = None


@dataclass
class CharacterTable:
    name: str
    group_order: int
    conductor: int
    classes: list[TableClass]
    irreducibles: list[list[Cyclotomic]]
    inverse: list[int] = field(default_factory=list)
    path: str | None = None

    def __post_init__(self):
        self._index = {c.label: i for i, c in enumerate(self.classes)}

    @property
    def labels(self) -> list[str]:
        return [c.label for c in self.classes]

    def class_index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{self.name}: no class {label!r}") from None

    def cls(self, label: str) -> TableClass:
        return self.classes[self.class_index(label)]

    def identity_index(self) -> int:
        return next(i for i, c in enumerate(self.classes) if c.order == 1)

    def degrees(self) -> list[int]:
        e = self.identity_index()
        return [row[e].to_int() for row in self.irreducibles]

    def centralizer_order(self, label: str) -> int:
        return self.group_order // self.cls(label).size

    def column(self, label: str) -> list[Cyclotomic]:
        j = self.class_index(label)
        return [row[j] for row in self.irreducibles]

    def is_rational_class(self, label: str) -> bool:
        """A class is rational exactly when every character is rational on it."""
        return all(v.is_rational() for v in self.column(label))

    def inverse_label(self, label: str) -> str:
        return self.classes[self.inverse[self.class_index(label)]].label


# ---------------------------------------------------------------- parsing

_TERM = re.compile(r"([+-]?)(?:(\d+(?:/\d+)?)(?:\*z(?:\^(\d+))?)?|z(?:\^(\d+))?)")


def parse_entry(text: str, n: int) -> Cyclotomic:
    """Parse one cyclotomic literal over conductor ``n``."""
    terms: dict[int, Fraction | int] = {}
    pos = 0
    if not text:
        raise TableParseError("empty entry")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos or (pos > 0 and not m.group(1)):
            raise TableParseError(f"bad cyclotomic literal {text!r} at offset {pos}")
        sign, coeff, k1, k2 = m.groups()
        if coeff is None:
            c: Fraction | int = 1
            k = int(k2) if k2 is not None else 1
        else:
            c = Fraction(coeff) if "/" in coeff else int(coeff)
            if "*z" in m.group(0):
                k = int(k1) if k1 is not None else 1
            else:
                k = 0
        if sign == "-":
            c = -c
        terms[k % n] = terms.get(k % n, 0) + c
        pos = m.end()
    return Cyclotomic(n, terms)


def _parse_class(fields: list[str], lineno: int) -> TableClass:
    if len(fields) < 3:
        raise TableParseError(f"line {lineno}: class needs label, size and element order")
    label = fields[0]
    try:
        size, order = int(fields[1]), int(fields[2])
    except ValueError:
        raise TableParseError(f"line {lineno}: class size and order must be integers") from None
    power: dict[int, str] = {}
    inverse = None
    rest = fields[3:]
    i = 0
    while i < len(rest):
        tok = rest[i]
        if tok == "power" and i + 1 < len(rest):
            p, sep, lab = rest[i + 1].partition(":")
            if not sep or not p.isdigit() or not lab:
                raise TableParseError(f"line {lineno}: bad power map entry {rest[i + 1]!r}")
            power[int(p)] = lab
            i += 2
        elif tok == "inverse" and i + 1 < len(rest):
            inverse = rest[i + 1]
            i += 2
        else:
            raise TableParseError(f"line {lineno}: unknown token {tok!r}")
    return TableClass(label, size, order, power, inverse)


def _read(text: str, source: str) -> CharacterTable:
    name = None
    order = conductor = None
    classes: list[TableClass] = []
    raw_rows: list[tuple[int, list[str]]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "name":
            name = rest
        elif key in ("order", "conductor"):
            if not rest.isdigit() or int(rest) < 1:
                raise TableParseError(f"line {lineno}: {key} must be a positive integer")
            if key == "order":
                order = int(rest)
            else:
                conductor = int(rest)
        elif key == "class":
            classes.append(_parse_class(rest.split(), lineno))
        elif key == "char":
            raw_rows.append((lineno, rest.split()))
        else:
            raise TableParseError(f"line {lineno}: unknown keyword {key!r}")
    if order is None or conductor is None:
        raise TableParseError(f"{source}: order and conductor are required")
    if not classes:
        raise TableParseError(f"{source}: no classes")
    labels = [c.label for c in classes]
    if len(set(labels)) != len(labels):
        raise TableParseError(f"{source}: repeated class label")
    rows = []
    for lineno, entries in raw_rows:
        if len(entries) != len(classes):
            raise TableParseError(f"line {lineno}: {len(entries)} entries for {len(classes)} classes")
        try:
            rows.append([parse_entry(e, conductor) for e in entries])
        except TableParseError as exc:
            raise TableParseError(f"line {lineno}: {exc}") from None
    if len(rows) != len(classes):
        raise TableParseError(f"{source}: {len(rows)} characters for {len(classes)} classes")
    for c in classes:
        refs = list(c.power.values()) + ([c.inverse] if c.inverse else [])
        for r in refs:
            if r not in labels:
                raise TableParseError(f"{source}: class {c.label} refers to unknown class {r!r}")
    return CharacterTable(name or source, order, conductor, classes, rows, path=source)


# ------------------------------------------------------------- validation


def _key(v: Cyclotomic) -> frozenset:
    return frozenset(v.terms.items())


def _column_keys(T: CharacterTable, j: int, conj: bool = False) -> tuple:
    return tuple(_key(row[j].conj() if conj else row[j]) for row in T.irreducibles)


def _power_class(T: CharacterTable, i: int, e: int) -> int | None:
    """Class of ``g^e`` for ``g`` in class ``i`` via the prime power maps."""
    for q in _prime_factors(e):
        while e % q == 0:
            lab = T.classes[i].power.get(q)
            if lab is None:
                return None
            i = T.class_index(lab)
            e //= q
    return i


def _prime_factors(n: int) -> list[int]:
    return [q for q, _ in factor(n)]


def _resolve_inverses(T: CharacterTable) -> list[int]:
    """Inverse class of every column: from the file, else power maps, else values."""
    k = len(T.classes)
    conj_cols = [_column_keys(T, j, conj=True) for j in range(k)]
    cols = {}
    for j in range(k):
        cols.setdefault(_column_keys(T, j), []).append(j)
    inv = []
    for i, c in enumerate(T.classes):
        j = None
        if c.inverse is not None:
            j = T.class_index(c.inverse)
        elif c.order <= 2:
            j = i
        elif c.power:
            # g^-1 = g^e for any e = -1 mod o(g); pick one whose primes have maps
            for t in range(64):
                e = c.order - 1 + t * c.order
                j = _power_class(T, i, e)
                if j is not None:
                    break
        if j is None:
            cands = cols.get(conj_cols[i], [])
            if len(cands) != 1:
                raise TableParseError(f"{T.name}: inverse of class {c.label} is ambiguous")
            j = cands[0]
        if _column_keys(T, j) != conj_cols[i]:
            raise TableParseError(
                f"{T.name}: column {T.classes[j].label} is not the complex conjugate of column {c.label}"
            )
        inv.append(j)
    return inv


def _split(T: CharacterTable) -> tuple[np.ndarray, dict[int, set[int]], dict[int, set[int]]]:
    """Integer parts (object array) and the positions of non-integer entries."""
    k = len(T.classes)
    I = np.zeros((k, k), dtype=object)
    by_row: dict[int, set[int]] = {}
    by_col: dict[int, set[int]] = {}
    for r, row in enumerate(T.irreducibles):
        for j, v in enumerate(row):
            if v.is_integer():
                I[r, j] = v.to_int()
            else:
                I[r, j] = 0
                by_row.setdefault(r, set()).add(j)
                by_col.setdefault(j, set()).add(r)
    return I, by_row, by_col


def validate(T: CharacterTable) -> None:
    """Check class sizes, degrees and both orthogonality relations exactly.

    Integer entries go through one big-integer matrix product per relation.
    Non-integer entries are corrected pair by pair in cyclotomic arithmetic,
    which is cheap because character tables are mostly integral.
    """
    k = len(T.classes)
    sizes = [c.size for c in T.classes]
    if sum(sizes) != T.group_order:
        raise TableParseError(f"{T.name}: class sizes sum to {sum(sizes)}, not {T.group_order}")
    ids = [i for i, c in enumerate(T.classes) if c.order == 1]
    if len(ids) != 1 or sizes[ids[0]] != 1:
        raise TableParseError(f"{T.name}: there must be exactly one identity class, of size 1")
    for c in T.classes:
        if T.group_order % c.size:
            raise TableParseError(f"{T.name}: class {c.label} size does not divide the group order")
    for r, row in enumerate(T.irreducibles):
        d = row[ids[0]]
        if not d.is_integer() or d.to_int() <= 0:
            raise TableParseError(f"{T.name}: character {r + 1} has degree {d}")
    T.inverse = _resolve_inverses(T)

    I, by_row, by_col = _split(T)
    irr = T.irreducibles
    conj = {(r, j): irr[r][j].conj() for r, cols in by_row.items() for j in cols}

    def cbar(r: int, j: int) -> Cyclotomic:
        return conj.get((r, j), irr[r][j])

    s = np.array(sizes, dtype=object)
    P = (I * s) @ I.T
    for a in range(k):
        for b in range(a, k):
            cols = by_row.get(a, set()) | by_row.get(b, set())
            expected = T.group_order if a == b else 0
            if cols:
                terms = ((irr[a][j] * cbar(b, j) - int(I[a, j] * I[b, j])) * sizes[j] for j in sorted(cols))
                value = csum(terms, T.conductor) + int(P[a, b])
            else:
                value = Cyclotomic.rational(int(P[a, b]))
            if value != expected:
                raise OrthogonalityError(
                    f"{T.name}: row orthogonality fails for characters {a + 1} and {b + 1}: "
                    f"sum is {value}, expected {expected}",
                    "row",
                    (f"X.{a + 1}", f"X.{b + 1}"),
                )
    Q = I.T @ I
    for i in range(k):
        for j in range(i, k):
            rows = by_col.get(i, set()) | by_col.get(j, set())
            expected = T.group_order // sizes[i] if i == j else 0
            if rows:
                value = csum((irr[r][i] * cbar(r, j) - int(I[r, i] * I[r, j]) for r in sorted(rows)), T.conductor)
                value = value + int(Q[i, j])
            else:
                value = Cyclotomic.rational(int(Q[i, j]))
            if value != expected:
                ci, cj = T.classes[i].label, T.classes[j].label
                raise OrthogonalityError(
                    f"{T.name}: column orthogonality fails for classes {ci} and {cj}: "
                    f"sum is {value}, expected {expected}",
                    "column",
                    (ci, cj),
                )


def parse_table(source: str | os.PathLike, *, text: str | None = None) -> CharacterTable:
    """Read and validate a ``.ctbl`` file (or ``text`` labelled by ``source``)."""
    if text is None:
        text = Path(source).read_text()
    T = _read(text, str(source))
    validate(T)
    log.info("validated table %s: %d classes", T.name, len(T.classes))
    return T


@lru_cache(maxsize=16)
def _load_cached(path: str) -> CharacterTable:
    return parse_table(path)


def load_table(spec: str) -> CharacterTable:
    """A validated table from a path or the stem of a shipped ``.ctbl`` file."""
    return _load_cached(str(_resolve(spec, ".ctbl").resolve()))


# ------------------------------------------------------------ coefficients


def _class_of(T: CharacterTable, c: str | int) -> int:
    return c if isinstance(c, int) else T.class_index(c)


def class_mult_coeff(T: CharacterTable, c1: str | int, c2: str | int, c3: str | int) -> int:
    """``n(C1, C2, C3)`` from the character table, as an exact non-negative integer."""
    i1, i2, i3 = (_class_of(T, c) for c in (c1, c2, c3))
    e = T.identity_index()
    rational = Fraction(0)
    irrational = []
    for row in T.irreducibles:
        deg = row[e].to_int()
        a, b, c = row[i1], row[i2], row[i3]
        if a.is_integer() and b.is_integer() and c.is_integer():
            rational += Fraction(a.to_int() * b.to_int() * c.to_int(), deg)
        else:
            irrational.append(a * b * c.conj() / deg)
    total = csum(irrational, T.conductor) + rational
    n = total * Fraction(T.classes[i1].size * T.classes[i2].size, T.group_order)
    if not n.is_integer() or n.to_int() < 0:
        raise DataIntegrityError(
            f"{T.name}: n({T.classes[i1].label},{T.classes[i2].label},{T.classes[i3].label}) = {n} "
            "is not a non-negative integer"
        )
    return n.to_int()


def _class_rows(G: PermGroup, c: ConjClassRep, bound: int) -> np.ndarray:
    if c.class_size > bound:
        raise ValueError(f"class of size {c.class_size} exceeds the bound {bound}")
    gens = [g.array for g in G.generators]
    return conjugacy_orbit(c.rep.array, gens, bound)


def brute_force_coeff(
    G: PermGroup, C1: ConjClassRep, C2: ConjClassRep, C3: ConjClassRep, *, bound: int = ORACLE_BOUND
) -> int:
    """Count ``x`` in ``C1`` with ``x^-1 t`` in ``C2`` for ``t`` the representative of ``C3``."""
    X = _class_rows(G, C1, bound)
    Y = _class_rows(G, C2, bound)
    members = {y.tobytes() for y in Y}
    t = C3.rep.array.astype(np.int32)
    Xinv = np.argsort(X, axis=1).astype(np.int32)
    prods = t[Xinv]  # row i is x_i^-1 t under the right action
    return sum(1 for r in prods if r.tobytes() in members)


def group_classes(G: PermGroup, *, bound: int = 100_000) -> list[ConjClassRep]:
    """All conjugacy classes of a small group by enumerating its elements."""
    if G.order() > bound:
        raise ValueError(f"group order {G.order()} exceeds the bound {bound}")
    gens = [g.array for g in G.generators]
    seen: set[bytes] = set()
    out = []
    for x in G.elements():
        x = np.asarray(x, dtype=np.int32)
        if x.tobytes() in seen:
            continue
        rows = conjugacy_orbit(x, gens, bound)
        seen.update(r.tobytes() for r in rows)
        out.append(_make_class(G, Permutation(x)))
    out.sort(key=lambda c: (c.elt_order, c.class_size, c.cycle_type))
    return out


def match_classes(T: CharacterTable, G: PermGroup, classes: Sequence[ConjClassRep]) -> dict[str, ConjClassRep]:
    """Map table labels to group classes consistently with orders, sizes and power maps.

    The labelling is determined up to table automorphisms that preserve the
    power maps; coefficients are invariant under those.
    """
    index: dict[bytes, int] = {}
    gens = [g.array for g in G.generators]
    for n, c in enumerate(classes):
        for r in conjugacy_orbit(c.rep.array, gens, G.order()):
            index[r.tobytes()] = n
    groups: dict[tuple[int, int], list[int]] = {}
    for n, c in enumerate(classes):
        groups.setdefault((c.elt_order, c.class_size), []).append(n)
    slots: dict[tuple[int, int], list[int]] = {}
    for i, c in enumerate(T.classes):
        slots.setdefault((c.order, c.size), []).append(i)
    if sorted((k, len(v)) for k, v in groups.items()) != sorted((k, len(v)) for k, v in slots.items()):
        raise ValueError(f"classes of the group do not match table {T.name}")

    def power_ok(assign: dict[int, int]) -> bool:
        for i, n in assign.items():
            for p, lab in T.classes[i].power.items():
                target = T.class_index(lab)
                if target in assign:
                    pw = (classes[n].rep ** p).array.astype(np.int32)
                    if index[pw.tobytes()] != assign[target]:
                        return False
        return True

    keys = sorted(slots)
    choices = [list(itertools.permutations(groups[k])) for k in keys]
    for combo in itertools.product(*choices):
        assign = {}
        for k, perm in zip(keys, combo):
            assign.update(zip(slots[k], perm))
        if power_ok(assign):
            return {T.classes[i].label: classes[n] for i, n in assign.items()}
    raise ValueError(f"no labelling of the classes agrees with the power maps of {T.name}")


# ------------------------------------------------------- graph criteria


def edge_exists(T: CharacterTable, label: str) -> bool:
    """Whether GG(C) has an edge for an involution class ``C``: ``n(C, C, C) != 0``."""
    if T.cls(label).order != 2:
        raise ValueError(f"{label} is not an involution class of {T.name}")
    return class_mult_coeff(T, label, label, label) != 0


COMPONENT_IS_CLIQUE = "component-is-K_{p-1}"
NONTRIVIAL_COMPONENT = "nontrivial-component"
SINGLETON_COMPONENT = "component-is-singleton"
INCONCLUSIVE = "inconclusive"


def clique_test(T: CharacterTable, label: str, p: int, rational: bool) -> str:
    """Coefficient test for the component of ``t`` in GG(t^G).

    When the class contains all generators of ``<t>`` and ``n(C) = p - 2``
    the component of ``t`` is the clique on ``<t> - {1}``.  For ``p = 2`` the
    converse holds as well, so ``n(C)`` decides between a singleton and a
    larger component.
    """
    c = T.cls(label)
    if c.order != p:
        raise ValueError(f"class {label} has element order {c.order}, not {p}")
    table_rational = T.is_rational_class(label)
    if rational and not table_rational:
        raise ValueError(f"class {label} of {T.name} is not rational")
    n = class_mult_coeff(T, label, label, label)
    if p == 2:
        return NONTRIVIAL_COMPONENT if n else SINGLETON_COMPONENT
    if rational and n == p - 2:
        return COMPONENT_IS_CLIQUE
    return INCONCLUSIVE


LIFT_CONNECTED = "connected"
LIFT_EDGELESS = "edgeless"
LIFT_SINGLE_CLASS = "single-class-lift"


def multiclass_lift_test(T: CharacterTable, lifted: Sequence[str], quotient_connected: bool) -> dict[str, str]:
    """Verdicts for the classes ``C_1..C_m`` lying over a connected involution class.

    ``lifted[0]`` is the designated class ``C_1``.  If ``n(C_1, C_1, C_j) = 0``
    for every ``j > 1`` then GG(C_1) is connected and every GG(C_j) with
    ``j > 1`` is edgeless.  Otherwise nothing is concluded.  A single lifted
    class is flagged for the lexicographic-product route instead.
    """
    if not lifted:
        raise ValueError("no lifted classes given")
    for lab in lifted:
        if T.cls(lab).order != 2:
            raise ValueError(f"{lab} is not an involution class of {T.name}")
    if len(lifted) == 1:
        return {lifted[0]: LIFT_SINGLE_CLASS}
    c1 = lifted[0]
    if quotient_connected and all(class_mult_coeff(T, c1, c1, cj) == 0 for cj in lifted[1:]):
        return {c1: LIFT_CONNECTED, **{cj: LIFT_EDGELESS for cj in lifted[1:]}}
    return {lab: INCONCLUSIVE for lab in lifted}
