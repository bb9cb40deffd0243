from __future__ import annotations

import itertools
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ggraph.chartab import (
    COMPONENT_IS_CLIQUE,
    INCONCLUSIVE,
    LIFT_CONNECTED,
    LIFT_EDGELESS,
    LIFT_SINGLE_CLASS,
    NONTRIVIAL_COMPONENT,
    SINGLETON_COMPONENT,
    OrthogonalityError,
    TableParseError,
    brute_force_coeff,
    class_mult_coeff,
    clique_test,
    edge_exists,
    group_classes,
    load_table,
    match_classes,
    multiclass_lift_test,
    parse_entry,
    parse_table,
)
from ggraph.cyclotomic import Cyclotomic, zeta
from ggraph.groups import alt, data_dir, psl2

C3 = """name C3
order 3
conductor 3
class 1a 1 1
class 3a 1 3
class 3b 1 3
char 1 1 1
char 1 z z^2
char 1 z^2 z
"""


def test_parse_entry():
    assert parse_entry("-z^2-z^3", 5) == -(zeta(5, 2) + zeta(5, 3))
    assert parse_entry("3", 1) == 3
    assert parse_entry("1/2*z^3+z", 8) == Cyclotomic(8, {3: Fraction(1, 2), 1: 1})
    assert parse_entry("2*z", 7) == 2 * zeta(7)
    for bad in ["", "z^", "1 2", "2*", "x"]:
        with pytest.raises(TableParseError):
            parse_entry(bad, 5)


def test_sym3_table():
    T = load_table("sym3")
    assert T.degrees() == [1, 1, 2]
    assert T.is_rational_class("3a")
    assert class_mult_coeff(T, "2a", "2a", "1a") == 3
    assert class_mult_coeff(T, "2a", "2a", "3a") == 3
    assert class_mult_coeff(T, "2a", "2a", "2a") == 0


def test_inverse_from_values():
    T = parse_table("c3", text=C3)
    assert T.inverse_label("3a") == "3b"
    assert T.inverse_label("1a") == "1a"
    assert not T.is_rational_class("3a")
    assert class_mult_coeff(T, "3a", "3a", "3b") == 1
    assert class_mult_coeff(T, "3a", "3a", "3a") == 0


def test_inverse_from_power_maps():
    T = load_table("a5")
    assert T.inverse_label("5A") == "5A"
    T7 = load_table("l27")
    for c in T7.classes:
        if c.order == 7:
            assert T7.inverse_label(c.label) != c.label


def test_rejects_structural_errors():
    with pytest.raises(TableParseError):
        parse_table("x", text=C3.replace("order 3", "order 4"))
    with pytest.raises(TableParseError):
        parse_table("x", text=C3.replace("char 1 z^2 z\n", ""))
    with pytest.raises(TableParseError):
        parse_table("x", text=C3.replace("class 3b 1 3", "class 3a 1 3"))
    with pytest.raises(TableParseError):
        parse_table("x", text=C3 + "bogus 1\n")
    with pytest.raises(TableParseError):
        parse_table("x", text=C3.replace("class 3a 1 3", "class 3a 1 3 power 3:9z"))


def test_rejects_swapped_characters():
    with pytest.raises(OrthogonalityError):
        parse_table("x", text=C3.replace("char 1 z^2 z", "char 1 z z^2"))


def _perturb(text: str, row: int, col: int, delta: int) -> str:
    lines = text.splitlines()
    idx = [i for i, l in enumerate(lines) if l.startswith("char ")]
    fields = lines[idx[row]].split()
    fields[col + 1] = f"{fields[col + 1]}+{delta}" if delta > 0 else f"{fields[col + 1]}{delta}"
    lines[idx[row]] = " ".join(fields)
    return "\n".join(lines) + "\n"


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(["a5", "l27", "s5", "m11"]),
    st.integers(0, 1000),
    st.integers(0, 1000),
    st.sampled_from([-2, -1, 1, 2]),
)
def test_perturbed_tables_are_rejected(name, r, c, delta):
    text = (data_dir() / f"{name}.ctbl").read_text()
    k = sum(1 for l in text.splitlines() if l.startswith("char "))
    bad = _perturb(text, r % k, c % k, delta)
    with pytest.raises((OrthogonalityError, TableParseError)):
        parse_table(name, text=bad)


@pytest.mark.parametrize("name", sorted(p.stem for p in Path(data_dir()).glob("*.ctbl") if p.stat().st_size < 200_000))
def test_shipped_tables_validate(name):
    T = load_table(name)
    assert sum(c.size for c in T.classes) == T.group_order
    assert sum(d * d for d in T.degrees()) == T.group_order


@pytest.mark.parametrize("name,G", [("a5", alt(5)), ("l27", psl2(7))])
def test_coefficients_match_brute_force(name, G):
    T = load_table(name)
    classes = group_classes(G)
    lab = match_classes(T, G, classes)
    for a, b, c in itertools.product(T.labels, repeat=3):
        assert class_mult_coeff(T, a, b, c) == brute_force_coeff(G, lab[a], lab[b], lab[c])


def test_cyclic_rearrangement_symmetry():
    # n(A, B, C) |C| = n(B, C^-1, A^-1) |A| under the counting definition
    T = load_table("l27")
    for a, b, c in itertools.product(T.labels, repeat=3):
        ai, ci = T.inverse_label(a), T.inverse_label(c)
        lhs = class_mult_coeff(T, a, b, c) * T.cls(c).size
        rhs = class_mult_coeff(T, b, ci, ai) * T.cls(a).size
        assert lhs == rhs


def test_edge_exists():
    T = load_table("a5")
    assert edge_exists(T, "2A")
    with pytest.raises(ValueError):
        edge_exists(T, "3A")
    assert edge_exists(load_table("sym3"), "2a") is False


def test_clique_test():
    T = load_table("a5")
    assert clique_test(T, "2A", 2, True) == NONTRIVIAL_COMPONENT
    assert clique_test(load_table("sym3"), "2a", 2, True) == SINGLETON_COMPONENT
    # in Sym(3) only t^2 qualifies, in Alt(5) there are 7 such elements
    assert clique_test(load_table("sym3"), "3a", 3, True) == COMPONENT_IS_CLIQUE
    assert clique_test(T, "3A", 3, True) == INCONCLUSIVE
    with pytest.raises(ValueError):
        clique_test(T, "5A", 5, True)


def test_multiclass_lift():
    T = load_table("2f42")
    assert multiclass_lift_test(T, ["2b", "2c"], True) == {"2b": LIFT_CONNECTED, "2c": LIFT_EDGELESS}
    assert multiclass_lift_test(T, ["2b"], True) == {"2b": LIFT_SINGLE_CLASS}
    assert set(multiclass_lift_test(T, ["2b", "2c"], False).values()) == {INCONCLUSIVE}
