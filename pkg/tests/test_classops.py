from __future__ import annotations

import random

import pytest
from _oracles import closure, conj, mul, order
from hypothesis import given, settings
from hypothesis import strategies as st

from ggraph.classops import (
    center,
    centralizer,
    classes_of_order_p,
    conjugator,
    identify_class,
    omega1,
    structure_probe,
    sylow_p,
)
from ggraph.groups import (
    alt,
    cyclic,
    direct_product,
    load_group,
    psl2,
    quaternion,
    sl2,
    sym,
)
from ggraph.permcore import PermGroup, Permutation, parse_cycles


def _elements(G: PermGroup) -> set[tuple]:
    return closure([tuple(int(x) for x in g.array) for g in G.generators])


def test_centralizer_matches_brute_force_alt6():
    G = alt(6)
    E = _elements(G)
    for text in ["(1 2 3)", "(1 2 3)(4 5 6)", "(1 2)(3 4)", "(1 2 3 4 5)"]:
        x = parse_cycles(text, 6)
        xt = tuple(int(v) for v in x.array)
        brute = sum(1 for g in E if mul(g, xt) == mul(xt, g))
        assert centralizer(G, x).order() == brute


@settings(max_examples=25, deadline=None)
@given(st.permutations(range(7)))
def test_centralizer_property_sym7(images):
    x = Permutation(images)
    C = centralizer(sym(7), x)
    for g in C.generators:
        assert g.commutes_with(x)
    # |C_Sym(n)(x)| = prod over cycle lengths l of l^m_l * m_l!
    from collections import Counter
    from math import factorial

    expect = 1
    for length, m in Counter(x.cycle_type()).items():
        expect *= length**m * factorial(m)
    assert C.order() == expect


def test_conjugator():
    G = alt(5)
    x = parse_cycles("(1 2 3)", 5)
    y = parse_cycles("(2 4 5)", 5)
    g = conjugator(G, x, y)
    assert g is not None and x.conjugate(g) == y and g in G
    # 5-cycles split into two classes in Alt(5)
    a = parse_cycles("(1 2 3 4 5)", 5)
    assert conjugator(G, a, a**2) is None
    assert conjugator(sym(5), a, a**2) is not None


def test_center():
    assert center(sl2(5)).order() == 2
    assert center(load_group("2u42").group).order() == 2
    assert center(alt(5)).order() == 1
    assert center(cyclic(6)).order() == 6


def test_classes_of_order_p_alt5():
    G = alt(5)
    c2 = classes_of_order_p(G, 2)
    c5 = classes_of_order_p(G, 5)
    assert [c.class_size for c in c2] == [15]
    assert sorted(c.class_size for c in c5) == [12, 12]
    assert classes_of_order_p(G, 7) == []


def test_classes_cover_all_elements():
    # class sizes add up to the number of order-p elements
    for G, p in [(alt(6), 3), (psl2(7), 2), (psl2(11), 5), (load_group("m11").group, 3)]:
        E = _elements(G)
        count = sum(1 for g in E if order(g) == p)
        assert sum(c.class_size for c in classes_of_order_p(G, p)) == count


def test_identify_class():
    G = alt(5)
    classes = classes_of_order_p(G, 5)
    a = parse_cycles("(1 2 3 4 5)", 5)
    i = identify_class(G, classes, a)
    j = identify_class(G, classes, a**2)
    assert i is not None and j is not None and i != j
    assert identify_class(G, classes, a**4) == i


def test_sylow():
    rng = random.Random(3)
    for G, p, size in [(sym(6), 2, 16), (alt(7), 3, 9), (load_group("m11").group, 3, 9), (psl2(13), 7, 7)]:
        S = sylow_p(G, p, rng)
        assert S.order() == size
        assert S.is_subgroup(G)


def test_omega1():
    Q = quaternion(8)
    assert omega1(Q, 2).order() == 2
    S = sylow_p(sym(4), 2)
    assert omega1(S, 2).order() == 8


def test_structure_probe():
    V = direct_product(cyclic(3), cyclic(3))
    info = structure_probe(V, 3)
    assert info.is_elementary_abelian and info.abelian_invariants == (3, 3)
    assert info.describe() == "3^2"
    assert structure_probe(quaternion(8), 2).is_generalized_quaternion
    A5 = structure_probe(alt(5))
    assert A5.is_perfect and not A5.is_abelian
    c12 = structure_probe(cyclic(12))
    assert c12.is_cyclic and c12.abelian_invariants == (12,)


def test_conjugation_oracle_consistency():
    G = psl2(7)
    E = list(_elements(G))
    x = classes_of_order_p(G, 7)[0].rep
    xt = tuple(int(v) for v in x.array)
    orbit = {conj(xt, g) for g in E}
    assert len(orbit) == classes_of_order_p(G, 7)[0].class_size


def test_classops_rejects_non_prime():
    with pytest.raises(ValueError):
        classes_of_order_p(alt(5), 4)
