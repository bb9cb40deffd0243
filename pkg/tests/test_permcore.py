from __future__ import annotations

import random

import numpy as np
import pytest
from _oracles import closure
from hypothesis import given, settings
from hypothesis import strategies as st

from ggraph.groups import alt, load_group, sym
from ggraph.permcore import (
    PermGroup,
    Permutation,
    build_bsgs,
    compose,
    element_order,
    format_cycles,
    group_order,
    inverse,
    membership,
    normal_closure,
    parse_cycles,
    random_element,
)

perms = st.integers(2, 9).flatmap(lambda n: st.permutations(range(n)).map(Permutation))


def _tuples(G: PermGroup) -> list[tuple]:
    return [tuple(int(x) for x in g.array) for g in G.generators]


def test_compose_left_to_right():
    a = parse_cycles("(1 2)", 3)
    b = parse_cycles("(2 3)", 3)
    c = compose(a, b)
    assert c == parse_cycles("(1 3 2)", 3)
    # 1 -> 2 -> 3 in 1-based labels
    assert c(0) == 2


def test_compose_identity_and_involution():
    a = parse_cycles("(1 2)(3 4 5)", 5)
    e = Permutation.identity(5)
    assert compose(a, e) == a
    t = parse_cycles("(1 2)", 5)
    assert compose(t, t).is_identity()


def test_compose_degree_mismatch():
    with pytest.raises(ValueError):
        compose(Permutation.identity(3), Permutation.identity(4))


def test_element_order_examples():
    assert element_order(Permutation.identity(4)) == 1
    assert element_order(parse_cycles("(1 2)(3 4 5)", 5)) == 6
    assert element_order(parse_cycles("(1 2 3 4 5)", 5)) == 5


def test_conjugation_convention():
    t = parse_cycles("(1 2 3)", 4)
    g = parse_cycles("(3 4)", 4)
    # t^g = g^-1 t g relabels points through g
    assert t.conjugate(g) == compose(compose(inverse(g), t), g)
    assert t.conjugate(g) == parse_cycles("(1 2 4)", 4)


def test_parse_and_format_round_trip():
    p = parse_cycles("(1,4)(2 3 5)", 6)
    assert format_cycles(p) == "(1 4)(2 3 5)"
    assert parse_cycles(format_cycles(p), 6) == p
    assert format_cycles(Permutation.identity(3)) == "()"
    with pytest.raises(ValueError):
        parse_cycles("(1 2) x", 3)


def test_permutation_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])


def test_bsgs_small_orders():
    S3 = PermGroup([parse_cycles("(1 2)", 3), parse_cycles("(1 2 3)", 3)])
    assert build_bsgs(S3).order() == 6
    A5 = PermGroup([parse_cycles("(1 2 3 4 5)", 5), parse_cycles("(3 4 5)", 5)])
    assert group_order(A5) == 60
    assert group_order(A5) == len(closure(_tuples(A5)))
    assert group_order(PermGroup.trivial(4)) == 1
    assert group_order(sym(4)) == 24


def test_m11_order_matches_closure():
    G = load_group("m11").group
    assert G.order() == 7920
    assert len(closure(_tuples(G))) == 7920


def test_chain_invariants():
    G = alt(7)
    ch = build_bsgs(G)
    assert ch.order() == int(np.prod(ch.orbit_sizes())) == 2520
    for g in G.generators:
        h, lvl = ch.sift(g.array)
        assert lvl == len(ch.base) and np.array_equal(h, np.arange(G.degree))


def test_bsgs_deterministic_for_seed():
    G = load_group("m11").group
    a = build_bsgs(PermGroup(G.generators), rng=random.Random(5))
    b = build_bsgs(PermGroup(G.generators), rng=random.Random(5))
    assert a.base == b.base and a.orbit_sizes() == b.orbit_sizes()


def test_membership():
    A5 = alt(5)
    assert membership(A5, parse_cycles("(1 2 3)", 5))
    assert not membership(A5, parse_cycles("(1 2)", 5))
    rng = random.Random(1)
    for _ in range(20):
        assert membership(A5, random_element(A5, rng))


def test_normal_closure():
    S4 = sym(4)
    V = normal_closure(S4, [parse_cycles("(1 2)(3 4)", 4)])
    assert V.order() == 4
    assert normal_closure(S4, [parse_cycles("(1 2)", 4)]).order() == 24
    assert normal_closure(S4, [parse_cycles("(1 2 3)", 4)]).order() == 12


@settings(max_examples=60, deadline=None)
@given(perms)
def test_inverse_property(p):
    assert compose(p, inverse(p)).is_identity()
    assert element_order(p) == p.order()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.permutations(range(6)), min_size=1, max_size=3))
def test_bsgs_order_matches_closure(gens):
    G = PermGroup([Permutation(g) for g in gens], 6)
    elts = closure([tuple(g) for g in gens])
    assert G.order() == len(elts)
    for g in gens:
        assert membership(G, Permutation(g))
    # a random product of generators is a member
    prod = Permutation.identity(6)
    for g in gens[::-1] + gens:
        prod = compose(prod, Permutation(g))
    assert membership(G, prod)
