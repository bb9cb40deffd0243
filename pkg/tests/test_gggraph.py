from __future__ import annotations

import json
import random

import pytest
from _oracles import closure, component, conj, setwise_stabilizer_order
from hypothesis import given, settings
from hypothesis import strategies as st

from ggraph.classops import center
from ggraph.gggraph import (
    HYPOTHESIS_FAILED,
    ClassUnion,
    ComponentReport,
    analyze,
    brute_force_component,
    component_stabilizer,
    component_stabilizer_sylow,
    in_class_union,
    is_adjacent,
    is_pure,
    lex_product_check,
    neighbor_orbit_reps,
    order_p_classes,
    quotient_transfer,
    strongly_p_embedded,
)
from ggraph.groups import alt, cyclic, direct_product, load_group, psl2, sl2, sym
from ggraph.permcore import PermGroup, parse_cycles


def _classes(G, p, seed=0):
    classes, S = order_p_classes(G, p, random.Random(seed))
    return classes, S


def _named(name, p):
    gf = load_group(name)
    classes, S = _classes(gf.group, p)
    gf.name_classes(classes)
    return gf.group, {c.display_name(): c for c in classes}, classes, S


def _tuple(g) -> tuple:
    return tuple(int(x) for x in g.array)


def test_adjacency_alt5_involutions():
    G = alt(5)
    classes, _ = _classes(G, 2)
    C = ClassUnion.single(G, classes[0], classes)
    a = parse_cycles("(1 2)(3 4)", 5)
    b = parse_cycles("(1 3)(2 4)", 5)
    c = parse_cycles("(1 2)(3 5)", 5)
    assert is_adjacent(C, a, b)
    assert not is_adjacent(C, a, c)
    assert not is_adjacent(C, a, a)
    assert in_class_union(C, a)
    assert not in_class_union(C, parse_cycles("(1 2 3)", 5))
    with pytest.raises(ValueError):
        is_adjacent(C, a, parse_cycles("(1 2 3)", 5))
    with pytest.raises(ValueError):
        in_class_union(C, parse_cycles("(1 2)", 5))


def test_adjacency_needs_quotient_in_class():
    # t and t^-1 commute, but t^2 and t^3 lie in the other class of 5-cycles
    G = alt(5)
    classes, _ = _classes(G, 5)
    t = parse_cycles("(1 2 3 4 5)", 5)
    home = next(c for c in classes if in_class_union(ClassUnion.single(G, c, classes), t))
    single = ClassUnion.single(G, home, classes)
    both = ClassUnion.union(G, classes, classes)
    assert not is_adjacent(single, t, t**4)
    assert is_adjacent(both, t, t**4)
    assert is_adjacent(both, t, t**2)


def test_alt5_involution_component():
    G = alt(5)
    classes, _ = _classes(G, 2)
    C = ClassUnion.single(G, classes[0], classes)
    rep = analyze(C)
    assert rep.lambda_size == 3 and rep.stabilizer_order == 12 and rep.connected == "no"
    o = brute_force_component(C)
    assert o.vertices.shape[0] == 3 and o.stabilizer_order == 12


def test_single_vertex_class():
    # SL(2,5) has one involution, central: its component is itself
    G = sl2(5)
    classes, _ = _classes(G, 2)
    assert [c.class_size for c in classes] == [1]
    C = ClassUnion.single(G, classes[0], classes)
    rep = analyze(C)
    assert rep.lambda_size == 1
    assert rep.connected == "yes"
    assert brute_force_component(C).vertices.shape[0] == 1


@pytest.mark.parametrize(
    "G,p",
    [(alt(5), 2), (alt(5), 3), (alt(5), 5), (sym(4), 2), (sym(5), 2), (psl2(7), 2), (psl2(7), 3), (alt(6), 3)],
)
def test_analyze_matches_independent_oracle(G, p):
    E = closure([_tuple(g) for g in G.generators])
    classes, _ = _classes(G, p)
    for c in classes:
        for CU in (ClassUnion.single(G, c, classes), ClassUnion.rational_closure(G, c, classes)):
            cls_elems = set()
            for s in CU.seeds:
                cls_elems |= {conj(_tuple(s.rep), g) for g in E}
            lam = component(cls_elems, _tuple(c.rep), p)
            rep = analyze(CU)
            assert rep.lambda_size == len(lam)
            assert rep.stabilizer_order == setwise_stabilizer_order(E, lam)
            assert rep.connected == ("yes" if len(lam) == len(cls_elems) else "no")


def test_rational_closure_seeds():
    G = alt(5)
    classes, _ = _classes(G, 5)
    CU = ClassUnion.rational_closure(G, classes[0], classes)
    assert len(CU.seeds) == 2 and CU.size == 24
    rep = analyze(CU)
    assert rep.lambda_size == 4 and rep.rational


def test_union_of_classes():
    G = alt(5)
    classes, _ = _classes(G, 5)
    CU = ClassUnion.union(G, classes, classes)
    assert CU.size == 24
    assert analyze(CU).lambda_size == brute_force_component(CU).vertices.shape[0]


def test_class_union_validation():
    G = alt(5)
    c2, _ = _classes(G, 2)
    c3, _ = _classes(G, 3)
    with pytest.raises(ValueError):
        ClassUnion(G, [c2[0], c3[0]], 2)
    with pytest.raises(ValueError):
        ClassUnion(G, [], 2)
    with pytest.raises(ValueError):
        ClassUnion(G, c2, 4)


def test_m11_3A_component_by_independent_oracle():
    G, named, _, _ = _named("m11", 3)
    E = closure([_tuple(g) for g in G.generators])
    t = _tuple(named["3A"].rep)
    C = {conj(t, g) for g in E}
    lam = component(C, t, 3)
    assert len(C) == 440
    assert len(lam) == 8
    assert setwise_stabilizer_order(E, lam) == 144


def test_neighbor_orbit_reps_and_stabilizers():
    G, named, classes, S = _named("m11", 3)
    C = ClassUnion.single(G, named["3A"], classes, sylow=S)
    t = named["3A"].rep
    for nb in neighbor_orbit_reps(C, t):
        assert is_adjacent(C, t, nb.rep)
        assert C.seeds[nb.seed].rep.conjugate(nb.conj) == nb.rep
    assert component_stabilizer(C).order() == 144
    assert component_stabilizer_sylow(C).order() == 144


@pytest.mark.parametrize("c", [0, 1])
def test_sylow_route_agrees_alt6(c):
    G = alt(6)
    classes, S = _classes(G, 3)
    C = ClassUnion.single(G, classes[c], classes, sylow=S)
    a = analyze(C)
    b = analyze(C, sylow_neighbours=True)
    assert (a.lambda_size, a.stabilizer_order, a.connected) == (b.lambda_size, b.stabilizer_order, b.connected)


@pytest.mark.parametrize("G,p", [(psl2(7), 7), (psl2(11), 5), (psl2(13), 7), (alt(5), 5), (sl2(5), 3), (psl2(7), 3)])
def test_shortcut_agrees_with_general_route(G, p):
    classes, S = _classes(G, p)
    for c in classes:
        for CU in (ClassUnion.single(G, c, classes, sylow=S), ClassUnion.rational_closure(G, c, classes, sylow=S)):
            a = analyze(CU)
            b = analyze(CU, use_shortcut=False)
            assert a.method == "cyclic-sylow-shortcut"
            assert (a.lambda_size, a.stabilizer_order, a.connected) == (b.lambda_size, b.stabilizer_order, b.connected)


def test_strongly_p_embedded():
    assert strongly_p_embedded(load_group("m11").group, 3) is True
    assert strongly_p_embedded(alt(5), 2) is True
    assert strongly_p_embedded(alt(6), 3) is True
    assert strongly_p_embedded(alt(7), 3) is False
    assert strongly_p_embedded(sym(4), 2) is False
    with pytest.raises(ValueError):
        strongly_p_embedded(alt(5), 7)


def test_quotient_transfer():
    G = direct_product(cyclic(3), alt(5))
    Z = center(G)
    assert Z.order() == 3
    cert = quotient_transfer(G, Z, 2)
    assert cert.ok and cert.pairs_checked > 0
    triv = quotient_transfer(alt(5), PermGroup.trivial(5), 2)
    assert triv.ok and triv.method == "identity"
    with pytest.raises(ValueError):
        quotient_transfer(G, Z, 3)
    with pytest.raises(ValueError):
        quotient_transfer(sym(4), PermGroup([parse_cycles("(1 2 3)", 4)]), 2)


def test_quotient_transfer_sl25():
    G = sl2(5)
    cert = quotient_transfer(G, center(G), 3)
    assert cert.ok


@pytest.mark.parametrize("name,cls", [("2u42", "2b"), ("2sz8", "2b"), ("2s62", "2c")])
def test_lex_product_on_covers(name, cls):
    G, named, _, _ = _named(name, 2)
    assert lex_product_check(G, center(G), named[cls]) is True


def test_lex_product_hypothesis_gate():
    G = sl2(5)
    classes, _ = _classes(G, 3)
    assert lex_product_check(G, center(G), classes[0]) == HYPOTHESIS_FAILED


def test_is_pure():
    G = alt(5)
    classes, _ = _classes(G, 2)
    C = ClassUnion.single(G, classes[0], classes)
    V = PermGroup([parse_cycles("(1 2)(3 4)", 5), parse_cycles("(1 3)(2 4)", 5)])
    assert is_pure(C, V)
    assert not is_pure(C, PermGroup([parse_cycles("(1 2 3)", 5)]))
    assert not is_pure(C, PermGroup([parse_cycles("(1 2)(3 4)", 5), parse_cycles("(1 2 3)", 5)]))


def test_report_json_round_trip():
    G, named, classes, S = _named("m11", 3)
    rep = analyze(ClassUnion.single(G, named["3A"], classes, sylow=S))
    d = rep.to_dict()
    back = ComponentReport.from_dict(json.loads(json.dumps(d)))
    assert back.to_dict() == d
    H = PermGroup(back.stabilizer_gens, G.degree)
    assert H.order() == 144


def test_seed_determinism():
    G = load_group("m11").group
    a = analyze(ClassUnion.all_of_order(G, 3, random.Random(7)), rng=random.Random(7)).to_dict()
    b = analyze(ClassUnion.all_of_order(G, 3, random.Random(7)), rng=random.Random(7)).to_dict()
    assert a == b


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_results_independent_of_seed(seed):
    G = alt(6)
    classes, S = _classes(G, 3, seed)
    for c in classes:
        rep = analyze(ClassUnion.single(G, c, classes, sylow=S), rng=random.Random(seed))
        o = brute_force_component(ClassUnion.single(G, c, classes))
        assert rep.lambda_size == o.vertices.shape[0]
        assert rep.stabilizer_order == o.stabilizer_order
