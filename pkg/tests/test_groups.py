from __future__ import annotations

import pytest

from ggraph.groups import (
    GroupFileError,
    alt,
    builtin_group,
    cyclic,
    dihedral,
    direct_product,
    gl2,
    load_group,
    psl2,
    quaternion,
    read_group_file,
    sl2,
    sym,
)

GRP = """# toy file
name Alt(4)
degree 4
order {order}
gen (1 2 3)
gen (1 2)(3 4)
classrep 3x (1 2 3)
"""


@pytest.mark.parametrize(
    "G,order",
    [
        (sym(5), 120),
        (alt(6), 360),
        (cyclic(7), 7),
        (dihedral(5), 10),
        (quaternion(8), 8),
        (quaternion(16), 16),
        (psl2(7), 168),
        (psl2(8), 504),
        (psl2(9), 360),
        (psl2(13), 1092),
        (sl2(5), 120),
        (gl2(3), 48),
        (direct_product(cyclic(3), alt(5)), 180),
    ],
)
def test_builtin_orders(G, order):
    assert G.order() == order


def test_builtin_names():
    assert builtin_group("alt:5").order() == 60
    assert builtin_group("PSL2:11").order() == 660
    assert builtin_group("m11") is None
    assert builtin_group("alt:x") is None


def test_declared_order_gate(tmp_path):
    good = tmp_path / "a4.grp"
    good.write_text(GRP.format(order=12))
    gf = read_group_file(good)
    assert gf.group.order() == 12 and gf.name == "Alt(4)"
    assert gf.classreps[0][0] == "3x"
    bad = tmp_path / "bad.grp"
    bad.write_text(GRP.format(order=24))
    with pytest.raises(GroupFileError):
        read_group_file(bad)
    assert read_group_file(bad, check_order=False).group.order() == 12


def test_malformed_group_files(tmp_path):
    f = tmp_path / "x.grp"
    for text in ["degree 4\n", "gen (1 2)\n", "degree 4\ngen (1 5)\n", "degree 4\nfoo 1\ngen (1 2)\n", "degree x\n"]:
        f.write_text(text)
        with pytest.raises(GroupFileError):
            read_group_file(f)


@pytest.mark.parametrize(
    "name,order",
    [("m11", 7920), ("m12", 95040), ("j2", 604800), ("3a6", 1080), ("3a7", 7560), ("2u42", 51840)],
)
def test_shipped_group_files(name, order):
    assert load_group(name).group.order() == order
