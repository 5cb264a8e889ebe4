import pytest

from hallforge import config
from hallforge.errors import HallForgeError, OrderTooLarge, ParseError
from hallforge.groups.base import closure, default_generator_names
from hallforge.groups.catalog import catalog, catalog_names
from hallforge.groups.hom import make_homomorphism
from hallforge.groups.table import (AutomorphismGroup, TableGroup, cyclic_group,
                                    direct_power, direct_product, semidirect_product)


def _dihedral_as_semidirect():
    base, top = cyclic_group(3), cyclic_group(2)
    inversion = (0, 2, 1)
    aut = AutomorphismGroup(base, [inversion])
    return semidirect_product(base, top, make_homomorphism(top, aut, [inversion]))


def test_default_generator_names():
    assert default_generator_names(8) == ("x", "y", "z", "u", "v", "w", "g7", "g8")


def test_closure_is_breadth_first():
    assert closure(0, [1], lambda a, b: (a + b) % 5, 10) == [0, 1, 2, 3, 4]
    with pytest.raises(OrderTooLarge):
        closure(0, [1], lambda a, b: (a + b) % 5, 3)


def test_cyclic_group():
    Z5 = cyclic_group(5)
    assert Z5.order == 5
    assert Z5.element_order(2) == 5
    Z5.verify_axioms()
    assert cyclic_group(1).order == 1


def test_direct_product_and_power():
    P = direct_product(cyclic_group(2), cyclic_group(3))
    assert P.order == 6
    assert P.is_abelian()
    D = direct_power(catalog("S3"), 2)
    assert D.order == 36
    assert D.copies == 2
    D.verify_axioms()


def test_semidirect_product_is_nonabelian():
    """Z3 x| Z2 by inversion has order 6 and is not abelian."""
    G = _dihedral_as_semidirect()
    assert G.order == 6
    assert not G.is_abelian()
    assert G.order_profile() == catalog("S3").order_profile()
    G.verify_axioms()


def test_semidirect_product_top_acts_by_displayed_rule():
    """(1, w)(a, 1)(1, w)^-1 = (act(w)(a), 1)."""
    G = _dihedral_as_semidirect()
    w, a = (0, 1), (1, 0)
    assert G.mul(G.mul(w, a), G.inv(w)) == (2, 0)


def test_semidirect_rejects_foreign_action():
    base, top = cyclic_group(3), cyclic_group(2)
    other = AutomorphismGroup(cyclic_group(3), [(0, 2, 1)])
    action = make_homomorphism(top, other, [(0, 2, 1)])
    with pytest.raises(HallForgeError):
        semidirect_product(base, top, action)


def test_automorphism_group_composes_as_functions():
    base = cyclic_group(5)
    doubling = tuple((2 * i) % 5 for i in range(5))
    aut = AutomorphismGroup(base, [doubling])
    assert aut.order == 4
    assert aut.apply(aut.mul(doubling, doubling), 1) == 4


def test_verify_axioms_detects_broken_table():
    broken = TableGroup([1], lambda x, y: (x + y) % 4 if x != 3 else 0,
                        lambda x: (-x) % 4, 0, "broken")
    with pytest.raises(HallForgeError):
        broken.verify_axioms()


def test_catalog_orders():
    expected = {"C7": 7, "S4": 24, "A4": 12, "A5": 60, "D5": 10, "Q8": 8,
                "V4": 4, "trivial": 1, "D1": 2, "D2": 4}
    for name, order in expected.items():
        assert catalog(name).order == order, name
    assert "Q8" in catalog_names()


@pytest.mark.parametrize("name", ["C0", "S9", "X3", "D13"])
def test_catalog_unknown(name):
    with pytest.raises(ParseError):
        catalog(name)


def test_enumeration_bound():
    """Groups above the bound refuse to enumerate."""
    config.limits.enum_bound = 10
    with pytest.raises(OrderTooLarge):
        catalog("S4").elements()


@pytest.mark.parametrize("base,top", [("C3", "C2"), ("S3", "C2"), ("C4", "C3"),
                                      ("V4", "S3")])
def test_trivial_action_gives_direct_product(base, top):
    A, W = catalog(base), catalog(top)
    identity = tuple(range(A.order))
    trivial = make_homomorphism(W, AutomorphismGroup(A, [identity]),
                                [identity] * len(W.generators))
    G, P = semidirect_product(A, W, trivial), direct_product(A, W)
    assert set(G.elements()) == set(P.elements())
    for x in G.elements():
        for y in G.elements():
            assert G.mul(x, y) == P.mul(x, y)
