import math

import pytest
from sympy.combinatorics import Permutation as SympyPermutation
from sympy.combinatorics import PermutationGroup as SympyGroup

from hallforge.errors import DegreeMismatch, ParseError
from hallforge.groups.catalog import catalog
from hallforge.groups.perm import (BlockDiagonalPower, PermGroup, Permutation,
                                   enumerate_elements, orbit, parse_cycles,
                                   schreier_sims)


def _sympy_order(gens):
    return SympyGroup([SympyPermutation([x - 1 for x in g.images]) for g in gens]).order()


def test_parse_and_print_cycles():
    """Cycles print from their least point; the identity prints as ()."""
    assert str(parse_cycles("(3 1 2)", 3)) == "(1 2 3)"
    assert str(parse_cycles("()", 5)) == "()"
    assert str(parse_cycles("(4 5)(1 2)", 5)) == "(1 2)(4 5)"


@pytest.mark.parametrize("text,degree", [("(1 2", 3), ("(1 5)", 4), ("(1 2)(2 3)", 3),
                                         ("", 3), ("1 2", 3)])
def test_parse_cycles_rejects(text, degree):
    """Malformed text, out-of-range and repeated points are parse errors."""
    with pytest.raises(ParseError):
        parse_cycles(text, degree)


def test_product_applies_left_factor_first():
    """(p * q)(x) = q(p(x))."""
    p, q = parse_cycles("(1 2)", 3), parse_cycles("(2 3)", 3)
    assert str(p * q) == "(1 3 2)"
    assert (p * q)(1) == q(p(1))


def test_conjugate_relabels_points():
    """x^h = h^-1 x h moves h(a) to h(b) when x moves a to b."""
    x, h = parse_cycles("(1 2)", 3), parse_cycles("(2 3)", 3)
    assert str(x.conjugate(h)) == "(1 3)"


def test_powers_and_order():
    c = parse_cycles("(1 2 3)", 3)
    assert c ** -1 == parse_cycles("(1 3 2)", 3)
    assert (c ** 3).is_identity
    assert parse_cycles("(1 2)(3 4 5)", 5).order == 6


def test_degree_mismatch():
    """Composing different degrees raises."""
    with pytest.raises(DegreeMismatch):
        parse_cycles("(1 2)", 2) * parse_cycles("(1 2)", 3)


def test_block_sum_and_pad():
    p = Permutation.block_sum([parse_cycles("(1 2)", 2), parse_cycles("(1 2 3)", 3)])
    assert str(p) == "(1 2)(3 4 5)"
    assert parse_cycles("(1 2)", 2).pad(4).images == (2, 1, 3, 4)


def test_orbit_breadth_first():
    gens = [parse_cycles("(1 2)", 4), parse_cycles("(3 4)", 4)]
    assert orbit(gens, 1) == [1, 2]
    assert orbit([parse_cycles("(1 2 3 4)", 4)], 2) == [2, 3, 4, 1]


@pytest.mark.parametrize("name", ["S5", "A6", "D8", "Q8", "V4", "C12", "A8"])
def test_catalog_orders_match_sympy(name):
    """Schreier-Sims orders agree with an independent implementation."""
    G = catalog(name)
    assert G.order == _sympy_order(G.generators)


def test_mathieu_11_order():
    gens = [Permutation.cycle(11, range(1, 12)),
            parse_cycles("(3 7 11 8)(4 10 5 6)", 11)]
    assert PermGroup(gens).order == 7920 == _sympy_order(gens)


def test_symmetric_by_transposition_and_cycle():
    """A transposition and a full cycle give the natural chain of Sym(n)."""
    gens = [Permutation.transposition(10, 1, 2), Permutation.cycle(10, range(1, 11))]
    chain = schreier_sims(gens)
    assert chain.symmetric
    assert chain.order == math.factorial(10)


def test_symmetric_big_order():
    """Orders are exact integers far beyond machine words."""
    assert PermGroup.symmetric(720).order == math.factorial(720)
    assert PermGroup.symmetric(720).contains(Permutation.cycle(720, (1, 500)))


def test_membership():
    A5 = catalog("A5")
    assert A5.contains(parse_cycles("(1 2 3)", 5))
    assert not A5.contains(parse_cycles("(1 2)", 5))
    assert not A5.contains(parse_cycles("(1 2 3)", 6))


def test_enumeration_starts_at_identity():
    elements = enumerate_elements(catalog("S3"))
    assert len(elements) == 6
    assert elements[0].is_identity
    assert len(set(elements)) == 6


def test_block_diagonal_power():
    C3 = catalog("C3")
    P = BlockDiagonalPower(C3, 2)
    g = C3.generators[0]
    assert P.degree == 6
    assert P.order == 9
    assert P.contains(Permutation.block_sum([g, C3.identity]))
    assert not P.contains(parse_cycles("(1 4)", 6))
    assert P.blocks(Permutation.block_sum([g, g ** 2])) == [g, g ** 2]


@pytest.mark.parametrize("n", range(3, 8))
def test_chain_order_matches_enumeration(n):
    """An n-cycle and an (n-1)-cycle generate Sym(n) without any transposition."""
    gens = [Permutation.cycle(n, range(1, n + 1)), Permutation.cycle(n, range(1, n))]
    chain = schreier_sims(gens)
    assert chain.order == math.factorial(n)
    assert len(enumerate_elements(PermGroup(gens, n))) == chain.order
    standard = [Permutation.transposition(n, 1, 2), Permutation.cycle(n, range(1, n + 1))]
    assert schreier_sims(standard).order == len(enumerate_elements(PermGroup(standard, n)))
