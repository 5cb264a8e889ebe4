"""Brute-force isomorphism search and subgroup enumeration for small groups."""

import logging
from typing import Dict, Iterator, List, Optional

from hallforge import config
from hallforge.errors import NotAHomomorphism, SizeBoundExceeded
from hallforge.groups.base import FiniteGroup
from hallforge.groups.hom import GroupHom, PartialIso, _graph_closure, make_homomorphism

logger = logging.getLogger(__name__)


def _check_size(G: FiniteGroup, bound: Optional[int]) -> int:
    bound = config.limits.iso_bound if bound is None else bound
    known = G._known_order()
    if known is not None and known > bound:
        raise SizeBoundExceeded(f"{G.label()} has order {known} > {bound}")
    if len(G.elements()) > bound:
        raise SizeBoundExceeded(f"{G.label()} has order {G.order} > {bound}")
    return bound


def _centralizer_sizes(G: FiniteGroup) -> Dict:
    elements = G.elements()
    return {x: sum(1 for y in elements if G.mul(x, y) == G.mul(y, x))
            for x in elements}


def _search_generators(G: FiniteGroup) -> List:
    out = []
    for g in G.generators:
        if g != G.identity and g not in out:
            out.append(g)
    return out


def find_all_isomorphisms(G: FiniteGroup, H: FiniteGroup,
                          bound: Optional[int] = None) -> Iterator[GroupHom]:
    """Every isomorphism G -> H, in lexicographic order of generator images.

    Backtracks over the images of G's (distinct, nontrivial) generators in
    H's canonical order. Candidates must match element order and
    centralizer size, and every partial assignment must extend to a
    homomorphism on the subgroup it is defined on.

    Raises:
        SizeBoundExceeded: either group is above the bound.
    """
    bound = _check_size(G, bound)
    _check_size(H, bound)
    if G.order != H.order or G.order_profile() != H.order_profile():
        return
    gens = _search_generators(G)
    cent_g, cent_h = _centralizer_sizes(G), _centralizer_sizes(H)
    candidates = []
    for g in gens:
        order = G.element_order(g)
        candidates.append([y for y in H.elements()
                           if H.element_order(y) == order and cent_h[y] == cent_g[g]])

    def extend(assigned: List) -> Iterator[List]:
        depth = len(assigned)
        if depth == len(gens):
            yield list(assigned)
            return
        for y in candidates[depth]:
            trial = assigned + [y]
            try:
                _graph_closure(G, H, gens[:depth + 1], trial)
            except NotAHomomorphism:
                continue
            yield from extend(trial)

    for images in extend([]):
        hom = make_homomorphism(G, H, dict(zip(gens, images)) if gens else {})
        if hom.injective:
            yield hom


def find_isomorphism(G: FiniteGroup, H: FiniteGroup,
                     bound: Optional[int] = None) -> Optional[GroupHom]:
    """The first isomorphism G -> H in lexicographic image order, or None."""
    return next(find_all_isomorphisms(G, H, bound), None)


def enumerate_subgroups(G: FiniteGroup, bound: Optional[int] = None) -> List[FiniteGroup]:
    """All subgroups of G, sorted by order and then by element indices.

    Starts from the cyclic subgroups and joins with cyclic subgroups until
    nothing new appears. Each subgroup is generated greedily by elements
    taken in canonical order.

    Raises:
        SizeBoundExceeded: G is above the bound.
    """
    _check_size(G, bound)
    elements = G.elements()
    index = {x: i for i, x in enumerate(elements)}
    mul = [[index[G.mul(x, y)] for y in elements] for x in elements]

    def close(seed: frozenset) -> frozenset:
        members = set(seed) | {0}
        frontier = list(members)
        while frontier:
            new = []
            for a in frontier:
                for b in list(members):
                    for c in (mul[a][b], mul[b][a]):
                        if c not in members:
                            members.add(c)
                            new.append(c)
            frontier = new
        return frozenset(members)

    cyclic = {close(frozenset([i])) for i in range(len(elements))}
    found = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        new = set()
        for s in frontier:
            for c in cyclic:
                if not c <= s:
                    joined = close(s | c)
                    if joined not in found:
                        new.add(joined)
        found |= new
        frontier = new

    subgroups = []
    for members in sorted(found, key=lambda s: (len(s), sorted(s))):
        gens: List[int] = []
        span = frozenset([0])
        for i in sorted(members):
            if i not in span:
                gens.append(i)
                span = close(frozenset(gens))
        sub = G.subgroup([elements[i] for i in gens], f"<{len(members)}>")
        subgroups.append(sub)
    logger.debug("%s has %d subgroups", G.label(), len(subgroups))
    return subgroups


def all_partial_isos(G: FiniteGroup, bound: Optional[int] = None) -> Iterator[PartialIso]:
    """Every isomorphism between two subgroups of G."""
    subgroups = enumerate_subgroups(G, bound)
    for K in subgroups:
        for L in subgroups:
            if K.order != L.order:
                continue
            for hom in find_all_isomorphisms(K, L, bound):
                yield PartialIso(G, hom)
