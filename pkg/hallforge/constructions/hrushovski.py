"""Extending partial isomorphisms of a finite group to inner automorphisms.

The group G sits in Sym(|G|) through its right regular representation.
For a partial isomorphism psi: K -> K', the orbits of rho(K) are the cosets
xK; matching coset representatives of K and K' gives a point bijection h
with rho(k)^h = rho(psi(k)) for every k in K.
"""

import dataclasses
import logging
from typing import List, Optional, Sequence

from hallforge import config
from hallforge.errors import DegreeCapExceeded, HallForgeError, InvalidPartialIso
from hallforge.groups.base import FiniteGroup
from hallforge.groups.hom import GroupHom, PartialIso, regular_representation
from hallforge.groups.perm import PermGroup, Permutation

logger = logging.getLogger(__name__)


def coset_representatives(G: FiniteGroup, K: FiniteGroup) -> List:
    """The canonically least element of each coset xK, ascending."""
    covered = set()
    reps = []
    k_elements = K.elements()
    for x in G.elements():
        if x in covered:
            continue
        reps.append(x)
        covered.update(G.mul(x, k) for k in k_elements)
    return reps


def align_conjugator(G: FiniteGroup, psi: PartialIso) -> Permutation:
    """A permutation h of the points of rho(G) with rho(k)^h = rho(psi(k)).

    Pairs the i-th least coset representative x_i of K with the i-th least
    representative x'_i of psi(K) and sets h(x_i k) = x'_i psi(k).

    Raises:
        InvalidPartialIso: psi is not a bijection between subgroups of G.
    """
    K, L = psi.domain, psi.codomain
    if K.order != L.order:
        raise InvalidPartialIso(
            f"domain of order {K.order} and image of order {L.order}")
    for x in K.generators + L.generators:
        if not G.contains(x):
            raise InvalidPartialIso(f"{x!r} is not in {G.label()}")
    elements = G.elements()
    index = {x: i for i, x in enumerate(elements)}
    reps = coset_representatives(G, K)
    reps_image = coset_representatives(G, L)
    images = [0] * len(elements)
    for x, y in zip(reps, reps_image):
        for k in K.elements():
            images[index[G.mul(x, k)]] = index[G.mul(y, psi(k))] + 1
    return Permutation(images)


@dataclasses.dataclass
class ExtensionResult:
    """A group, partial isomorphisms of it, and conjugators realizing them.

    Attributes:
        group: The input group A.
        psis: The partial isomorphisms, in input order.
        ambient: Sym(|A|).
        rho: The regular embedding A -> ambient.
        conjugators: h_i with rho(k)^{h_i} = rho(psi_i(k)).
    """
    group: FiniteGroup
    psis: List[PartialIso]
    ambient: PermGroup
    rho: GroupHom
    conjugators: List[Permutation]


def check_conjugator(rho: GroupHom, psi: PartialIso, h: Permutation) -> Optional[str]:
    """The first violated contract equation, or None."""
    for k in psi.domain.elements():
        if rho(k).conjugate(h) != rho(psi(k)):
            return f"rho({k})^h != rho(psi({k}))"
    return None


def hrushovski_extend(A: FiniteGroup, psis: Sequence[PartialIso],
                      degree_cap: Optional[int] = None) -> ExtensionResult:
    """Embeds A in Sym(|A|) so that every psi_i becomes conjugation by h_i.

    Raises:
        DegreeCapExceeded: |A| is above the degree cap.
        InvalidPartialIso: some psi_i is not a partial isomorphism of A.
    """
    cap = config.degree_cap(degree_cap)
    if A.order > cap:
        raise DegreeCapExceeded(f"|{A.label()}| = {A.order} exceeds the degree cap {cap}")
    rep = regular_representation(A, cap)
    ambient = PermGroup.symmetric(A.order)
    conjugators = []
    for i, psi in enumerate(psis):
        h = align_conjugator(A, psi)
        failure = check_conjugator(rep.hom, psi, h)
        if failure:
            raise HallForgeError(f"conjugator {i + 1} fails: {failure}",
                                 stage="hrushovski")
        conjugators.append(h)
    logger.info("extended %d partial isomorphisms of %s inside Sym(%d)",
                len(conjugators), A.label(), A.order)
    return ExtensionResult(A, list(psis), ambient, rep.hom, conjugators)
