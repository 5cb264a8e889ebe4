"""Verified homomorphisms, automorphisms, partial isomorphisms and systems.

A homomorphism is given by the images of a generating set and verified by
the graph test: the closure of the pairs (x, image(x)) inside the product of
domain and codomain must be the graph of a function. The same closure yields
the full element map.
"""

import dataclasses
import logging
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from hallforge import config
from hallforge.errors import (DegreeCapExceeded, InvalidPartialIso, NotAHomomorphism,
                              NotAnAutomorphism, NotEquivariant, NotInjective,
                              OrderTooLarge, SubgroupNotInvariant)
from hallforge.groups.base import FiniteGroup
from hallforge.groups.perm import PermGroup, Permutation
from hallforge.groups.table import AutomorphismGroup

logger = logging.getLogger(__name__)


class GroupHom:
    """A homomorphism between finite groups, verified at construction.

    Use `make_homomorphism` rather than calling this directly.
    """

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup,
                 keys: Sequence, values: Sequence, element_map: Dict):
        self.domain = domain
        self.codomain = codomain
        self.keys = tuple(keys)
        self.values = tuple(values)
        self._map = element_map
        self.verified = True
        self._image = None

    def __call__(self, x):
        try:
            return self._map[x]
        except KeyError:
            raise ValueError(f"{x!r} is not in {self.domain.label()}") from None

    def image_set(self) -> set:
        if self._image is None:
            self._image = set(self._map.values())
        return self._image

    @property
    def injective(self) -> bool:
        return len(self.image_set()) == len(self._map)

    @property
    def surjective(self) -> bool:
        return len(self.image_set()) == self.codomain.order

    def kernel(self) -> List:
        e = self.codomain.identity
        return [x for x in self.domain.elements() if self._map[x] == e]

    def preimage(self, y):
        """Some element mapping to y (the canonically first), or None."""
        for x in self.domain.elements():
            if self._map[x] == y:
                return x
        return None

    def index_map(self) -> Tuple[int, ...]:
        """Images as canonical indices of the codomain, in domain order."""
        return tuple(self.codomain.index(self._map[x])
                     for x in self.domain.elements())

    def after(self, other: "GroupHom") -> "GroupHom":
        """The composite self ∘ other (other applied first)."""
        if other.codomain is not self.domain and not _same_elements(
                other.codomain, self.domain):
            raise NotAHomomorphism("composite of maps with mismatched groups")
        return make_homomorphism(
            other.domain, self.codomain,
            [self(other(g)) for g in other.domain.generators])

    def __repr__(self):
        return f"GroupHom({self.domain.label()} -> {self.codomain.label()})"


def _same_elements(G: FiniteGroup, H: FiniteGroup) -> bool:
    return G is H or set(G.elements()) == set(H.elements())


def _graph_closure(domain: FiniteGroup, codomain: FiniteGroup,
                   keys: Sequence, values: Sequence) -> Dict:
    seen = {domain.identity: codomain.identity}
    queue = [domain.identity]
    pairs = list(zip(keys, values))
    i = 0
    while i < len(queue):
        x = queue[i]
        i += 1
        fx = seen[x]
        for k, v in pairs:
            y = domain.mul(x, k)
            fy = codomain.mul(fx, v)
            known = seen.get(y)
            if known is None:
                seen[y] = fy
                queue.append(y)
            elif known != fy:
                raise NotAHomomorphism(
                    f"{domain.label()} -> {codomain.label()}: "
                    f"{y!r} would map to both {known!r} and {fy!r}")
    return seen


def make_homomorphism(domain: FiniteGroup, codomain: FiniteGroup,
                      gen_images: Union[Sequence, Mapping]) -> GroupHom:
    """Builds and verifies a homomorphism from generator images.

    Args:
        domain: An enumerable group.
        codomain: The target group; every image must belong to it.
        gen_images: Either a sequence aligned with `domain.generators`, or a
            mapping from domain elements (which must generate the domain) to
            their images.

    Raises:
        NotAHomomorphism: an image is outside the codomain, the keys do not
            generate the domain, or the graph subgroup is not a function.
    """
    if isinstance(gen_images, Mapping):
        keys, values = list(gen_images.keys()), list(gen_images.values())
    else:
        keys, values = list(domain.generators), list(gen_images)
        if len(keys) != len(values):
            raise NotAHomomorphism(
                f"{domain.label()} has {len(keys)} generators, "
                f"got {len(values)} images")
    for k in keys:
        if not domain.contains(k):
            raise NotAHomomorphism(f"{k!r} is not in {domain.label()}")
    for v in values:
        if not codomain.contains(v):
            raise NotAHomomorphism(f"{v!r} is not in {codomain.label()}")
    element_map = _graph_closure(domain, codomain, keys, values)
    if len(element_map) != domain.order:
        raise NotAHomomorphism(
            f"the given elements generate {len(element_map)} of the "
            f"{domain.order} elements of {domain.label()}")
    return GroupHom(domain, codomain, keys, values, element_map)


def identity_hom(G: FiniteGroup) -> GroupHom:
    return make_homomorphism(G, G, list(G.generators))


def make_automorphism(G: FiniteGroup, gen_images: Union[Sequence, Mapping]) -> GroupHom:
    """A verified automorphism of G.

    Raises:
        NotAnAutomorphism: the map is not a bijective homomorphism.
    """
    try:
        hom = make_homomorphism(G, G, gen_images)
    except NotAHomomorphism as e:
        raise NotAnAutomorphism(f"not an endomorphism: {e.message}") from e
    if not hom.injective:
        raise NotAnAutomorphism(f"endomorphism of {G.label()} is not bijective")
    return hom


def inner_automorphism(G: FiniteGroup, h, orientation: str = "right") -> GroupHom:
    """Conjugation by h: x -> h^-1 x h ("right") or x -> h x h^-1 ("left")."""
    if orientation == "right":
        conj = lambda x: G.conjugate(x, h)  # noqa: E731
    elif orientation == "left":
        conj = lambda x: G.conjugate(x, G.inv(h))  # noqa: E731
    else:
        raise ValueError(f"unknown orientation {orientation!r}")
    return make_automorphism(G, [conj(g) for g in G.generators])


def inversion_automorphism(G: FiniteGroup) -> GroupHom:
    """x -> x^-1, an automorphism exactly when G is abelian."""
    if not G.is_abelian():
        raise NotAnAutomorphism(f"inversion is not an automorphism of {G.label()}")
    return make_automorphism(G, [G.inv(g) for g in G.generators])


def power_hom(f: GroupHom, k: int) -> GroupHom:
    """f composed with itself k >= 0 times."""
    G = f.domain
    images = []
    for g in G.generators:
        x = g
        for _ in range(k):
            x = f(x)
        images.append(x)
    return make_homomorphism(G, f.codomain, images)


def automorphism_tuple(f: GroupHom) -> Tuple[int, ...]:
    return f.index_map()


def automorphism_order(f: GroupHom) -> int:
    t = automorphism_tuple(f)
    current, n = t, 1
    while any(i != j for i, j in enumerate(current)):
        current = tuple(t[i] for i in current)
        n += 1
    return n


def generated_automorphism_group(G: FiniteGroup, autos: Sequence[GroupHom],
                                 name: str = "") -> AutomorphismGroup:
    """The group of automorphisms of G generated by `autos`, by composition.

    Raises:
        OrderTooLarge: the closure exceeds the enumeration bound.
    """
    group = AutomorphismGroup(G, [automorphism_tuple(a) for a in autos], name)
    group.elements()
    return group


def automorphism_from_tuple(aut_group: AutomorphismGroup, t) -> GroupHom:
    G = aut_group.base
    return make_homomorphism(G, G, [aut_group.apply(t, g) for g in G.generators])


def restrict_automorphism(beta: GroupHom, A: FiniteGroup) -> GroupHom:
    """beta restricted to a subgroup A it leaves invariant.

    Raises:
        SubgroupNotInvariant: some generator of A leaves A under beta.
    """
    for a in A.generators:
        if not A.contains(beta(a)):
            raise SubgroupNotInvariant(
                f"{beta(a)!r}, the image of {a!r}, is not in {A.label()}")
    return make_homomorphism(A, A, [beta(a) for a in A.generators])


def subgroup_generated(ambient: FiniteGroup, gens: Sequence, name: str = "") -> FiniteGroup:
    """The subgroup of `ambient` generated by `gens`, enumerated.

    Raises:
        ValueError: a generator is not in the ambient group.
        OrderTooLarge: the subgroup exceeds the enumeration bound.
    """
    for g in gens:
        if not ambient.contains(g):
            raise ValueError(f"{g!r} is not in {ambient.label()}")
    sub = ambient.subgroup(list(gens), name)
    sub.elements()
    return sub


class RegularRepresentation(NamedTuple):
    group: PermGroup
    labeling: Dict
    hom: GroupHom


def regular_representation(G: FiniteGroup,
                           degree_cap: Optional[int] = None) -> RegularRepresentation:
    """The right regular representation x -> x*g on points labelled 1..|G|.

    Point i+1 is the i-th element of the canonical enumeration.

    Raises:
        DegreeCapExceeded: |G| is above the degree cap.
        OrderTooLarge: G is not enumerable.
    """
    cap = config.degree_cap(degree_cap)
    known = G._known_order()
    if known is not None and known > cap:
        raise DegreeCapExceeded(
            f"regular representation of {G.label()} needs degree {known} > {cap}")
    elements = G.elements()
    if len(elements) > cap:
        raise DegreeCapExceeded(
            f"regular representation of {G.label()} needs degree "
            f"{len(elements)} > {cap}")
    labeling = {x: i + 1 for i, x in enumerate(elements)}

    def rho(g) -> Permutation:
        return Permutation._trusted(tuple(labeling[G.mul(x, g)] for x in elements))

    image = PermGroup([rho(g) for g in G.generators], len(elements),
                      f"rho({G.label()})", order=len(elements))
    hom = make_homomorphism(G, image, list(image.generators))
    logger.debug("regular representation of %s on %d points", G.label(),
                 len(elements))
    return RegularRepresentation(image, labeling, hom)


def as_permutation_group(G: FiniteGroup) -> Tuple[PermGroup, GroupHom]:
    """G itself when it is a permutation group, else its regular image."""
    if isinstance(G, PermGroup):
        return G, identity_hom(G)
    rep = regular_representation(G)
    return rep.group, rep.hom


@dataclasses.dataclass
class PartialIso:
    """An isomorphism between two subgroups of a common ambient group."""
    ambient: FiniteGroup
    hom: GroupHom

    @property
    def domain(self) -> FiniteGroup:
        return self.hom.domain

    @property
    def codomain(self) -> FiniteGroup:
        return self.hom.codomain

    def __call__(self, x):
        return self.hom(x)


def partial_iso_from_hom(ambient: FiniteGroup, hom: GroupHom) -> PartialIso:
    """Wraps a bijective homomorphism between subgroups of `ambient`.

    Raises:
        InvalidPartialIso: not bijective, or not inside the ambient group.
    """
    for x in hom.domain.generators + hom.codomain.generators:
        if not ambient.contains(x):
            raise InvalidPartialIso(f"{x!r} is not in {ambient.label()}")
    if not hom.injective or not hom.surjective:
        raise InvalidPartialIso(
            f"{hom.domain.label()} -> {hom.codomain.label()} is not a bijection")
    return PartialIso(ambient, hom)


def make_partial_iso(ambient: FiniteGroup, domain_gens: Sequence,
                     gen_images: Sequence) -> PartialIso:
    """The partial isomorphism sending domain_gens[i] to gen_images[i].

    The codomain is the subgroup generated by the images.

    Raises:
        InvalidPartialIso: the map is not an injective homomorphism.
    """
    if len(domain_gens) != len(gen_images):
        raise InvalidPartialIso("domain generators and images differ in number")
    try:
        domain = subgroup_generated(ambient, domain_gens)
        codomain = subgroup_generated(ambient, gen_images)
        hom = make_homomorphism(domain, codomain, dict(zip(domain_gens, gen_images)))
    except (NotAHomomorphism, ValueError) as e:
        raise InvalidPartialIso(f"not a partial isomorphism: {e}") from e
    if not hom.injective:
        raise InvalidPartialIso("the map has a nontrivial kernel")
    return PartialIso(ambient, hom)


@dataclasses.dataclass
class EquivariantSystem:
    """A group with a tuple of automorphisms."""
    group: FiniteGroup
    autos: Tuple[GroupHom, ...]

    def __post_init__(self):
        self.autos = tuple(self.autos)
        for k, a in enumerate(self.autos):
            if a.domain is not self.group or a.codomain is not self.group:
                raise NotAnAutomorphism(f"automorphism {k} is not defined on "
                                        f"{self.group.label()}")
            if not a.injective:
                raise NotAnAutomorphism(f"automorphism {k} is not bijective")

    @property
    def arity(self) -> int:
        return len(self.autos)


@dataclasses.dataclass
class EquivariantEmbedding:
    """An embedding f: A -> B with f∘alpha_i = beta_i∘f for every i."""
    hom: GroupHom
    source: EquivariantSystem
    target: EquivariantSystem

    def __post_init__(self):
        f = self.hom
        if f.domain is not self.source.group or f.codomain is not self.target.group:
            raise NotEquivariant("embedding does not connect the two systems")
        if self.source.arity != self.target.arity:
            raise NotEquivariant(
                f"systems carry {self.source.arity} and {self.target.arity} "
                "automorphisms")
        if not f.injective:
            raise NotInjective(f"{f.domain.label()} -> {f.codomain.label()} "
                               "is not injective")
        for i, (alpha, beta) in enumerate(zip(self.source.autos, self.target.autos)):
            for x in f.domain.elements():
                if f(alpha(x)) != beta(f(x)):
                    raise NotEquivariant(
                        f"f∘alpha_{i + 1} != beta_{i + 1}∘f at {x!r}")


def ensure_enumerable(G: FiniteGroup, stage: str):
    try:
        G.elements()
    except OrderTooLarge as e:
        raise e.at_stage(stage)
