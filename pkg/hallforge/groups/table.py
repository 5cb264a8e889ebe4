"""Groups given by a multiplication function, and the product constructions."""

import itertools
import logging
import random
from typing import Callable, Hashable, Optional, Sequence, Tuple

from hallforge import config
from hallforge.errors import HallForgeError
from hallforge.groups.base import FiniteGroup

logger = logging.getLogger(__name__)


class TableGroup(FiniteGroup):
    """A finite group on hashable elements with explicit arithmetic.

    Elements are whatever the multiplication produces (integers, tuples,
    pairs of elements of other groups). The canonical enumeration is the
    breadth-first closure of the generators.
    """

    def __init__(self, generators: Sequence[Hashable], mul: Callable,
                 inv: Callable, identity: Hashable, name: str = "",
                 order: Optional[int] = None):
        super().__init__(generators, name)
        self._mul = mul
        self._inv = inv
        self._identity = identity
        self._order = order

    @property
    def identity(self):
        return self._identity

    def mul(self, x, y):
        return self._mul(x, y)

    def inv(self, x):
        return self._inv(x)

    def _known_order(self) -> Optional[int]:
        return self._order

    def contains(self, x) -> bool:
        self.elements()
        return x in self._index

    def subgroup(self, generators: Sequence, name: str = "") -> "TableGroup":
        return TableGroup(generators, self._mul, self._inv, self._identity, name)

    def verify_axioms(self, seed: int = 0, samples: int = 20000):
        """Checks closure, identity, inverses and associativity.

        Associativity is checked on every triple up to
        `config.limits.assoc_exhaustive_bound` elements and on `samples`
        random triples above that.

        Raises:
            HallForgeError: an axiom fails.
        """
        elements = self.elements()
        members = set(elements)
        e = self.identity
        for x in elements:
            if self.mul(e, x) != x or self.mul(x, e) != x:
                raise HallForgeError(f"{self.label()}: identity law fails at {x!r}")
            if self.mul(x, self.inv(x)) != e:
                raise HallForgeError(f"{self.label()}: inverse law fails at {x!r}")
        if len(elements) <= config.limits.assoc_exhaustive_bound:
            triples = itertools.product(elements, repeat=3)
        else:
            rng = random.Random(seed)
            triples = ((rng.choice(elements), rng.choice(elements),
                        rng.choice(elements)) for _ in range(samples))
        for x, y, z in triples:
            xy = self.mul(x, y)
            if xy not in members:
                raise HallForgeError(f"{self.label()}: not closed at {x!r}, {y!r}")
            if self.mul(xy, z) != self.mul(x, self.mul(y, z)):
                raise HallForgeError(
                    f"{self.label()}: not associative at {x!r}, {y!r}, {z!r}")


def cyclic_group(order: int, name: str = "") -> TableGroup:
    """Z/order on the integers 0..order-1."""
    if order < 1:
        raise ValueError(f"cyclic group order must be positive, got {order}")
    return TableGroup(
        [1] if order > 1 else [],
        lambda x, y: (x + y) % order,
        lambda x: (-x) % order,
        0,
        name or f"Z{order}",
        order=order)


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str = "") -> TableGroup:
    """G x H on pairs, generated by (g, 1) and (1, h) for the generators."""
    eg, eh = G.identity, H.identity
    gens = [(g, eh) for g in G.generators] + [(eg, h) for h in H.generators]
    known = None
    if G._known_order() is not None and H._known_order() is not None:
        known = G._known_order() * H._known_order()
    product = TableGroup(
        gens,
        lambda x, y: (G.mul(x[0], y[0]), H.mul(x[1], y[1])),
        lambda x: (G.inv(x[0]), H.inv(x[1])),
        (eg, eh),
        name or f"{G.label()} x {H.label()}",
        order=known)
    product.factors = (G, H)
    return product


def direct_power(D: FiniteGroup, copies: int, name: str = "") -> TableGroup:
    """D^copies on tuples, generated by each generator of D in each coordinate."""
    if copies < 1:
        raise ValueError(f"need at least one copy, got {copies}")
    e = D.identity
    gens = []
    for i in range(copies):
        for g in D.generators:
            coords = [e] * copies
            coords[i] = g
            gens.append(tuple(coords))
    known = D._known_order()
    power = TableGroup(
        gens,
        lambda x, y: tuple(D.mul(a, b) for a, b in zip(x, y)),
        lambda x: tuple(D.inv(a) for a in x),
        tuple([e] * copies),
        name or f"{D.label()}^{copies}",
        order=None if known is None else known ** copies)
    power.base = D
    power.copies = copies
    return power


class AutomorphismGroup(TableGroup):
    """A group of automorphisms of `base`, stored as image-index tuples.

    The tuple t sends the i-th element of base (canonical order) to the
    t[i]-th. The product is function composition, (s * t)(x) = s(t(x)).
    """

    def __init__(self, base: FiniteGroup, generators: Sequence[Tuple[int, ...]],
                 name: str = ""):
        size = len(base.elements())
        identity = tuple(range(size))
        super().__init__(
            generators,
            lambda s, t: tuple(s[i] for i in t),
            _invert_tuple,
            identity,
            name or f"Aut<{base.label()}>")
        self.base = base

    def apply(self, t: Tuple[int, ...], x):
        return self.base.element(t[self.base.index(x)])

    def subgroup(self, generators: Sequence, name: str = "") -> "AutomorphismGroup":
        return AutomorphismGroup(self.base, generators, name)


def _invert_tuple(t: Tuple[int, ...]) -> Tuple[int, ...]:
    out = [0] * len(t)
    for i, j in enumerate(t):
        out[j] = i
    return tuple(out)


def semidirect_product(base: FiniteGroup, top: FiniteGroup, action,
                       name: str = "") -> TableGroup:
    """A ⋊ W on pairs (a, w).

    (a1, w1)(a2, w2) = (a1 * act(w1)(a2), w1 w2), where `action` is a verified
    homomorphism from `top` into an `AutomorphismGroup` of `base`. The
    generators are (a, 1) for the generators of A, then (1, w) for those of W.

    Raises:
        HallForgeError: the action's domain or codomain does not match.
    """
    aut = action.codomain
    if not isinstance(aut, AutomorphismGroup) or aut.base is not base:
        raise HallForgeError("action must map into automorphisms of the base group")
    if action.domain is not top:
        raise HallForgeError("action must be defined on the top group")
    index = base.index
    element = base.element

    def act(w, a):
        return element(action(w)[index(a)])

    def mul(x, y):
        return (base.mul(x[0], act(x[1], y[0])), top.mul(x[1], y[1]))

    def inv(x):
        w_inv = top.inv(x[1])
        return (act(w_inv, base.inv(x[0])), w_inv)

    ea, ew = base.identity, top.identity
    gens = [(a, ew) for a in base.generators] + [(ea, w) for w in top.generators]
    product = TableGroup(gens, mul, inv, (ea, ew),
                         name or f"{base.label()} x| {top.label()}",
                         order=len(base.elements()) * len(top.elements()))
    product.factors = (base, top)
    product.action = action
    logger.debug("semidirect product %s of order %d", product.label(),
                 product._known_order())
    return product
