"""The finite-group interface shared by permutation and table groups."""

import abc
import logging
import math
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from hallforge import config
from hallforge.errors import OrderTooLarge

logger = logging.getLogger(__name__)


def default_generator_names(count: int) -> Tuple[str, ...]:
    """x, y, z, u, v, w, then g7, g8, ..."""
    names = ("x", "y", "z", "u", "v", "w")
    return tuple(names[i] if i < len(names) else f"g{i + 1}" for i in range(count))


def closure(identity: Hashable, generators: Sequence[Hashable],
            mul: Callable, bound: int) -> List:
    """Enumerates the group generated by `generators`.

    Breadth-first from the identity, multiplying on the right by the
    generators in input order. The returned order is the canonical element
    order used everywhere else: element 0 is the identity.

    Raises:
        OrderTooLarge: more than `bound` elements were found.
    """
    seen = {identity}
    elements = [identity]
    i = 0
    while i < len(elements):
        x = elements[i]
        i += 1
        for g in generators:
            y = mul(x, g)
            if y not in seen:
                if len(elements) >= bound:
                    raise OrderTooLarge(bound)
                seen.add(y)
                elements.append(y)
    return elements


class FiniteGroup(abc.ABC):
    """A finitely generated finite group given by generators.

    Subclasses supply the arithmetic; this class supplies the canonical
    enumeration, element indices and the helpers built on them. Instances
    are immutable once published, the element cache is filled at most once.
    """

    name: str = ""

    def __init__(self, generators: Sequence[Hashable], name: str = ""):
        self.generators: Tuple = tuple(generators)
        self.generator_names: Tuple[str, ...] = default_generator_names(
            len(self.generators))
        self.name = name
        self._elements: Optional[List] = None
        self._index: Optional[Dict[Hashable, int]] = None

    @property
    @abc.abstractmethod
    def identity(self):
        ...

    @abc.abstractmethod
    def mul(self, x, y):
        ...

    @abc.abstractmethod
    def inv(self, x):
        ...

    @abc.abstractmethod
    def contains(self, x) -> bool:
        ...

    @abc.abstractmethod
    def subgroup(self, generators: Sequence, name: str = "") -> "FiniteGroup":
        """Returns the subgroup generated by `generators`, in this group's kind."""

    @property
    def order(self) -> int:
        return len(self.elements())

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def elements(self, bound: Optional[int] = None) -> List:
        """Returns every element once, in canonical order.

        Raises:
            OrderTooLarge: the group has more than the enumeration bound.
        """
        if self._elements is None:
            bound = config.enum_bound(bound)
            known = self._known_order()
            if known is not None and known > bound:
                raise OrderTooLarge(bound, self.name or "group")
            try:
                elements = closure(self.identity, self.generators, self.mul, bound)
            except OrderTooLarge as e:
                raise OrderTooLarge(e.bound, self.name or "group") from e
            self._elements = elements
            self._index = {x: i for i, x in enumerate(elements)}
            logger.debug("enumerated %s: %d elements", self.name or "group",
                         len(elements))
        return self._elements

    def _known_order(self) -> Optional[int]:
        """Order known without enumeration, if any."""
        return None

    def index(self, x) -> int:
        """Position of `x` in the canonical enumeration."""
        self.elements()
        return self._index[x]

    def element(self, i: int):
        return self.elements()[i]

    def power(self, x, k: int):
        if k < 0:
            x, k = self.inv(x), -k
        result = self.identity
        while k:
            if k & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            k >>= 1
        return result

    def element_order(self, x) -> int:
        n, y = 1, x
        while y != self.identity:
            y = self.mul(y, x)
            n += 1
        return n

    def conjugate(self, x, h):
        """Returns x^h = h^-1 x h."""
        return self.mul(self.mul(self.inv(h), x), h)

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)

    def exponent(self) -> int:
        return math.lcm(*(self.element_order(x) for x in self.elements()))

    def order_profile(self) -> Tuple[int, ...]:
        """Sorted element orders, an isomorphism invariant."""
        return tuple(sorted(self.element_order(x) for x in self.elements()))

    def label(self) -> str:
        return self.name or f"<{len(self.generators)} generators>"

    def __repr__(self):
        return f"{type(self).__name__}({self.label()})"
