"""Permutations, permutation groups and stabilizer chains.

Points are 1..degree. The product p * q applies p first, then q, so
(p * q)(x) = q(p(x)) and the right regular representation is a homomorphism.
Conjugation is x^h = h^-1 * x * h.
"""

import functools
import logging
import math
import re
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from hallforge import config
from hallforge.errors import DegreeMismatch, ParseError
from hallforge.groups.base import FiniteGroup

logger = logging.getLogger(__name__)


@functools.total_ordering
class Permutation:
    """A bijection of {1..degree}, stored as the tuple of images."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def _trusted(cls, images: Tuple[int, ...]) -> "Permutation":
        p = object.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._trusted(tuple(range(1, degree + 1)))

    @classmethod
    def cycle(cls, degree: int, points: Sequence[int]) -> "Permutation":
        images = list(range(1, degree + 1))
        for a, b in zip(points, list(points[1:]) + list(points[:1])):
            images[a - 1] = b
        return cls(images)

    @classmethod
    def transposition(cls, degree: int, a: int, b: int) -> "Permutation":
        return cls.cycle(degree, (a, b))

    @classmethod
    def block_sum(cls, parts: Sequence["Permutation"]) -> "Permutation":
        """Acts as parts[i] on the i-th block of consecutive points."""
        images: List[int] = []
        offset = 0
        for p in parts:
            images.extend(x + offset for x in p.images)
            offset += p.degree
        return cls._trusted(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images, 1):
            inv[x - 1] = i
        return Permutation._trusted(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = Permutation.identity(self.degree)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self, h: "Permutation") -> "Permutation":
        """x^h = h^-1 x h: if x maps a to b, x^h maps h(a) to h(b)."""
        return h.inverse() * self * h

    @property
    def is_identity(self) -> bool:
        return all(x == i for i, x in enumerate(self.images, 1))

    def moved_point(self) -> Optional[int]:
        for i, x in enumerate(self.images, 1):
            if x != i:
                return i
        return None

    def support(self) -> List[int]:
        return [i for i, x in enumerate(self.images, 1) if x != i]

    def cycles(self) -> List[Tuple[int, ...]]:
        """Nontrivial cycles, each starting at its least point, ascending."""
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen or self(start) == start:
                continue
            cycle = [start]
            seen.add(start)
            x = self(start)
            while x != start:
                cycle.append(x)
                seen.add(x)
                x = self(x)
            out.append(tuple(cycle))
        return out

    @property
    def order(self) -> int:
        return math.lcm(1, *(len(c) for c in self.cycles()))

    def pad(self, degree: int) -> "Permutation":
        """The same permutation on a larger point set, fixing the new points."""
        if degree < self.degree:
            raise DegreeMismatch(f"cannot pad degree {self.degree} to {degree}")
        return Permutation._trusted(
            self.images + tuple(range(self.degree + 1, degree + 1)))

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return (self.degree, self.images) < (other.degree, other.images)

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def __repr__(self) -> str:
        return f"Permutation({self}, degree={self.degree})"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Returns p * q, which applies p first: (p * q)(x) = q(p(x)).

    Raises:
        DegreeMismatch: the degrees differ.
    """
    if p.degree != q.degree:
        raise DegreeMismatch(
            f"cannot compose degree {p.degree} with degree {q.degree}")
    qi = q.images
    return Permutation._trusted(tuple(qi[x - 1] for x in p.images))


_CYCLE_RE = re.compile(r"\(\s*(\d+(?:\s+\d+)*)?\s*\)")


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parses disjoint cycle notation such as "(1 2 3)(4 5)" or "()".

    Raises:
        ParseError: malformed parentheses, a point outside 1..degree, or a
            point repeated across cycles.
    """
    if degree < 1:
        raise ParseError(f"degree must be positive, got {degree}")
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty permutation text; use () for the identity")
    cycles = []
    pos = 0
    while pos < len(stripped):
        if stripped[pos].isspace():
            pos += 1
            continue
        match = _CYCLE_RE.match(stripped, pos)
        if match is None:
            raise ParseError(
                f"malformed cycle notation {text!r} at position {pos}")
        if match.group(1):
            cycles.append([int(t) for t in match.group(1).split()])
        pos = match.end()

    images = list(range(1, degree + 1))
    seen = set()
    for cycle in cycles:
        for point in cycle:
            if not 1 <= point <= degree:
                raise ParseError(f"point {point} exceeds degree {degree}")
            if point in seen:
                raise ParseError(f"point {point} repeated in {text!r}")
            seen.add(point)
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            images[a - 1] = b
    return Permutation._trusted(tuple(images))


def _check_degrees(gens: Sequence[Permutation],
                   degree: Optional[int] = None) -> int:
    if degree is None:
        if not gens:
            raise ValueError("degree is required when there are no generators")
        degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise DegreeMismatch(
                f"generator {g} has degree {g.degree}, expected {degree}")
    return degree


def orbit(gens: Sequence[Permutation], point: int,
          degree: Optional[int] = None) -> List[int]:
    """The orbit of `point`, in breadth-first discovery order.

    Raises:
        ValueError: `point` is outside 1..degree.
    """
    degree = _check_degrees(gens, degree)
    if not 1 <= point <= degree:
        raise ValueError(f"point {point} outside 1..{degree}")
    out = [point]
    seen = {point}
    i = 0
    while i < len(out):
        x = out[i]
        i += 1
        for g in gens:
            y = g(x)
            if y not in seen:
                seen.add(y)
                out.append(y)
    return out


class _UnionFind:

    def __init__(self, points: Iterable[int]):
        self.parent = {x: x for x in points}
        self.components = len(self.parent)

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int):
        x, y = self.find(x), self.find(y)
        if x != y:
            self.parent[y] = x
            self.components -= 1


def _generates_symmetric(gens: Sequence[Permutation], degree: int) -> bool:
    """Whether the conjugates of generating transpositions connect all points.

    Every conjugate of a transposition in G is a transposition in G; if their
    graph is connected they generate Sym(degree), hence G = Sym(degree).
    """
    if degree < 2:
        return False
    uf = _UnionFind(range(1, degree + 1))
    queue = []
    seen = set()
    for g in gens:
        support = g.support()
        if len(support) == 2 and tuple(support) not in seen:
            seen.add(tuple(support))
            queue.append(tuple(support))
    i = 0
    while i < len(queue):
        a, b = queue[i]
        i += 1
        uf.union(a, b)
        if uf.components == 1:
            return True
        for g in gens:
            pair = tuple(sorted((g(a), g(b))))
            if pair not in seen:
                seen.add(pair)
                queue.append(pair)
    return False


class _Level:
    """One level of a stabilizer chain.

    Holds a base point, the strong generators fixing every earlier base
    point, and a transversal: for each orbit point b an element u with
    u(point) = b. Existing transversal entries never change once set, so
    Schreier generators already checked stay valid as generators are added.
    """

    __slots__ = ("point", "generators", "orbit", "transversal", "inverses",
                 "checked")

    def __init__(self, point: int, degree: int):
        identity = Permutation.identity(degree)
        self.point = point
        self.generators: List[Permutation] = []
        self.orbit = [point]
        self.transversal: Dict[int, Permutation] = {point: identity}
        self.inverses: Dict[int, Permutation] = {point: identity}
        self.checked = set()

    def add_generator(self, g: Permutation):
        self.generators.append(g)
        i = 0
        while i < len(self.orbit):
            x = self.orbit[i]
            i += 1
            u = self.transversal[x]
            for s in self.generators:
                y = s(x)
                if y not in self.transversal:
                    v = u * s
                    self.transversal[y] = v
                    self.inverses[y] = v.inverse()
                    self.orbit.append(y)

    def coset_inverse(self, b: int) -> Optional[Permutation]:
        return self.inverses.get(b)

    @property
    def orbit_size(self) -> int:
        return len(self.orbit)


class _SymmetricLevel:
    """A level of the natural chain of Sym(degree), with base point i.

    The transversal element taking i to b is the transposition (i b),
    produced on demand.
    """

    __slots__ = ("point", "degree")

    def __init__(self, point: int, degree: int):
        self.point = point
        self.degree = degree

    @property
    def orbit(self) -> List[int]:
        return list(range(self.point, self.degree + 1))

    @property
    def orbit_size(self) -> int:
        return self.degree - self.point + 1

    @property
    def generators(self) -> List[Permutation]:
        return [Permutation.transposition(self.degree, k, k + 1)
                for k in range(self.point, self.degree)]

    def coset_inverse(self, b: int) -> Optional[Permutation]:
        if not self.point <= b <= self.degree:
            return None
        if b == self.point:
            return Permutation.identity(self.degree)
        return Permutation.transposition(self.degree, self.point, b)


class StabChain:
    """A base and strong generating set, supporting membership and order."""

    def __init__(self, degree: int, levels: list, symmetric: bool = False):
        self.degree = degree
        self.levels = levels
        self.symmetric = symmetric

    @property
    def base(self) -> List[int]:
        return [level.point for level in self.levels]

    @property
    def order(self) -> int:
        return math.prod(level.orbit_size for level in self.levels)

    @property
    def strong_generators(self) -> List[Permutation]:
        out, seen = [], set()
        for level in self.levels:
            for g in level.generators:
                if g not in seen:
                    seen.add(g)
                    out.append(g)
        return out

    def sift(self, g: Permutation, start: int = 0) -> Tuple[Permutation, int]:
        """Strips g through the levels from `start`.

        Returns the residue and the level at which stripping stopped
        (len(levels) when it passed every level).
        """
        return _strip(g, self.levels, start)

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        residue, depth = self.sift(g)
        return depth == len(self.levels) and residue.is_identity


def _strip(g: Permutation, levels: list, start: int) -> Tuple[Permutation, int]:
    for j in range(start, len(levels)):
        level = levels[j]
        u_inv = level.coset_inverse(g(level.point))
        if u_inv is None:
            return g, j
        g = g * u_inv
    return g, len(levels)


def schreier_sims(gens: Sequence[Permutation],
                  degree: Optional[int] = None) -> StabChain:
    """Builds a stabilizer chain for the group generated by `gens`.

    Deterministic Schreier-Sims: every Schreier generator of every level is
    sifted through the deeper levels, and a nontrivial residue becomes a new
    strong generator. Groups whose generating transpositions conjugate to a
    connected graph on all points are the full symmetric group and get the
    natural chain directly.

    Raises:
        DegreeMismatch: the generators have different degrees.
    """
    degree = _check_degrees(gens, degree)
    gens = [g for g in gens if not g.is_identity]
    if _generates_symmetric(gens, degree):
        logger.debug("natural symmetric chain for degree %d", degree)
        return StabChain(
            degree,
            [_SymmetricLevel(i, degree) for i in range(1, degree)],
            symmetric=True)

    levels: List[_Level] = []
    for g in gens:
        if all(g(level.point) == level.point for level in levels):
            levels.append(_Level(g.moved_point(), degree))
    for i, level in enumerate(levels):
        prefix = [lv.point for lv in levels[:i]]
        for g in gens:
            if all(g(b) == b for b in prefix):
                level.add_generator(g)

    i = len(levels) - 1
    while i >= 0:
        level = levels[i]
        violation = None
        for b in level.orbit:
            u = level.transversal[b]
            for k, s in enumerate(level.generators):
                if (b, k) in level.checked:
                    continue
                level.checked.add((b, k))
                h = u * s * level.inverses[s(b)]
                if h.is_identity:
                    continue
                residue, depth = _strip(h, levels, i + 1)
                if depth == len(levels) and residue.is_identity:
                    continue
                violation = (residue, depth)
                break
            if violation:
                break
        if violation is None:
            i -= 1
            continue
        residue, depth = violation
        if depth == len(levels):
            levels.append(_Level(residue.moved_point(), degree))
        for j in range(i + 1, depth + 1):
            levels[j].add_generator(residue)
        i = depth

    chain = StabChain(degree, levels)
    logger.debug("stabilizer chain: degree %d, base length %d", degree,
                 len(levels))
    return chain


class PermGroup(FiniteGroup):
    """A permutation group of a fixed degree, given by generators.

    The stabilizer chain is computed lazily and gives membership and the
    exact (arbitrary-precision) order.
    """

    def __init__(self, generators: Sequence[Permutation],
                 degree: Optional[int] = None, name: str = "",
                 order: Optional[int] = None):
        """Creates the group.

        Args:
            generators: Permutations of a common degree; may be empty.
            degree: Required when `generators` is empty.
            name: Optional label used in messages and certificates.
            order: The order when it is already proven (for example the image
                of a verified faithful representation); skips the chain.
        """
        self.degree = _check_degrees(list(generators), degree)
        super().__init__(generators, name)
        self._order = order
        self._symmetric = False

    @classmethod
    def symmetric(cls, degree: int, name: str = "") -> "PermGroup":
        """Sym(degree), generated by (1 2) and (1 2 ... degree)."""
        if degree == 1:
            gens = [Permutation.identity(1)]
        elif degree == 2:
            gens = [Permutation.transposition(2, 1, 2)]
        else:
            gens = [Permutation.transposition(degree, 1, 2),
                    Permutation.cycle(degree, range(1, degree + 1))]
        group = cls(gens, degree, name or f"Sym({degree})",
                    order=math.factorial(degree))
        group._symmetric = True
        return group

    @functools.cached_property
    def chain(self) -> StabChain:
        return schreier_sims(self.generators, self.degree)

    @property
    def order(self) -> int:
        if self._order is None:
            self._order = self.chain.order
        return self._order

    def _known_order(self) -> Optional[int]:
        if self._order is None and self._elements is None:
            # Cheap for the groups that are enumerated anyway.
            return self.chain.order
        return self._order

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def mul(self, x: Permutation, y: Permutation) -> Permutation:
        return compose(x, y)

    def inv(self, x: Permutation) -> Permutation:
        return x.inverse()

    def contains(self, x) -> bool:
        if not isinstance(x, Permutation) or x.degree != self.degree:
            return False
        if self._symmetric:
            return True
        if self._elements is not None:
            return x in self._index
        return self.chain.contains(x)

    def is_full_symmetric(self) -> bool:
        return self._symmetric or self.order == math.factorial(self.degree)

    def subgroup(self, generators: Sequence[Permutation],
                 name: str = "") -> "PermGroup":
        return PermGroup(generators, self.degree, name)

    def element_order(self, x: Permutation) -> int:
        return x.order


def enumerate_elements(group: PermGroup,
                       bound: Optional[int] = None) -> List[Permutation]:
    """All elements once, breadth-first from the identity.

    Raises:
        OrderTooLarge: the order exceeds the enumeration bound.
    """
    return group.elements(config.enum_bound(bound))


class BlockDiagonalPower(PermGroup):
    """D^n acting on n consecutive blocks of D's points, one copy per block."""

    def __init__(self, base: PermGroup, copies: int, name: str = ""):
        self.base = base
        self.copies = copies
        identity = base.identity
        gens = []
        for i in range(copies):
            for g in base.generators:
                parts = [identity] * copies
                parts[i] = g
                gens.append(Permutation.block_sum(parts))
        super().__init__(gens, base.degree * copies,
                         name or f"{base.label()}^{copies}",
                         order=base.order ** copies)

    def embed(self, parts: Sequence[Permutation]) -> Permutation:
        if len(parts) != self.copies:
            raise ValueError(f"expected {self.copies} blocks, got {len(parts)}")
        return Permutation.block_sum(parts)

    def blocks(self, x: Permutation) -> Optional[List[Permutation]]:
        """The per-block components of x, or None if x mixes blocks."""
        n = self.base.degree
        parts = []
        for i in range(self.copies):
            chunk = x.images[i * n:(i + 1) * n]
            shifted = tuple(p - i * n for p in chunk)
            if any(not 1 <= p <= n for p in shifted):
                return None
            parts.append(Permutation._trusted(shifted))
        return parts

    def contains(self, x) -> bool:
        if not isinstance(x, Permutation) or x.degree != self.degree:
            return False
        parts = self.blocks(x)
        return parts is not None and all(self.base.contains(p) for p in parts)
