"""Built-in permutation groups, addressed by name (C6, S4, A5, D4, Q8, V4)."""

import re
from typing import List

from hallforge.errors import ParseError
from hallforge.groups.perm import PermGroup, Permutation, parse_cycles

_NAME_RE = re.compile(r"^([CSAD])(\d+)$")

MAX_CYCLIC = 32
MAX_SYMMETRIC = 8
MAX_DIHEDRAL = 12


def cyclic(n: int) -> PermGroup:
    if n == 1:
        return PermGroup([Permutation.identity(1)], 1, "C1")
    return PermGroup([Permutation.cycle(n, range(1, n + 1))], n, f"C{n}")


def symmetric(n: int) -> PermGroup:
    return PermGroup.symmetric(n, f"S{n}")


def alternating(n: int) -> PermGroup:
    if n < 3:
        return PermGroup([Permutation.identity(n)], n, f"A{n}", order=1)
    gens = [Permutation.cycle(n, (1, 2, 3))]
    if n > 3:
        if n % 2:
            gens.append(Permutation.cycle(n, range(1, n + 1)))
        else:
            gens.append(Permutation.cycle(n, range(2, n + 1)))
    return PermGroup(gens, n, f"A{n}")


def dihedral(n: int) -> PermGroup:
    """The dihedral group of order 2n."""
    if n == 1:
        return PermGroup([Permutation.transposition(2, 1, 2)], 2, "D1")
    if n == 2:
        return PermGroup([parse_cycles("(1 2)", 4), parse_cycles("(3 4)", 4)], 4, "D2")
    rotation = Permutation.cycle(n, range(1, n + 1))
    reflection = Permutation([1] + [n + 2 - i for i in range(2, n + 1)])
    return PermGroup([rotation, reflection], n, f"D{n}")


def quaternion() -> PermGroup:
    return PermGroup([parse_cycles("(1 2 3 4)(5 8 7 6)", 8),
                      parse_cycles("(1 5 3 7)(2 6 4 8)", 8)], 8, "Q8")


def klein() -> PermGroup:
    return PermGroup([parse_cycles("(1 2)(3 4)", 4),
                      parse_cycles("(1 3)(2 4)", 4)], 4, "V4")


def catalog(name: str) -> PermGroup:
    """Looks up a built-in group; a fresh instance on every call.

    Raises:
        ParseError: unknown name or parameter out of range.
    """
    name = name.strip()
    if name == "trivial":
        return cyclic(1)
    if name == "Q8":
        return quaternion()
    if name == "V4":
        return klein()
    match = _NAME_RE.match(name)
    if not match:
        raise ParseError(f"unknown catalog group {name!r}")
    family, n = match.group(1), int(match.group(2))
    limits = {"C": MAX_CYCLIC, "S": MAX_SYMMETRIC, "A": MAX_SYMMETRIC,
              "D": MAX_DIHEDRAL}
    if not 1 <= n <= limits[family]:
        raise ParseError(f"{name}: parameter must be in 1..{limits[family]}")
    if family == "C":
        return cyclic(n)
    if family == "S":
        return symmetric(n)
    if family == "A":
        return alternating(n)
    return dihedral(n)


def catalog_names() -> List[str]:
    names = [f"C{n}" for n in range(1, MAX_CYCLIC + 1)]
    names += [f"S{n}" for n in range(1, MAX_SYMMETRIC + 1)]
    names += [f"A{n}" for n in range(1, MAX_SYMMETRIC + 1)]
    names += [f"D{n}" for n in range(1, MAX_DIHEDRAL + 1)]
    return names + ["Q8", "V4", "trivial"]
