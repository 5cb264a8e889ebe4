"""Commuting extensions and n-th roots of automorphisms.

commuting_extension realizes a commuting pair alpha (on A) and beta (on
B >= A) as conjugation by commuting elements f, g of one finite group C
containing B. root_extension then builds D^n with an automorphism gamma
whose n-th power extends beta and which itself extends alpha.
"""

import dataclasses
import logging
from typing import List, Optional

from hallforge import config
from hallforge.constructions.amalgam import AmalgamResult, amalgamate
from hallforge.errors import HallForgeError, HypothesisFailed, SubgroupNotInvariant
from hallforge.groups.base import FiniteGroup
from hallforge.groups.hom import (GroupHom, automorphism_order, automorphism_tuple,
                                  make_automorphism, make_homomorphism,
                                  power_hom, restrict_automorphism)
from hallforge.groups.perm import BlockDiagonalPower, PermGroup, Permutation
from hallforge.groups.table import (AutomorphismGroup, TableGroup, cyclic_group,
                                    direct_power, direct_product, semidirect_product)

logger = logging.getLogger(__name__)


def _inverse_tuple(t):
    out = [0] * len(t)
    for i, j in enumerate(t):
        out[j] = i
    return tuple(out)


@dataclasses.dataclass
class CommutingResult:
    """C = <e(B), f, g> with fg = gf, e(x)^f = e(alpha(x)), e(y)^g = e(beta(y)).

    Attributes:
        H: Z_m x Z_k with m = ord(alpha), k = ord(beta).
        G: A x| H, where f^i g^j acts on A as alpha^-i beta^-j.
        B_prime: B x| <g>, with g acting as beta^-1.
        E: A x| <g>, the common subgroup of G and B_prime.
        amalgam: The amalgam of E -> G and E -> B_prime.
        e: The embedding B -> ambient.
    """
    A: FiniteGroup
    B: FiniteGroup
    alpha: GroupHom
    beta: GroupHom
    H: TableGroup
    G: TableGroup
    B_prime: TableGroup
    E: TableGroup
    amalgam: AmalgamResult
    f: Permutation
    g: Permutation
    e: GroupHom

    @property
    def ambient(self) -> PermGroup:
        return self.amalgam.ambient

    @property
    def c_generators(self) -> List[Permutation]:
        return [self.e(y) for y in self.B.generators] + [self.f, self.g]

    @property
    def C(self) -> PermGroup:
        return PermGroup(self.c_generators, self.ambient.degree, "C")


def _check_invariant(A: FiniteGroup, beta: GroupHom) -> GroupHom:
    try:
        return restrict_automorphism(beta, A)
    except SubgroupNotInvariant as e:
        raise HypothesisFailed(f"beta does not leave A invariant: {e.message}") from e


def commuting_extension(A: FiniteGroup, B: FiniteGroup, alpha: GroupHom,
                        beta: GroupHom,
                        degree_cap: Optional[int] = None) -> CommutingResult:
    """Realizes commuting automorphisms as conjugation by commuting elements.

    Args:
        A: A subgroup of B (its elements are elements of B).
        alpha: An automorphism of A.
        beta: An automorphism of B with beta(A) = A and alpha∘beta = beta∘alpha
            on A.

    Raises:
        HypothesisFailed: beta moves A, or alpha and beta do not commute on A.
    """
    if alpha.domain is not A or beta.domain is not B:
        raise HypothesisFailed("alpha must act on A and beta on B")
    for a in A.generators:
        if not B.contains(a):
            raise HypothesisFailed(f"{a!r} is in A but not in B")
    beta_a = _check_invariant(A, beta)
    for x in A.elements():
        if alpha(beta_a(x)) != beta_a(alpha(x)):
            raise HypothesisFailed(f"alpha and beta do not commute at {x!r}")

    m, k = automorphism_order(alpha), automorphism_order(beta)
    alpha_inv = _inverse_tuple(automorphism_tuple(alpha))
    beta_a_inv = _inverse_tuple(automorphism_tuple(beta_a))
    beta_inv = _inverse_tuple(automorphism_tuple(beta))
    logger.info("commuting extension: |A|=%d |B|=%d ord(alpha)=%d ord(beta)=%d",
                A.order, B.order, m, k)

    H = direct_product(cyclic_group(m), cyclic_group(k), "H")
    f_top, g_top = (1 % m, 0), (0, 1 % k)
    acting_on_a = AutomorphismGroup(A, [alpha_inv, beta_a_inv])
    action_h = make_homomorphism(
        H, acting_on_a,
        [alpha_inv if h[1] == 0 else beta_a_inv for h in H.generators])
    G = semidirect_product(A, H, action_h, "G")

    Zk = cyclic_group(k, "<g>")
    on_b = AutomorphismGroup(B, [beta_inv])
    B_prime = semidirect_product(B, Zk, make_homomorphism(Zk, on_b, [beta_inv] * len(Zk.generators)),
                                 "B'")
    on_a = AutomorphismGroup(A, [beta_a_inv])
    E = semidirect_product(A, Zk, make_homomorphism(Zk, on_a, [beta_a_inv] * len(Zk.generators)),
                           "E")

    into_g = make_homomorphism(E, G, [(a, (0, j)) for a, j in E.generators])
    into_b = make_homomorphism(E, B_prime, [(a, j) for a, j in E.generators])
    amalgam = amalgamate(into_g, into_b, degree_cap)

    f = amalgam.r((A.identity, f_top))
    g = amalgam.r((A.identity, g_top))
    if g != amalgam.s((B.identity, 1 % k)):
        raise HallForgeError("the two copies of g disagree", stage="commuting")
    e = make_homomorphism(B, amalgam.ambient,
                          [amalgam.s((y, 0)) for y in B.generators])

    if f * g != g * f:
        raise HallForgeError("f and g do not commute", stage="commuting")
    for x in A.elements():
        if e(x).conjugate(f) != e(alpha(x)):
            raise HallForgeError(f"e(x)^f != e(alpha(x)) at {x!r}", stage="commuting")
    for y in B.elements():
        if e(y).conjugate(g) != e(beta(y)):
            raise HallForgeError(f"e(y)^g != e(beta(y)) at {y!r}", stage="commuting")
    return CommutingResult(A, B, alpha, beta, H, G, B_prime, E, amalgam, f, g, e)


def block_shift(n: int, degree: int, g: Permutation) -> Permutation:
    """Gamma on n blocks of `degree` points.

    Block i+1 goes to block i pointwise, and block 0 goes to block n-1
    through g, so conjugation by Gamma sends (z_1, ..., z_n) to
    (z_2, ..., z_n, z_1^g).
    """
    images = [0] * (n * degree)
    for i in range(1, n):
        for p in range(1, degree + 1):
            images[i * degree + p - 1] = (i - 1) * degree + p
    for p in range(1, degree + 1):
        images[p - 1] = (n - 1) * degree + g(p)
    return Permutation(images)


@dataclasses.dataclass
class RootResult:
    """C = D^n with gamma(z_1..z_n) = (z_2..z_n, z_1^g) and the twisted diagonal.

    Attributes:
        realization: "table" when C is enumerated as n-tuples, "perm" when
            C acts block-diagonally on n copies of D's points.
        Gamma: The block permutation whose conjugation is gamma on the
            block-diagonal realization (emitted for both realizations).
    """
    commuting: CommutingResult
    n: int
    D: PermGroup
    C: FiniteGroup
    realization: str
    Gamma: Permutation

    @property
    def f(self) -> Permutation:
        return self.commuting.f

    @property
    def g(self) -> Permutation:
        return self.commuting.g

    def phi(self, x: Permutation):
        """x -> (x, x^f, ..., x^{f^(n-1)}) in C."""
        parts = []
        y = x
        for _ in range(self.n):
            parts.append(y)
            y = y.conjugate(self.f)
        if self.realization == "table":
            return tuple(parts)
        return Permutation.block_sum(parts)

    def gamma(self, z):
        if self.realization == "table":
            return tuple(z[1:]) + (z[0].conjugate(self.g),)
        return z.conjugate(self.Gamma)

    def gamma_power(self, z, k: int):
        for _ in range(k):
            z = self.gamma(z)
        return z

    def as_permutation(self, z) -> Permutation:
        """z on the n blocks of the ambient's points."""
        return Permutation.block_sum(z) if self.realization == "table" else z

    def embed(self, y) -> object:
        """phi∘e, the embedding of B into C."""
        return self.phi(self.commuting.e(y))

    def gamma_automorphism(self) -> GroupHom:
        """gamma as a verified automorphism of an enumerated C."""
        return make_automorphism(self.C, [self.gamma(z) for z in self.C.generators])


def root_extension(A: FiniteGroup, B: FiniteGroup, alpha: GroupHom, beta: GroupHom,
                   n: int, degree_cap: Optional[int] = None,
                   enum_bound: Optional[int] = None) -> RootResult:
    """Finds gamma on D^n >= B with gamma extending alpha and gamma^n extending beta.

    Raises:
        HypothesisFailed: n < 1, beta moves A, or alpha^n != beta on A.
    """
    if n < 1:
        raise HypothesisFailed(f"n must be positive, got {n}")
    beta_a = _check_invariant(A, beta)
    alpha_n = power_hom(alpha, n)
    for x in A.elements():
        if alpha_n(x) != beta_a(x):
            raise HypothesisFailed(f"alpha^{n} != beta on A at {x!r}")
    commuting = commuting_extension(A, B, alpha, beta, degree_cap)
    degree = commuting.ambient.degree
    D = PermGroup(commuting.c_generators, degree, "D")
    bound = config.enum_bound(enum_bound)
    Gamma = block_shift(n, degree, commuting.g)
    if D.order ** n <= bound:
        D.elements()
        C = direct_power(D, n, "C")
        realization = "table"
    else:
        C = BlockDiagonalPower(D, n, "C")
        realization = "perm"
    logger.info("root extension: n=%d |D|=%d, C = D^%d (%s)", n, D.order, n,
                realization)
    result = RootResult(commuting, n, D, C, realization, Gamma)

    for x in A.elements():
        if result.gamma(result.embed(x)) != result.embed(alpha(x)):
            raise HallForgeError(f"gamma∘phi != phi∘alpha at {x!r}", stage="root")
    for y in B.elements():
        if result.gamma_power(result.embed(y), n) != result.embed(beta(y)):
            raise HallForgeError(f"gamma^n∘phi != phi∘beta at {y!r}", stage="root")
    for z in C.generators:
        if not C.contains(result.gamma(z)):
            raise HallForgeError("gamma moves a generator of C out of C", stage="root")
    return result
