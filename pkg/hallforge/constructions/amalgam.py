"""Amalgamation of finite groups, with and without automorphism tuples.

Plain amalgamation embeds B x C in Sym(|B||C|) by its regular
representation and conjugates the B factor so that f(A) x 1 lands on
1 x g(A). When one embedding is onto, the other group's regular
representation already amalgamates and no product is formed.

The equivariant version lifts the automorphisms into semidirect products
over a fiber product W of the generated automorphism groups, amalgamates
those, and reads the automorphisms of the amalgam off as conjugations.
"""

import contextlib
import dataclasses
import logging
from typing import List, Optional, Tuple

from hallforge import config
from hallforge.constructions.hrushovski import align_conjugator
from hallforge.errors import (DegreeCapExceeded, HallForgeError, NotEquivariant,
                              NotInjective, SubgroupNotInvariant)
from hallforge.groups.base import FiniteGroup, closure
from hallforge.groups.hom import (EquivariantEmbedding, EquivariantSystem, GroupHom,
                                  automorphism_tuple, make_automorphism,
                                  make_homomorphism, make_partial_iso,
                                  regular_representation)
from hallforge.groups.perm import PermGroup, Permutation
from hallforge.groups.table import (AutomorphismGroup, TableGroup, direct_product,
                                    semidirect_product)

logger = logging.getLogger(__name__)


@contextlib.contextmanager
def _stage(name: str):
    try:
        yield
    except HallForgeError as e:
        raise e.at_stage(name)


@dataclasses.dataclass
class AmalgamResult:
    """r: B -> K and s: C -> K with r∘f = s∘g.

    Attributes:
        construction: "product" when B x C was conjugated, "onto" when one
            embedding is surjective and the other group's regular
            representation was used directly.
        conjugator: The aligning permutation of the product construction.
        d_generators: r(generators of B) followed by s(generators of C).
    """
    f: GroupHom
    g: GroupHom
    ambient: PermGroup
    r: GroupHom
    s: GroupHom
    construction: str
    conjugator: Optional[Permutation]
    d_generators: List[Permutation]

    @property
    def D(self) -> PermGroup:
        return PermGroup(self.d_generators, self.ambient.degree, "D")


def _check_inputs(f: GroupHom, g: GroupHom):
    if f.domain is not g.domain and set(f.domain.elements()) != set(g.domain.elements()):
        raise HallForgeError("f and g must share their domain")
    for name, hom in (("f", f), ("g", g)):
        if not hom.injective:
            raise NotInjective(f"{name}: {hom.domain.label()} -> "
                               f"{hom.codomain.label()} is not injective")


def amalgamate(f: GroupHom, g: GroupHom,
               degree_cap: Optional[int] = None) -> AmalgamResult:
    """Completes two embeddings f: A -> B, g: A -> C to a commuting square.

    Raises:
        NotInjective: f or g has a nontrivial kernel.
        DegreeCapExceeded: the ambient symmetric group is above the cap.
    """
    _check_inputs(f, g)
    A, B, C = f.domain, f.codomain, g.codomain
    cap = config.degree_cap(degree_cap)

    if g.surjective or f.surjective:
        if g.surjective:
            rep = regular_representation(B, cap)
            ambient = PermGroup.symmetric(B.order)
            r = make_homomorphism(B, ambient, [rep.hom(b) for b in B.generators])
            s = make_homomorphism(
                C, ambient, [rep.hom(f(g.preimage(c))) for c in C.generators])
        else:
            rep = regular_representation(C, cap)
            ambient = PermGroup.symmetric(C.order)
            s = make_homomorphism(C, ambient, [rep.hom(c) for c in C.generators])
            r = make_homomorphism(
                B, ambient, [rep.hom(g(f.preimage(b))) for b in B.generators])
        construction, h = "onto", None
    else:
        degree = B.order * C.order
        if degree > cap:
            raise DegreeCapExceeded(
                f"|{B.label()}|*|{C.label()}| = {degree} exceeds the degree cap {cap}")
        P = direct_product(B, C)
        eb, ec = B.identity, C.identity
        psi = make_partial_iso(P, [(f(a), ec) for a in A.generators],
                               [(eb, g(a)) for a in A.generators])
        h = align_conjugator(P, psi)
        rep = regular_representation(P, cap)
        ambient = PermGroup.symmetric(degree)
        r = make_homomorphism(
            B, ambient, [rep.hom((b, ec)).conjugate(h) for b in B.generators])
        s = make_homomorphism(C, ambient, [rep.hom((eb, c)) for c in C.generators])
        construction = "product"

    for a in A.elements():
        if r(f(a)) != s(g(a)):
            raise HallForgeError(f"r∘f != s∘g at {a!r}", stage="amalgamate")
    if not r.injective or not s.injective:
        raise HallForgeError("amalgam maps are not injective", stage="amalgamate")
    d_generators = [r(b) for b in B.generators] + [s(c) for c in C.generators]
    logger.info("amalgamated %s and %s over %s in Sym(%d) (%s)", B.label(),
                C.label(), A.label(), ambient.degree, construction)
    return AmalgamResult(f, g, ambient, r, s, construction, h, d_generators)


def restriction_epimorphism(Y: AutomorphismGroup, f: GroupHom,
                            target: Optional[AutomorphismGroup] = None) -> GroupHom:
    """phi: Y -> X with phi(y) = f^-1 ∘ y ∘ f on A.

    Args:
        Y: Automorphisms of B = f.codomain, each leaving f(A) invariant.
        f: An embedding A -> B.
        target: The automorphism group of A to map into; by default the
            group generated by the restrictions.

    Raises:
        SubgroupNotInvariant: some generator of Y moves f(A).
    """
    A = f.domain
    inverse = {f(a): a for a in A.elements()}
    restricted = []
    for y in Y.generators:
        for a in A.generators:
            if Y.apply(y, f(a)) not in inverse:
                raise SubgroupNotInvariant(
                    f"an automorphism of {Y.base.label()} moves f({a!r}) out of "
                    "the image of f")
        restricted.append(tuple(A.index(inverse[Y.apply(y, f(a))])
                                for a in A.elements()))
    X = target if target is not None else AutomorphismGroup(A, restricted)
    return make_homomorphism(Y, X, restricted)


@dataclasses.dataclass
class FiberProduct:
    W: TableGroup
    proj_y: GroupHom
    proj_z: GroupHom


def fiber_product(phi: GroupHom, psi: GroupHom) -> FiberProduct:
    """W = {(y, z) : phi(y) = psi(z)} with its two projections.

    Generators are picked greedily in lexicographic index order.

    Raises:
        HallForgeError: the codomains differ or a map is not onto.
    """
    Y, Z, X = phi.domain, psi.domain, phi.codomain
    if psi.codomain is not X and set(psi.codomain.elements()) != set(X.elements()):
        raise HallForgeError("fiber product of maps with different codomains")
    if not phi.surjective or not psi.surjective:
        raise HallForgeError("fiber product needs surjective maps")
    pairs = [(y, z) for y in Y.elements() for z in Z.elements() if phi(y) == psi(z)]

    def mul(p, q):
        return (Y.mul(p[0], q[0]), Z.mul(p[1], q[1]))

    identity = (Y.identity, Z.identity)
    gens: List[Tuple] = []
    span = {identity}
    for p in pairs:
        if p not in span:
            gens.append(p)
            span = set(closure(identity, gens, mul, len(pairs)))
    W = TableGroup(gens, mul, lambda p: (Y.inv(p[0]), Z.inv(p[1])), identity,
                   "W", order=len(pairs))
    if len(W.elements()) != len(pairs):
        raise HallForgeError("fiber product is not closed")
    proj_y = make_homomorphism(W, Y, [p[0] for p in gens])
    proj_z = make_homomorphism(W, Z, [p[1] for p in gens])
    logger.debug("fiber product of order %d over X of order %d", len(pairs), X.order)
    return FiberProduct(W, proj_y, proj_z)


@dataclasses.dataclass
class EquivariantAmalgamResult:
    """The amalgam of three systems and every intermediate of the pipeline.

    `s` and `t` embed B and C into the ambient of `inner`; delta_i is
    conjugation d -> delta_tilde_i d delta_tilde_i^-1.
    """
    systems: Tuple[EquivariantSystem, EquivariantSystem, EquivariantSystem]
    f: EquivariantEmbedding
    g: EquivariantEmbedding
    X: AutomorphismGroup
    Y: AutomorphismGroup
    Z: AutomorphismGroup
    phi: GroupHom
    psi: GroupHom
    fiber: FiberProduct
    L: TableGroup
    M: TableGroup
    N: TableGroup
    f_tilde: GroupHom
    g_tilde: GroupHom
    inner: AmalgamResult
    delta_tildes: List[Permutation]
    s: GroupHom
    t: GroupHom

    @property
    def ambient(self) -> PermGroup:
        return self.inner.ambient

    @property
    def d_generators(self) -> List[Permutation]:
        B, C = self.s.domain, self.t.domain
        return [self.s(b) for b in B.generators] + [self.t(c) for c in C.generators]

    def delta(self, i: int, d: Permutation) -> Permutation:
        h = self.delta_tildes[i]
        return h * d * h.inverse()


def equivariant_amalgamate(sys_a: EquivariantSystem, sys_b: EquivariantSystem,
                           sys_c: EquivariantSystem, f: EquivariantEmbedding,
                           g: EquivariantEmbedding,
                           degree_cap: Optional[int] = None) -> EquivariantAmalgamResult:
    """Amalgamates two equivariant embeddings of systems with n automorphisms.

    Raises:
        NotEquivariant: the embeddings do not connect the given systems.
        HallForgeError: any stage fails; the error names the stage.
    """
    if f.source is not sys_a or g.source is not sys_a:
        raise NotEquivariant("both embeddings must start at the first system")
    if f.target is not sys_b or g.target is not sys_c:
        raise NotEquivariant("embeddings must end at the second and third systems")
    n = sys_a.arity
    if sys_b.arity != n or sys_c.arity != n:
        raise NotEquivariant("systems carry different numbers of automorphisms")
    A, B, C = sys_a.group, sys_b.group, sys_c.group
    fh, gh = f.hom, g.hom

    with _stage("generate"):
        alphas = [automorphism_tuple(a) for a in sys_a.autos]
        betas = [automorphism_tuple(b) for b in sys_b.autos]
        gammas = [automorphism_tuple(c) for c in sys_c.autos]
        X = AutomorphismGroup(A, alphas, "X")
        Y = AutomorphismGroup(B, betas, "Y")
        Z = AutomorphismGroup(C, gammas, "Z")
        for group in (X, Y, Z):
            group.elements()
        logger.info("automorphism groups: |X|=%d |Y|=%d |Z|=%d", X.order,
                    Y.order, Z.order)

    with _stage("restrict"):
        phi = restriction_epimorphism(Y, fh, X)
        psi = restriction_epimorphism(Z, gh, X)
        for i in range(n):
            if phi(betas[i]) != alphas[i] or psi(gammas[i]) != alphas[i]:
                raise NotEquivariant(f"restrictions of beta_{i + 1} and "
                                     f"gamma_{i + 1} differ from alpha_{i + 1}")

    with _stage("fiber"):
        fiber = fiber_product(phi, psi)
        W = fiber.W
        tops = [(betas[i], gammas[i]) for i in range(n)]
        for w in tops:
            if not W.contains(w):
                raise HallForgeError("(beta_i, gamma_i) is not in the fiber product")
        logger.info("fiber product |W|=%d", W.order)

    with _stage("semidirect"):
        L = semidirect_product(A, W, phi.after(fiber.proj_y), "L")
        M = semidirect_product(B, W, fiber.proj_y, "M")
        N = semidirect_product(C, W, fiber.proj_z, "N")
        f_tilde = make_homomorphism(L, M, [(fh(a), w) for a, w in L.generators])
        g_tilde = make_homomorphism(L, N, [(gh(a), w) for a, w in L.generators])
        logger.info("semidirect products |L|=%d |M|=%d |N|=%d", L.order,
                    M.order, N.order)

    with _stage("amalgamate"):
        inner = amalgamate(f_tilde, g_tilde, degree_cap)

    with _stage("delta"):
        ew = W.identity
        delta_tildes = []
        for w in tops:
            d = inner.r((B.identity, w))
            if d != inner.s((C.identity, w)):
                raise HallForgeError("s~(1, w) != t~(1, w)")
            delta_tildes.append(d)
        ambient = inner.ambient
        s = make_homomorphism(B, ambient, [inner.r((b, ew)) for b in B.generators])
        t = make_homomorphism(C, ambient, [inner.s((c, ew)) for c in C.generators])
        for a in A.elements():
            if s(fh(a)) != t(gh(a)):
                raise HallForgeError(f"s∘f != t∘g at {a!r}")
        for i, h in enumerate(delta_tildes):
            h_inv = h.inverse()
            for b in B.elements():
                if h * s(b) * h_inv != s(sys_b.autos[i](b)):
                    raise HallForgeError(f"delta_{i + 1}∘s != s∘beta_{i + 1} at {b!r}")
            for c in C.elements():
                if h * t(c) * h_inv != t(sys_c.autos[i](c)):
                    raise HallForgeError(f"delta_{i + 1}∘t != t∘gamma_{i + 1} at {c!r}")

    return EquivariantAmalgamResult(
        (sys_a, sys_b, sys_c), f, g, X, Y, Z, phi, psi, fiber, L, M, N,
        f_tilde, g_tilde, inner, delta_tildes, s, t)


def equivariant_joint_embed(sys_a: EquivariantSystem, sys_b: EquivariantSystem
                            ) -> Tuple[EquivariantSystem, EquivariantEmbedding,
                                       EquivariantEmbedding]:
    """A x B with the componentwise automorphisms, and both coordinate embeddings.

    Raises:
        NotEquivariant: the systems carry different numbers of automorphisms.
    """
    if sys_a.arity != sys_b.arity:
        raise NotEquivariant(f"systems carry {sys_a.arity} and {sys_b.arity} "
                             "automorphisms")
    A, B = sys_a.group, sys_b.group
    P = direct_product(A, B)
    autos = [make_automorphism(P, [(alpha(x), beta(y)) for x, y in P.generators])
             for alpha, beta in zip(sys_a.autos, sys_b.autos)]
    joined = EquivariantSystem(P, autos)
    into_a = make_homomorphism(A, P, [(a, B.identity) for a in A.generators])
    into_b = make_homomorphism(B, P, [(A.identity, b) for b in B.generators])
    return (joined, EquivariantEmbedding(into_a, sys_a, joined),
            EquivariantEmbedding(into_b, sys_b, joined))
