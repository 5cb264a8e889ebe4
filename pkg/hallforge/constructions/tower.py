"""Finite towers: iterated symmetric groups and power-root towers.

The Hall tower starts at the regular image of a seed group and takes
H_{k+1} = Sym(|H_k|) with the regular embedding. The power tower alternates
joining a catalog group (extending the automorphism by the identity) with
a root step, so that every stage carries g_i and f_i = g_i^n with both
extending the previous stage.
"""

import dataclasses
import logging
from typing import Callable, List, Optional, Sequence, Tuple

from hallforge import config
from hallforge.constructions.amalgam import equivariant_joint_embed
from hallforge.constructions.hrushovski import align_conjugator
from hallforge.constructions.roots import RootResult, root_extension
from hallforge.errors import (DepthTooLarge, HallForgeError, OrderTooLarge,
                              SizeBoundExceeded, StageTooSmall)
from hallforge.groups.base import FiniteGroup
from hallforge.groups.catalog import catalog
from hallforge.groups.hom import (EquivariantSystem, GroupHom, PartialIso,
                                  identity_hom, make_homomorphism, power_hom,
                                  regular_representation)
from hallforge.groups.iso import enumerate_subgroups, find_isomorphism
from hallforge.groups.perm import PermGroup, Permutation

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class HallTower:
    """Stages H_0 <= H_1 <= ... and the regular embeddings between them."""
    seed: FiniteGroup
    stages: List[PermGroup]
    embeddings: List[GroupHom]

    @property
    def depth(self) -> int:
        return len(self.embeddings)

    @property
    def degrees(self) -> List[int]:
        return [H.degree for H in self.stages]

    @property
    def orders(self) -> List[int]:
        return [H.order for H in self.stages]


def hall_tower(depth: int = 3, seed: str = "C3") -> HallTower:
    """Builds the tower to the given depth.

    Raises:
        DepthTooLarge: depth is above the configured cap.
        DegreeCapExceeded: some stage is too large to represent regularly.
    """
    cap = config.limits.tower_depth_cap
    if depth < 0 or depth > cap:
        raise DepthTooLarge(
            f"depth must be in 0..{cap}; the next stage would act on "
            "more points than can be represented")
    seed_group = catalog(seed) if isinstance(seed, str) else seed
    stages = [regular_representation(seed_group).group]
    embeddings = []
    for k in range(depth):
        H = stages[-1]
        rep = regular_representation(H)
        successor = PermGroup.symmetric(H.order, f"H{k + 1}")
        embeddings.append(make_homomorphism(H, successor,
                                            [rep.hom(h) for h in H.generators]))
        stages.append(successor)
        logger.info("hall tower stage %d: Sym(%d)", k + 1, H.order)
    return HallTower(seed_group, stages, embeddings)


@dataclasses.dataclass
class ConjugacyEntry:
    domain: FiniteGroup
    codomain: FiniteGroup
    iso: Optional[GroupHom]
    conjugator: Optional[Permutation]


@dataclasses.dataclass
class ConjugacyReport:
    stage: int
    entries: List[ConjugacyEntry]

    @property
    def conjugated(self) -> int:
        return sum(1 for e in self.entries if e.conjugator is not None)

    @property
    def isomorphic(self) -> int:
        return sum(1 for e in self.entries if e.iso is not None)


def stage_conjugacy_check(tower: HallTower, k: int,
                          pairs: Optional[Sequence[Tuple[FiniteGroup, FiniteGroup]]] = None
                          ) -> ConjugacyReport:
    """Conjugates isomorphic subgroups of H_k inside H_{k+1}.

    Every pair (K, K') of subgroups with K listed no later than K' is
    tried; non-isomorphic pairs are reported without a conjugator.

    Raises:
        SizeBoundExceeded: H_k is too large to enumerate subgroups and no
            pairs were given.
    """
    if not 0 <= k < tower.depth:
        raise HallForgeError(f"stage {k} has no successor in a depth-{tower.depth} tower")
    H = tower.stages[k]
    rho = tower.embeddings[k]
    if pairs is None:
        if H.order > config.limits.iso_bound:
            raise SizeBoundExceeded(
                f"H_{k} has order {H.order}; pass explicit subgroup pairs")
        subgroups = enumerate_subgroups(H)
        pairs = [(subgroups[i], subgroups[j]) for i in range(len(subgroups))
                 for j in range(i, len(subgroups))]
    entries = []
    for K, L in pairs:
        iso = find_isomorphism(K, L) if K.order == L.order else None
        if iso is None:
            entries.append(ConjugacyEntry(K, L, None, None))
            continue
        psi = PartialIso(H, iso)
        h = align_conjugator(H, psi)
        for x in K.elements():
            if rho(x).conjugate(h) != rho(iso(x)):
                raise HallForgeError(f"conjugator fails at {x!r}", stage=f"H{k + 1}")
        entries.append(ConjugacyEntry(K, L, iso, h))
    report = ConjugacyReport(k, entries)
    logger.info("stage %d: %d of %d pairs isomorphic, all conjugated", k,
                report.isomorphic, len(entries))
    return report


@dataclasses.dataclass
class EmbeddingReport:
    group: FiniteGroup
    stage: int
    hom: GroupHom


def stage_embedding_check(tower: HallTower, k: int, G: FiniteGroup) -> EmbeddingReport:
    """Embeds G in H_k through its regular representation padded to H_k's degree.

    Raises:
        StageTooSmall: |G| exceeds the degree of H_k, or the padded image
            is not inside H_k.
    """
    H = tower.stages[k]
    if G.order > H.degree:
        raise StageTooSmall(f"|G| = {G.order} exceeds the degree {H.degree} of H_{k}")
    rep = regular_representation(G)
    images = [rep.hom(g).pad(H.degree) for g in G.generators]
    for p in images:
        if not H.contains(p):
            raise StageTooSmall(f"the regular image of {G.label()} is not inside H_{k}")
    hom = make_homomorphism(G, H, images)
    if not hom.injective:
        raise HallForgeError("padded regular representation is not injective")
    return EmbeddingReport(G, k, hom)


@dataclasses.dataclass
class PowerTowerStage:
    """A_i with g_i and f_i = g_i^n, and the embedding of A_{i-1}.

    `g` and `f` are callables on elements of `group`. `embedding` is
    None for the seed stage; `root` is the root step that produced the
    stage, and `joined` names the catalog group joined before it.
    `into` and `joined_into` embed A_{i-1} and the joined group into the
    root step's B, so `embedding` is `root.embed` after `into`.
    """
    index: int
    group: FiniteGroup
    g: Callable
    f: Callable
    embedding: Optional[Callable] = None
    joined: Optional[str] = None
    root: Optional[RootResult] = None
    g_hom: Optional[GroupHom] = None
    into: Optional[GroupHom] = None
    joined_into: Optional[GroupHom] = None


def _stage_automorphisms(root: RootResult, n: int):
    if root.realization == "table":
        g_hom = root.gamma_automorphism()
        f_hom = power_hom(g_hom, n)
        return g_hom, g_hom, f_hom
    Gamma_n = root.Gamma ** n
    return None, root.gamma, lambda z: z.conjugate(Gamma_n)


def generic_power_tower(n: int, depth: int, seed: EquivariantSystem,
                        schedule: Optional[Sequence[str]] = None) -> List[PowerTowerStage]:
    """Iterates join and root steps `depth` times from (A_0, g_0).

    Raises:
        HallForgeError: n < 1, a seed without exactly one automorphism, or
            a stage beyond the bounds (the error names the stage).
    """
    if n < 1:
        raise HallForgeError(f"n must be positive, got {n}")
    if seed.arity != 1:
        raise HallForgeError("the seed system must carry exactly one automorphism")
    schedule = tuple(schedule or config.limits.power_schedule)
    g0 = seed.autos[0]
    stages = [PowerTowerStage(0, seed.group, g0, power_hom(g0, n), g_hom=g0)]

    for i in range(depth):
        current = stages[-1]
        label = f"stage {i + 1}"
        try:
            if current.g_hom is None:
                raise OrderTooLarge(config.enum_bound(), current.group.label())
            joined_name = schedule[i % len(schedule)]
            joined = catalog(joined_name)
            system, into_p, into_q = equivariant_joint_embed(
                EquivariantSystem(current.group, [current.g_hom]),
                EquivariantSystem(joined, [identity_hom(joined)]))
            B, h = system.group, system.autos[0]
            root = root_extension(B, B, h, power_hom(h, n), n)
        except HallForgeError as e:
            raise e.at_stage(label)

        g_hom, g_next, f_next = _stage_automorphisms(root, n)
        into_c = _compose(root.embed, into_p.hom)
        for x in current.group.elements():
            y = into_c(x)
            if g_next(y) != into_c(current.g(x)):
                raise HallForgeError(f"g_{i + 1} does not extend g_{i}", stage=label)
            if f_next(y) != into_c(current.f(x)):
                raise HallForgeError(f"f_{i + 1} does not extend f_{i}", stage=label)
        for z in root.C.generators:
            if f_next(z) != root.gamma_power(z, n):
                raise HallForgeError(f"f_{i + 1} != g_{i + 1}^{n}", stage=label)
        logger.info("power tower %s: joined %s, |A|=%d (%s)", label, joined_name,
                    root.C._known_order(), root.realization)
        stages.append(PowerTowerStage(i + 1, root.C, g_next, f_next, into_c,
                                      joined_name, root, g_hom,
                                      into_p.hom, into_q.hom))
    return stages


def _compose(outer: Callable, inner: GroupHom) -> Callable:
    return lambda x: outer(inner(x))


def automorphism_map_order(g: Callable, group: FiniteGroup, limit: int = 100000) -> int:
    """The order of g as a map, read on the generators of `group`."""
    gens = list(group.generators)
    current = gens
    for k in range(1, limit + 1):
        current = [g(z) for z in current]
        if current == gens:
            return k
    raise HallForgeError(f"automorphism order exceeds {limit}")
