import random

import pytest

from hallforge import config
from hallforge.certify.build import amalgam_certificate, equivariant_certificate
from hallforge.certify.verify import verify
from hallforge.constructions.amalgam import (amalgamate, equivariant_amalgamate,
                                             equivariant_joint_embed,
                                             restriction_epimorphism)
from hallforge.errors import (DegreeCapExceeded, NotEquivariant, NotInjective,
                              SubgroupNotInvariant)
from hallforge.groups.catalog import catalog
from hallforge.groups.hom import (EquivariantEmbedding, EquivariantSystem,
                                  automorphism_tuple, identity_hom, inner_automorphism,
                                  inversion_automorphism, make_homomorphism)
from hallforge.groups.iso import enumerate_subgroups, find_isomorphism
from hallforge.groups.perm import PermGroup, parse_cycles
from hallforge.groups.table import AutomorphismGroup

SMALL = ["C2", "C3", "C4", "V4", "C5", "S3", "C6", "C8", "D4", "Q8", "D5", "A4"]


def _square_commutes(result):
    return all(result.r(result.f(a)) == result.s(result.g(a))
               for a in result.f.domain.elements())


def test_product_construction():
    A, B, C = catalog("C2"), catalog("C4"), catalog("C6")
    x, y = B.generators[0], C.generators[0]
    result = amalgamate(make_homomorphism(A, B, [x ** 2]), make_homomorphism(A, C, [y ** 3]))
    assert result.construction == "product"
    assert result.ambient.degree == 24
    assert result.conjugator is not None
    assert _square_commutes(result)
    assert result.r.injective and result.s.injective
    assert all(result.D.contains(d) for d in result.d_generators)


def test_onto_construction():
    """An onto embedding needs no product: Sym(|C|) suffices."""
    A, C = catalog("C3"), catalog("C6")
    y = C.generators[0]
    result = amalgamate(identity_hom(A), make_homomorphism(A, C, [y ** 2]))
    assert result.construction == "onto"
    assert result.ambient.degree == 6
    assert result.conjugator is None
    assert _square_commutes(result)
    assert verify(amalgam_certificate(result)).passed


def test_rejects_non_injective():
    A, B = catalog("C2"), catalog("C4")
    f = make_homomorphism(A, B, [B.generators[0] ** 2])
    g = make_homomorphism(A, catalog("C3"), [catalog("C3").identity])
    with pytest.raises(NotInjective):
        amalgamate(f, g)


def test_degree_cap():
    A, B, C = catalog("C2"), catalog("C4"), catalog("C6")
    f = make_homomorphism(A, B, [B.generators[0] ** 2])
    g = make_homomorphism(A, C, [C.generators[0] ** 3])
    with pytest.raises(DegreeCapExceeded):
        amalgamate(f, g, degree_cap=20)
    config.limits.degree_cap = 23
    with pytest.raises(DegreeCapExceeded):
        amalgamate(f, g)


def _random_instance(rng):
    while True:
        B, C = catalog(rng.choice(SMALL)), catalog(rng.choice(SMALL))
        if B.order * C.order <= 60:
            break
    K = rng.choice(enumerate_subgroups(B))
    isos = [iso for iso in (find_isomorphism(K, L) for L in enumerate_subgroups(C))
            if iso is not None]
    iso = rng.choice(isos)
    f = make_homomorphism(K, B, list(K.generators))
    g = make_homomorphism(K, C, [iso(k) for k in K.generators])
    return f, g


def test_random_amalgams_certify():
    rng = random.Random(20240611)
    for _ in range(50):
        f, g = _random_instance(rng)
        result = amalgamate(f, g)
        assert _square_commutes(result)
        report = verify(amalgam_certificate(result))
        assert report.passed, report.summary()


def test_equivariant_pipeline(equivariant_instance):
    sys_a, sys_b, sys_c, f, g = equivariant_instance
    result = equivariant_amalgamate(sys_a, sys_b, sys_c, f, g)
    assert [result.X.order, result.Y.order, result.Z.order] == [2, 2, 2]
    assert result.fiber.W.order == 2
    assert [result.L.order, result.M.order, result.N.order] == [6, 12, 12]
    assert result.ambient.degree == 144
    B, C = sys_b.group, sys_c.group
    beta, gamma = sys_b.autos[0], sys_c.autos[0]
    for b in B.elements():
        assert result.delta(0, result.s(b)) == result.s(beta(b))
    for c in C.elements():
        assert result.delta(0, result.t(c)) == result.t(gamma(c))
    report = verify(equivariant_certificate(result))
    assert report.passed, report.summary()


def test_equivariant_without_automorphisms_matches_plain():
    """With no automorphisms the pipeline reduces to plain amalgamation."""
    A, B, C = catalog("C2"), catalog("C4"), catalog("S3")
    sys_a, sys_b, sys_c = (EquivariantSystem(G, []) for G in (A, B, C))
    f = make_homomorphism(A, B, [B.generators[0] ** 2])
    g = make_homomorphism(A, C, [parse_cycles("(1 2)", 3)])
    result = equivariant_amalgamate(sys_a, sys_b, sys_c, EquivariantEmbedding(f, sys_a, sys_b),
                                    EquivariantEmbedding(g, sys_a, sys_c))
    plain = amalgamate(f, g)
    assert result.delta_tildes == []
    assert [str(d) for d in result.d_generators] == [str(d) for d in plain.d_generators]


def test_equivariant_rejects_swapped_embeddings(equivariant_instance):
    sys_a, sys_b, sys_c, f, g = equivariant_instance
    with pytest.raises(NotEquivariant):
        equivariant_amalgamate(sys_a, sys_b, sys_c, g, f)


def test_restriction_needs_invariant_image():
    S3 = catalog("S3")
    Y = AutomorphismGroup(S3, [automorphism_tuple(
        inner_automorphism(S3, parse_cycles("(1 2 3)", 3)))])
    f = make_homomorphism(catalog("C2"), S3, [parse_cycles("(1 2)", 3)])
    with pytest.raises(SubgroupNotInvariant):
        restriction_epimorphism(Y, f)


def test_joint_embed(c3_inversion):
    C2 = catalog("C2")
    joined, into_a, into_b = equivariant_joint_embed(
        c3_inversion, EquivariantSystem(C2, [identity_hom(C2)]))
    assert joined.group.order == 6
    assert into_a.hom.injective and into_b.hom.injective
    with pytest.raises(NotEquivariant):
        equivariant_joint_embed(c3_inversion, EquivariantSystem(C2, []))


def _image(hom, G, degree):
    return PermGroup([hom(x) for x in G.generators], degree)


def test_images_are_isomorphic_copies():
    rng = random.Random(99)
    for _ in range(20):
        f, g = _random_instance(rng)
        result = amalgamate(f, g)
        B, C = f.codomain, g.codomain
        degree = result.ambient.degree
        assert find_isomorphism(B, _image(result.r, B, degree)) is not None
        assert find_isomorphism(C, _image(result.s, C, degree)) is not None


def _two_automorphism_instance():
    """C3 <= S3 and C3 <= C6 carrying two automorphisms each."""
    A, B, C = catalog("C3"), catalog("S3"), catalog("C6")
    sys_a = EquivariantSystem(A, [inversion_automorphism(A), identity_hom(A)])
    sys_b = EquivariantSystem(B, [inner_automorphism(B, parse_cycles("(1 2)", 3)),
                                  inner_automorphism(B, parse_cycles("(1 2 3)", 3))])
    sys_c = EquivariantSystem(C, [inversion_automorphism(C), identity_hom(C)])
    y = C.generators[0]
    f = make_homomorphism(A, B, [parse_cycles("(1 2 3)", 3)])
    g = make_homomorphism(A, C, [y * y])
    return (sys_a, sys_b, sys_c, EquivariantEmbedding(f, sys_a, sys_b),
            EquivariantEmbedding(g, sys_a, sys_c))


@pytest.fixture(scope="module")
def two_automorphism_amalgam():
    return equivariant_amalgamate(*_two_automorphism_instance())


def test_two_automorphisms(two_automorphism_amalgam):
    result = two_automorphism_amalgam
    assert [result.X.order, result.Y.order, result.Z.order] == [2, 6, 2]
    assert result.fiber.W.order == 6
    assert [result.L.order, result.M.order, result.N.order] == [18, 36, 36]
    assert result.ambient.degree == 1296
    cert = equivariant_certificate(result)
    assert cert.notes["order_W"] == "6"
    report = verify(cert)
    assert report.passed, report.summary()
    assert {"delta1_on_s", "delta2_on_t"} <= {f.name for f in report.families}


def test_deltas_compose(two_automorphism_amalgam):
    """delta_1∘delta_2 acts on s(B) as beta_1∘beta_2 and on t(C) as gamma_1∘gamma_2."""
    result = two_automorphism_amalgam
    sys_a, sys_b, sys_c = result.systems
    beta1, beta2 = sys_b.autos
    gamma1, gamma2 = sys_c.autos
    h = result.delta_tildes[0] * result.delta_tildes[1]
    h_inv = h.inverse()
    for b in sys_b.group.elements():
        assert h * result.s(b) * h_inv == result.s(beta1(beta2(b)))
        assert result.delta(0, result.delta(1, result.s(b))) == result.s(beta1(beta2(b)))
    for c in sys_c.group.elements():
        assert h * result.t(c) * h_inv == result.t(gamma1(gamma2(c)))
    B, C = sys_b.group, sys_c.group
    degree = result.ambient.degree
    assert find_isomorphism(B, _image(result.s, B, degree)) is not None
    assert find_isomorphism(C, _image(result.t, C, degree)) is not None
