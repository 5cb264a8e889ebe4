import dataclasses

import pytest

from hallforge import config
from hallforge.groups.catalog import catalog
from hallforge.groups.hom import (EquivariantEmbedding, EquivariantSystem,
                                  inner_automorphism, inversion_automorphism,
                                  make_homomorphism, subgroup_generated)
from hallforge.groups.perm import parse_cycles


@pytest.fixture(autouse=True)
def restore_limits():
    """Undo any change a test makes to the live limits."""
    saved = dataclasses.replace(config.limits)
    yield
    for field in dataclasses.fields(saved):
        setattr(config.limits, field.name, getattr(saved, field.name))


@pytest.fixture
def c4_pair():
    """A = <x^2> <= B = C4, alpha = id on A, beta = inversion on B."""
    B = catalog("C4")
    x = B.generators[0]
    A = subgroup_generated(B, [x * x], "A")
    alpha = make_homomorphism(A, A, list(A.generators))
    beta = inversion_automorphism(B)
    return A, B, alpha, beta


@pytest.fixture
def c3_inversion():
    C3 = catalog("C3")
    return EquivariantSystem(C3, [inversion_automorphism(C3)])


@pytest.fixture
def equivariant_instance():
    """C3 with inversion inside S3 (conjugation by (1 2)) and C6 (inversion)."""
    A, B, C = catalog("C3"), catalog("S3"), catalog("C6")
    sys_a = EquivariantSystem(A, [inversion_automorphism(A)])
    sys_b = EquivariantSystem(B, [inner_automorphism(B, parse_cycles("(1 2)", 3))])
    sys_c = EquivariantSystem(C, [inversion_automorphism(C)])
    y = C.generators[0]
    f = make_homomorphism(A, B, [parse_cycles("(1 2 3)", 3)])
    g = make_homomorphism(A, C, [y * y])
    return (sys_a, sys_b, sys_c, EquivariantEmbedding(f, sys_a, sys_b),
            EquivariantEmbedding(g, sys_a, sys_c))
