import random

import pytest
from hypothesis import given, settings, strategies as st

from fanoverify.bundles import (
    FreeGradedModule,
    GradedMap,
    ModificationDatum,
    SplittingType,
    elementary_modification_splitting,
    h0_twist,
    oracle_splitting,
    quotient_splitting,
    splitting_from_h0,
    splitting_type,
    syzygy_kernel,
)
from fanoverify.errors import CapExceeded, DuplicatePoint, NotSurjective, SectionVanishes, ZeroDirection
from fanoverify.field import FieldSpec
from fanoverify.forms import BinaryForm, ProjectivePoint

Q = FieldSpec(0)


def s_(F):
    return BinaryForm(F, [1, 0])


def t_(F):
    return BinaryForm(F, [0, 1])


def random_map(F, rng, m, max_twist=3):
    """Random row map (+) O(a_j) -> O(b) with entries of degree b - a_j."""
    a = [rng.randint(-1, 2) for _ in range(m)]
    b = max(a) + rng.randint(0, max_twist)
    row = [BinaryForm(F, [F.random_element(rng, 4) for _ in range(b - aj + 1)]) for aj in a]
    return GradedMap(F, a, (b,), [row])


def test_splitting_type_basics():
    E = SplittingType([0, 2, -1])
    assert E.degrees == (2, 0, -1)
    assert E.rank == 3 and E.c1 == 1
    assert E.h0(0) == 4 and E.h1(0) == 0 and E.h1(-1) == 1
    assert E.dual().degrees == (1, 0, -2)
    assert str(SplittingType([0, 0, -1])) == "O(0)^2 + O(-1)"
    assert SplittingType.from_json(E.to_json()) == E


def test_koszul_kernel():
    F = Q
    phi = GradedMap(F, (1, 1), (2,), [[s_(F), t_(F)]])
    K = syzygy_kernel(phi)
    assert K.generator_twists == (0,)
    (gen,) = K.generators
    assert phi.apply(gen) == (BinaryForm.zero(F),)
    assert {gen[0], gen[1]} in ({t_(F), -s_(F)}, {-t_(F), s_(F)})


def test_koszul_kernel_in_degree_zero():
    F = FieldSpec(5)
    phi = GradedMap(F, (0, 0), (1,), [[s_(F), t_(F)]])
    assert syzygy_kernel(phi).generator_twists == (-1,)


def test_higher_koszul():
    # (s^2, t^2): kernel of O^2 -> O(2) is O(-2)
    F = Q
    phi = GradedMap(F, (0, 0), (2,), [[s_(F) * s_(F), t_(F) * t_(F)]])
    assert splitting_type(syzygy_kernel(phi)).degrees == (-2,)
    # (s^2, st, t^2): kernel of O^3 -> O(2) is O(-1)^2
    phi = GradedMap(F, (0, 0, 0), (2,), [[s_(F) * s_(F), s_(F) * t_(F), t_(F) * t_(F)]])
    assert splitting_type(syzygy_kernel(phi)).degrees == (-1, -1)


def test_not_surjective():
    F = Q
    phi = GradedMap(F, (0, 0), (1,), [[s_(F), s_(F)]])
    with pytest.raises(NotSurjective):
        syzygy_kernel(phi)


def test_rejects_wrong_degree():
    with pytest.raises(ValueError):
        GradedMap(Q, (0, 0), (2,), [[s_(Q), t_(Q)]])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([0, 5, 101]), st.integers(2, 4))
def test_syzygy_matches_oracle(seed, p, m):
    F = FieldSpec(p)
    phi = random_map(F, random.Random(seed), m)
    try:
        K = syzygy_kernel(phi)
    except NotSurjective:
        return
    split = splitting_type(K)
    assert split == oracle_splitting(phi)
    assert split.c1 == sum(phi.domain_twists) - phi.codomain_twists[0]
    for gen in K.generators:
        assert all(x.is_zero() for x in phi.apply(gen))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([5, 101]))
def test_splitting_invariant_under_reparametrization(seed, p):
    F = FieldSpec(p)
    rng = random.Random(seed)
    phi = random_map(F, rng, 3)
    try:
        base = splitting_type(syzygy_kernel(phi))
    except NotSurjective:
        return
    while True:
        a, b, c, d = (F.random_element(rng) for _ in range(4))
        if F.sub(F.mul(a, d), F.mul(b, c)) != 0:
            break
    assert splitting_type(syzygy_kernel(phi.substitute(a, b, c, d))) == base


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_h0_is_monotone(seed):
    F = FieldSpec(101)
    phi = random_map(F, random.Random(seed), 3)
    values = [h0_twist(phi, k) for k in range(-3, 5)]
    assert values == sorted(values)


def test_splitting_from_h0_recovers_known_bundle():
    E = SplittingType([2, 0, 0, -3])
    assert splitting_from_h0(E.h0, 4, -3, 5) == E
    with pytest.raises(ValueError):
        splitting_from_h0(E.h0, 4, -1, 5)


def test_cap_exceeded_is_reported():
    F = Q
    phi = GradedMap(F, (0, 0), (1,), [[s_(F), t_(F)]])
    with pytest.raises(CapExceeded):
        syzygy_kernel(phi, saturated=True, rank=2)


def test_quotient_by_nowhere_vanishing_section():
    F = Q
    M = FreeGradedModule.split(F, (0, 0))
    one, zero = BinaryForm.constant(F, 1), BinaryForm.zero(F)
    assert quotient_splitting(M, (one, zero)).degrees == (0,)
    M = FreeGradedModule.split(F, (1, 1))
    assert quotient_splitting(M, (s_(F), t_(F))).degrees == (2,)
    with pytest.raises(SectionVanishes):
        quotient_splitting(M, (s_(F), s_(F)))


def test_modification_examples():
    F = Q
    M = FreeGradedModule.split(F, (0, -1))
    p = ProjectivePoint(F, [0, 1])
    along_negative = elementary_modification_splitting(M, [ModificationDatum(p, (0, 1))])
    along_trivial = elementary_modification_splitting(M, [ModificationDatum(p, (1, 0))])
    assert along_negative.degrees == (0, 0)
    assert along_trivial.degrees == (1, -1)


def test_modification_at_several_points():
    F = FieldSpec(7)
    M = FreeGradedModule.split(F, (0, 0))
    pts = [ProjectivePoint(F, [1, x]) for x in range(3)]
    data = [ModificationDatum(p, (1, x)) for x, p in enumerate(pts)]
    E = elementary_modification_splitting(M, data)
    assert E.c1 == 3 and E.rank == 2
    same = elementary_modification_splitting(M, [ModificationDatum(p, (1, 0)) for p in pts])
    assert same.degrees == (3, 0)


def test_modification_errors():
    F = Q
    M = FreeGradedModule.split(F, (0, 0))
    p = ProjectivePoint(F, [1, 0])
    with pytest.raises(ZeroDirection):
        ModificationDatum(p, (0, 0))
    with pytest.raises(DuplicatePoint):
        elementary_modification_splitting(M, [ModificationDatum(p, (1, 0)), ModificationDatum(p, (0, 1))])


def test_module_json_round_trip():
    F = FieldSpec(5)
    phi = GradedMap(F, (1, 1, 0), (2,), [[s_(F), t_(F), s_(F) * t_(F)]])
    K = syzygy_kernel(phi)
    assert FreeGradedModule.from_json(F, K.to_json()) == K
    assert GradedMap.from_json(F, phi.to_json()) == phi
