import random

import pytest
from hypothesis import given, settings, strategies as st

from fanoverify.bundles import h0_twist
from fanoverify.errors import CurveNotOnHypersurface, NotImmersion, SingularPoint
from fanoverify.experiments import random_curve, sample_hypersurface_containing
from fanoverify.field import FieldSpec
from fanoverify.forms import BinaryForm, MultiForm, ProjectivePoint
from fanoverify.geometry import (
    Hypersurface,
    RationalCurve,
    alpha_corank,
    contains_curve,
    is_immersion,
    is_typical,
    is_very_free,
    jacobian_map,
    normal_bundle,
    normal_bundle_splitting,
    pullback_tangent_splitting,
    smooth_along_curve,
    tangent_hyperplane,
    tangent_vector,
    transform_hypersurface,
    typical_splitting,
)

Q = FieldSpec(0)


def xs(F, n_vars):
    return [MultiForm.variable(F, n_vars, i) for i in range(n_vars)]


def quadric_surface(F=Q):
    x = xs(F, 4)
    return Hypersurface.from_form(x[0] * x[3] - x[1] * x[2])


def fermat(F, n, d):
    x = xs(F, n + 1)
    G = MultiForm(F, n + 1, d, {})
    for xi in x:
        term = xi
        for _ in range(d - 1):
            term = term * xi
        G = G + term
    return Hypersurface.from_form(G)


def bf(F, *coeffs):
    return BinaryForm(F, list(coeffs))


def random_invertible(F, size, rng):
    from fanoverify.linalg import rank
    while True:
        A = [[F.random_element(rng, 3) for _ in range(size)] for _ in range(size)]
        if rank(F, A) == size:
            return A


def test_ruling_of_quadric_surface():
    X = quadric_surface()
    L = RationalCurve.line_through(Q, [1, 0, 0, 0], [0, 1, 0, 0])
    assert contains_curve(X, L)
    assert pullback_tangent_splitting(X, L).degrees == (2, 0)
    assert normal_bundle_splitting(X, L).degrees == (0,)
    assert normal_bundle_splitting(X, L, method="dual").degrees == (0,)
    assert alpha_corank(X, L) == 0
    assert not is_very_free(X, L)


def test_conic_on_quadric_surface():
    X = quadric_surface()
    C = RationalCurve(Q, (bf(Q, 1, 0, 0), bf(Q, 0, 1, 0), bf(Q, 0, 1, 0), bf(Q, 0, 0, 1)))
    assert pullback_tangent_splitting(X, C).degrees == (2, 2)
    assert normal_bundle_splitting(X, C).degrees == (2,)
    assert is_very_free(X, C)


@pytest.mark.parametrize("p", [0, 5, 7])
def test_line_on_fermat_cubic_surface(p):
    F = FieldSpec(p)
    X = fermat(F, 3, 3)
    L = RationalCurve.line_through(F, [1, F(-1), 0, 0], [0, 0, 1, F(-1)])
    assert contains_curve(X, L) and smooth_along_curve(X, L)
    assert pullback_tangent_splitting(X, L).degrees == (2, -1)
    assert normal_bundle_splitting(X, L).degrees == (-1,)


def test_singular_cone():
    x = xs(Q, 4)
    Y = Hypersurface.from_form(x[1] * x[1] - x[0] * x[2])
    through_vertex = RationalCurve.line_through(Q, [0, 0, 0, 1], [1, 0, 0, 0])
    assert not smooth_along_curve(Y, through_vertex)
    with pytest.raises(SingularPoint):
        pullback_tangent_splitting(Y, through_vertex)
    with pytest.raises(SingularPoint):
        tangent_hyperplane(Y, ProjectivePoint(Q, [0, 0, 0, 1]))


def test_curve_not_on_hypersurface():
    X = quadric_surface()
    L = RationalCurve.line_through(Q, [1, 0, 0, 0], [0, 0, 0, 1])
    assert not contains_curve(X, L)
    with pytest.raises(CurveNotOnHypersurface):
        smooth_along_curve(X, L)


def test_tangent_hyperplane():
    X = quadric_surface()
    T = tangent_hyperplane(X, ProjectivePoint(Q, [1, 0, 0, 0]))
    assert T.dim == 3
    assert T.contains([0, 1, 1, 0]) and not T.contains([0, 0, 0, 1])


def test_cusp_is_not_immersed():
    C = RationalCurve(Q, (bf(Q, 1, 0, 0, 0), bf(Q, 0, 1, 0, 0), bf(Q, 0, 0, 0, 1)))
    assert not is_immersion(C)
    with pytest.raises(NotImmersion):
        tangent_vector(C, (0, 1))
    twisted = RationalCurve(Q, (bf(Q, 1, 0, 0, 0), bf(Q, 0, 1, 0, 0), bf(Q, 0, 0, 1, 0), bf(Q, 0, 0, 0, 1)))
    assert is_immersion(twisted)


def test_typical_splitting_shapes():
    assert typical_splitting(5, 1).degrees == (0, 0, -1)
    assert typical_splitting(5, 3).degrees == (1, 0, 0)
    assert typical_splitting(4, 4).degrees == (1, 1)


def test_curves_of_wrong_degree_are_rejected():
    with pytest.raises(ValueError):
        RationalCurve(Q, (bf(Q, 1, 0), bf(Q, 0, 1, 0)))
    with pytest.raises(ValueError):
        RationalCurve(Q, (bf(Q, 1, 0), bf(Q, 1, 0)))


def random_instance(p, n, e, seed):
    F = FieldSpec(p)
    rng = random.Random(seed)
    f, _ = random_curve(F, n, e, rng)
    return sample_hypersurface_containing(f, n, rng), f


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([5, 101]), st.integers(3, 5), st.integers(1, 3))
def test_conservation_and_routes(seed, p, n, e):
    X, f = random_instance(p, n, e, seed)
    if not smooth_along_curve(X, f) or not is_immersion(f):
        return
    E = pullback_tangent_splitting(X, f)
    assert E.rank == n - 1 and E.c1 == e * (n + 1 - X.d)
    N = normal_bundle(X, f)
    assert N.splitting.rank == n - 2 and N.splitting.c1 == e * (n + 1 - X.d) - 2
    if e == 1:
        assert normal_bundle_splitting(X, f, method="dual") == N.splitting
    rep = is_typical(X, f)
    assert rep.routes_agree
    # sections of f*TX(k) from the kernel K: h0(K(k)) - (k + 1) for k >= -1
    phi = jacobian_map(X, f)
    for k in range(-1, 3):
        assert E.h0(k) == h0_twist(phi, k) - (k + 1)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([5, 101]))
def test_splittings_are_coordinate_free(seed, p):
    X, f = random_instance(p, 4, 2, seed)
    if not smooth_along_curve(X, f) or not is_immersion(f):
        return
    rng = random.Random(seed + 1)
    A = random_invertible(X.field, 5, rng)
    Y, g = transform_hypersurface(X, A), f.transform(A)
    assert contains_curve(Y, g)
    assert pullback_tangent_splitting(Y, g) == pullback_tangent_splitting(X, f)
    assert normal_bundle_splitting(Y, g) == normal_bundle_splitting(X, f)
    F = X.field
    while True:
        a, b, c, d = (F.random_element(rng) for _ in range(4))
        if F.sub(F.mul(a, d), F.mul(b, c)):
            break
    h = f.reparametrize(a, b, c, d)
    assert pullback_tangent_splitting(X, h) == pullback_tangent_splitting(X, f)
    assert is_typical(X, h).typical == is_typical(X, f).typical


def test_json_round_trip():
    X = quadric_surface(FieldSpec(5))
    assert Hypersurface.from_json(X.to_json()) == X
    L = RationalCurve.line_through(FieldSpec(5), [1, 0, 0, 0], [0, 1, 0, 0])
    assert RationalCurve.from_json(FieldSpec(5), L.to_json()) == L
