import random

from hypothesis import given, settings, strategies as st

from fanoverify.field import FieldSpec
from fanoverify.linalg import EchelonBasis, in_span, inverse, mat_mul, mat_vec, nullspace, rank, rref, solve


def random_matrix(F, rows, cols, rng):
    return [[F.random_element(rng, 3) for _ in range(cols)] for _ in range(rows)]


def test_rank_examples():
    F = FieldSpec(0)
    assert rank(F, [[1, 2], [2, 4]]) == 1
    assert rank(FieldSpec(2), [[1, 1], [1, 1], [0, 1]]) == 2


def test_rank_depends_on_characteristic():
    m = [[1, 1], [1, -1]]
    assert rank(FieldSpec(0), m) == 2
    assert rank(FieldSpec(2), [[x % 2 for x in r] for r in m]) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([0, 2, 5, 101]), st.integers(1, 5), st.integers(1, 6))
def test_rank_nullity(seed, p, r, c):
    F = FieldSpec(p)
    m = random_matrix(F, r, c, random.Random(seed))
    basis = nullspace(F, m, c)
    assert rank(F, m, c) + len(basis) == c
    for v in basis:
        assert not any(mat_vec(F, m, v))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([0, 3, 101]))
def test_solve_and_inverse(seed, p):
    F = FieldSpec(p)
    rng = random.Random(seed)
    m = random_matrix(F, 3, 3, rng)
    x = [F.random_element(rng) for _ in range(3)]
    b = mat_vec(F, m, x)
    y = solve(F, m, b, 3)
    assert y is not None and mat_vec(F, m, y) == b
    if rank(F, m) == 3:
        ident = mat_mul(F, m, inverse(F, m))
        assert ident == [[F.one if i == j else F.zero for j in range(3)] for i in range(3)]


def test_inconsistent_system():
    F = FieldSpec(5)
    assert solve(F, [[1, 1], [1, 1]], [0, 1], 2) is None


def test_rref_pivots():
    rows, piv = rref(FieldSpec(0), [[0, 2, 4], [1, 0, 1]])
    assert piv == [0, 1]
    assert rows[1][1] == 1


def test_echelon_basis():
    F = FieldSpec(3)
    eb = EchelonBasis(F, 3)
    assert eb.add([1, 2, 0])
    assert eb.add([0, 1, 1])
    assert not eb.add([1, 0, 1])
    assert eb.contains([2, 1, 0]) and len(eb) == 2
    assert in_span(F, [1, 0, 1], [[1, 2, 0], [0, 1, 1]], 3)
