import numpy as np
from hypothesis import given, strategies as st

from homcode.snf import invariant_factors, inverse_mod, is_smith_form, matmul, smith_normal_form

small_ints = st.integers(min_value=-6, max_value=6)


@st.composite
def int_matrices(draw, max_dim=5):
    rows = draw(st.integers(0, max_dim))
    cols = draw(st.integers(0, max_dim))
    return [[draw(small_ints) for _ in range(cols)] for _ in range(rows)]


def _det(m):
    return round(np.linalg.det(np.array(m, dtype=float))) if m else 1


@given(int_matrices())
def test_decomposition_reconstructs(m):
    res = smith_normal_form(m)
    rows = len(m)
    cols = len(m[0]) if m else 0
    if rows and cols:
        assert matmul(matmul(res.U, m), res.V) == res.D
    assert is_smith_form(res.D) if rows and cols else True


@given(int_matrices())
def test_transforms_are_unimodular_with_exact_inverses(m):
    res = smith_normal_form(m)
    if res.U:
        assert abs(_det(res.U)) == 1
        n = len(res.U)
        assert matmul(res.U, res.U_inv) == [[int(i == j) for j in range(n)] for i in range(n)]
    if res.V:
        n = len(res.V)
        assert matmul(res.V, res.V_inv) == [[int(i == j) for j in range(n)] for i in range(n)]


@given(int_matrices())
def test_rank_matches_floating_rank(m):
    res = smith_normal_form(m)
    expected = np.linalg.matrix_rank(np.array(m, dtype=float)) if m and m[0] else 0
    assert res.rank == expected


@given(int_matrices(max_dim=4))
def test_product_of_factors_is_gcd_of_maximal_minors(m):
    # the product of the invariant factors equals the gcd of the r x r minors
    import itertools
    import math

    factors = invariant_factors(m)
    r = len(factors)
    if r == 0:
        return
    rows, cols = len(m), len(m[0])
    g = 0
    for ri in itertools.combinations(range(rows), r):
        for ci in itertools.combinations(range(cols), r):
            g = math.gcd(g, _det([[m[i][j] for j in ci] for i in ri]))
    assert math.prod(factors) == g


def test_known_diagonal():
    assert invariant_factors([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == (2, 6, 12)
    assert invariant_factors([[2, 0], [0, 3]]) == (1, 6)


def test_inverse_mod_roundtrip():
    m = [[1, 2], [3, 5]]
    inv = inverse_mod(m, 7)
    prod = np.array(matmul(m, inv)) % 7
    assert (prod == np.eye(2, dtype=int)).all()
