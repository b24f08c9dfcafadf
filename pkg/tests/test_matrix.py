from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from occult_lattice import matrix as mx


def leibniz_det(a):
    n = len(a)
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = (-1) ** inversions
        for i in range(n):
            term *= a[i][perm[i]]
        total += term
    return total


square = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n)
)


@given(square)
@settings(max_examples=80, deadline=None)
def test_determinant_matches_leibniz(a):
    assert mx.determinant(a) == leibniz_det(a)


@given(square)
@settings(max_examples=60, deadline=None)
def test_inverse_when_nonsingular(a):
    if leibniz_det(a) == 0:
        with pytest.raises(ZeroDivisionError):
            mx.inverse(a)
        return
    inv = mx.inverse(a)
    prod = [[sum(Fraction(a[i][k]) * inv[k][j] for k in range(len(a))) for j in range(len(a))] for i in range(len(a))]
    assert prod == [[int(i == j) for j in range(len(a))] for i in range(len(a))]


@given(square)
@settings(max_examples=60, deadline=None)
def test_rank_matches_numpy(a):
    assert mx.rank(a) == np.linalg.matrix_rank(np.array(a, dtype=float))


@given(square)
@settings(max_examples=60, deadline=None)
def test_characteristic_polynomial_matches_numpy(a):
    cp = mx.characteristic_polynomial(a)
    ref = np.round(np.poly(np.array(a, dtype=float))).astype(int)[::-1].tolist()
    assert cp == ref


def test_cyclotomic_polynomials():
    assert mx.cyclotomic(1) == [-1, 1]
    assert mx.cyclotomic(2) == [1, 1]
    assert mx.cyclotomic(3) == [1, 1, 1]
    assert mx.cyclotomic(4) == [1, 0, 1]
    assert mx.cyclotomic(6) == [1, -1, 1]
    assert mx.cyclotomic(5) == [1, 1, 1, 1, 1]
    # x^12 - 1 is the product of Phi_d over d | 12
    p = [1]
    for d in (1, 2, 3, 4, 6, 12):
        p = mx.poly_mul(p, mx.cyclotomic(d))
    assert p == [-1] + [0] * 11 + [1]


def test_totient():
    assert [mx.totient(n) for n in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]


def test_poly_divmod():
    q, r = mx.poly_divmod([-1, 0, 0, 1], [-1, 1])
    assert q == [1, 1, 1] and not any(r)


def test_matpow_and_poly_eval():
    rot = ((0, -1), (1, -1))  # order 3
    assert mx.matpow(rot, 3) == mx.identity(2)
    assert mx.poly_eval_matrix(mx.cyclotomic(3), rot) == mx.zeros(2, 2)


def test_block_and_congruent():
    b = mx.block_diagonal([((1,),), ((0, 1), (1, 0))])
    assert b == ((1, 0, 0), (0, 0, 1), (0, 1, 0))
    assert mx.congruent(((0, 1), (1, 0)), ((1,), (1,))) == ((2,),)
    assert mx.content([4, 6, -10]) == 2
