"""Exact linear algebra over QQ and prime fields.

Everything here is small and exact, so most checks are direct identities;
hypothesis drives the solver/kernel round trips where random matrices are
actually informative.
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from p2stab import linalg
from p2stab.errors import InputError
from p2stab.linalg import (
    QQ,
    PrimeField,
    clear_denominators,
    field_from_json,
    galois_number,
    gaussian_binomial,
    identity,
    intersect_row_spaces,
    iter_subspaces,
    mat_inverse,
    mat_mul,
    mat_vec,
    primitive_vector,
    rank,
    right_kernel,
    row_hnf_2xn,
    row_space,
    rref,
    saturated_kernel_basis_3,
    solve_right,
    sum_row_spaces,
    transpose,
)

F2 = PrimeField(2)
F5 = PrimeField(5)

entries = st.integers(min_value=-6, max_value=6)


def qq_matrix(nrows, ncols):
    return st.lists(
        st.lists(entries.map(Fraction), min_size=ncols, max_size=ncols),
        min_size=nrows,
        max_size=nrows,
    )


def test_prime_field_arithmetic():
    assert F5.add(3, 4) == 2
    assert F5.mul(3, 4) == 2
    assert F5.inv(3) == 2  # 3*2 = 6 = 1 mod 5
    assert F5.neg(1) == 4
    assert F5.convert(Fraction(1, 3)) == 2
    with pytest.raises(ZeroDivisionError):
        F5.convert(Fraction(1, 5))  # denominator divisible by p


def test_prime_field_requires_prime():
    with pytest.raises(InputError):
        PrimeField(6)


def test_field_json_round_trip():
    assert field_from_json(QQ.to_json()) == QQ
    assert field_from_json(F5.to_json()) == F5
    with pytest.raises(InputError):
        field_from_json({"kind": "octonion"})


def test_rref_drops_zero_rows_and_reports_pivots():
    A = [[Fraction(2), Fraction(4)], [Fraction(1), Fraction(2)]]
    R, piv = rref(QQ, A)
    assert R == [[Fraction(1), Fraction(2)]]
    assert piv == [0]


def test_rref_is_idempotent_small():
    A = [
        [Fraction(0), Fraction(1), Fraction(3)],
        [Fraction(1), Fraction(0), Fraction(-1)],
        [Fraction(1), Fraction(1), Fraction(2)],
    ]
    R, piv = rref(QQ, A)
    R2, piv2 = rref(QQ, R)
    assert (R, piv) == (R2, piv2)


@settings(max_examples=60, deadline=None)
@given(qq_matrix(3, 4))
def test_right_kernel_annihilates(A):
    K = right_kernel(QQ, A, ncols=4)
    for v in K:
        assert all(x == 0 for x in mat_vec(QQ, A, v))
    # rank-nullity on the 4 columns
    assert rank(QQ, A) + len(K) == 4


@settings(max_examples=60, deadline=None)
@given(qq_matrix(3, 3), st.lists(entries.map(Fraction), min_size=3, max_size=3))
def test_solve_right_round_trip(A, x):
    b = mat_vec(QQ, A, x)
    sol = solve_right(QQ, A, b)
    assert sol is not None
    assert mat_vec(QQ, A, sol) == b


def test_solve_right_reports_inconsistency():
    A = [[Fraction(1), Fraction(0)], [Fraction(1), Fraction(0)]]
    assert solve_right(QQ, A, [Fraction(1), Fraction(2)]) is None


@settings(max_examples=40, deadline=None)
@given(qq_matrix(3, 3))
def test_mat_inverse_when_regular(A):
    inv = mat_inverse(QQ, A)
    if inv is None:
        assert rank(QQ, A) < 3
    else:
        assert mat_mul(QQ, A, inv) == identity(QQ, 3)
        assert mat_mul(QQ, inv, A) == identity(QQ, 3)


def test_mat_mul_zero_row_matrix_is_tolerated():
    # a 0-row matrix carries no width, so the product is the empty matrix
    assert mat_mul(QQ, [], [[Fraction(1)], [Fraction(2)]]) == []
    assert mat_vec(QQ, [], [Fraction(1), Fraction(2)]) == []


def test_mat_mul_rejects_genuine_mismatch():
    with pytest.raises(InputError):
        mat_mul(QQ, [[Fraction(1)]], [[Fraction(1), Fraction(2)], [Fraction(3), Fraction(4)]])


def test_transpose_empty_needs_hint():
    assert transpose([], ncols=3) == [[], [], []]
    assert transpose([[Fraction(1), Fraction(2)]]) == [[Fraction(1)], [Fraction(2)]]


@settings(max_examples=40, deadline=None)
@given(qq_matrix(2, 4), qq_matrix(2, 4))
def test_intersection_inside_both_summands(A, B):
    inter = intersect_row_spaces(QQ, A, B, 4)
    RA, pA = row_space(QQ, A, 4)
    RB, pB = row_space(QQ, B, 4)
    for v in inter:
        assert linalg.in_row_space(QQ, RA, pA, v)
        assert linalg.in_row_space(QQ, RB, pB, v)
    total = sum_row_spaces(QQ, A, B, 4)
    # dim(A) + dim(B) = dim(A+B) + dim(A cap B)
    assert len(RA) + len(RB) == len(total) + len(inter)


def test_clear_denominators_primitive():
    A = [[Fraction(1, 2), Fraction(3, 4)], [Fraction(0), Fraction(5, 2)]]
    ints = clear_denominators(A)
    assert ints == [[2, 3], [0, 10]]
    assert primitive_vector([Fraction(4, 6), Fraction(-2, 3)]) == [1, -1]


def test_saturated_kernel_basis_golden():
    # perpendicular lattice of (1, 2, 1), used for the weight plane
    basis = saturated_kernel_basis_3([1, 2, 1])
    assert len(basis) == 2
    for v in basis:
        assert v[0] * 1 + v[1] * 2 + v[2] * 1 == 0
    # saturation: the 2x2 minors of the basis matrix are coprime
    from math import gcd

    m = basis
    minors = [
        m[0][0] * m[1][1] - m[0][1] * m[1][0],
        m[0][0] * m[1][2] - m[0][2] * m[1][0],
        m[0][1] * m[1][2] - m[0][2] * m[1][1],
    ]
    assert gcd(gcd(abs(minors[0]), abs(minors[1])), abs(minors[2])) == 1


def test_saturated_kernel_of_zero_vector():
    with pytest.raises(InputError):
        saturated_kernel_basis_3([0, 0, 0])


def test_row_hnf_is_canonical_up_to_row_ops():
    a = row_hnf_2xn([[2, 0, -2], [0, 3, 3]])
    b = row_hnf_2xn([[2, 3, 1], [0, 3, 3]])  # row0 + row1, row1
    assert a == b  # same lattice, same normal form


def test_gaussian_binomials_and_galois_numbers():
    assert gaussian_binomial(2, 1, 2) == 3
    assert gaussian_binomial(4, 2, 3) == 130
    # number of subspaces of F_q^n, frozen small values
    assert galois_number(2, 2) == 5
    assert galois_number(3, 2) == 16
    assert galois_number(5, 2) == 374
    assert galois_number(6, 3) == 56632


@pytest.mark.parametrize("n,expected", [(0, 1), (1, 2), (2, 5), (3, 16)])
def test_iter_subspaces_counts(n, expected):
    seen = list(iter_subspaces(F2, n))
    assert len(seen) == expected
    # all distinct as row spaces and each in rref with matching pivots
    keys = set()
    for rows, piv in seen:
        R, p = row_space(F2, [list(r) for r in rows], n)
        assert [list(r) for r in rows] == R
        assert tuple(p) == tuple(piv)
        keys.add(tuple(tuple(r) for r in rows))
    assert len(keys) == expected


def test_iter_subspaces_f5_line_count():
    # lines in F_5^2: (25 - 1) / 4 = 6
    lines = [rows for rows, _ in iter_subspaces(F5, 2) if len(rows) == 1]
    assert len(lines) == 6
