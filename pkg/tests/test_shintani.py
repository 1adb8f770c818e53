"""Gamma-matrix coefficient sums and their closed-form products."""

from fractions import Fraction

import pytest

from locquad.shintani import (
    c_closed_form,
    c_prime_closed_form,
    c_prime_vector,
    c_vector,
    check_sign_vectors,
    expected_sign,
    expected_sign_prime,
    gamma_matrix,
)

GENERIC_S = [Fraction(1, 3), Fraction(-7, 5), 0.37 + 0.24j, -2.6]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 7])
def test_direct_sum_equals_closed_form(n):
    for s in GENERIC_S:
        c = c_vector(n, s)
        cp = c_prime_vector(n, s)
        assert len(c) == n + 1
        for j in range(n + 1):
            assert abs(c[j] - c_closed_form(n, j, s)) < 1e-10
            assert abs(cp[j] - c_prime_closed_form(n, j, s)) < 1e-10


def test_gamma_matrix_shape_and_finiteness():
    m = gamma_matrix(3, 0.25)
    assert m.shape == (4, 4)
    assert all(abs(m[i, j]) < 1e6 for i in range(4) for j in range(4))


# hand-expanded (-1)^(j(n-j)/2) and (-1)^(j(n-j)/2 + j)
SIGN_TABLE = {
    1: ([1, 1], [1, -1]),
    3: ([1, -1, -1, 1], [1, 1, -1, -1]),
    5: ([1, 1, -1, -1, 1, 1], [1, -1, -1, 1, 1, -1]),
    7: ([1, -1, -1, 1, 1, -1, -1, 1], [1, 1, -1, -1, 1, 1, -1, -1]),
}


@pytest.mark.parametrize("n", sorted(SIGN_TABLE))
def test_expected_sign_patterns(n):
    plain, primed = SIGN_TABLE[n]
    assert [expected_sign(n, j) for j in range(n + 1)] == plain
    assert [expected_sign_prime(n, j) for j in range(n + 1)] == primed


@pytest.mark.parametrize("n", [1, 3, 5, 7])
@pytest.mark.parametrize("s", [Fraction(1, 3), Fraction(-2, 7)])
def test_sign_vectors(n, s):
    rep = check_sign_vectors(n, s)
    assert rep.ok
    assert rep.max_error < 1e-10
    assert list(rep.expected) == SIGN_TABLE[n][0]
    assert list(rep.expected_prime) == SIGN_TABLE[n][1]


def test_sign_vectors_reject_pole():
    # c_0(0) = 0 for n = 1, so the normalized ratios blow up there
    with pytest.raises(ArithmeticError):
        check_sign_vectors(1, 0.0)


def test_closed_form_at_complex_s_nonzero():
    s = 0.11 - 0.83j
    for n in (1, 3):
        for j in range(n + 1):
            assert abs(c_closed_form(n, j, s)) > 0
