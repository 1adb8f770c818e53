"""Weil constants and the functional equation on ball indicators.

The stabilized Gauss sum is the ground truth here; tests check the
structure it must satisfy (root of unity, Witt homomorphism, the
equation itself) rather than literature case tables.
"""

import cmath
import random
from fractions import Fraction

import pytest

from locquad.forms import QuadraticForm
from locquad.places import REAL, AdditiveCharacter, Qp, square_class_reps
from locquad.weil import (
    BallIndicator,
    gamma_form,
    gamma_matches_epsilon,
    verify_weil_equation,
)


def test_real_rank1_closed_form():
    psi = AdditiveCharacter(REAL)
    plus = gamma_form(QuadraticForm.make([Fraction(3)], REAL), psi)
    minus = gamma_form(QuadraticForm.make([Fraction(-1, 2)], REAL), psi)
    assert abs(plus.value - cmath.exp(1j * cmath.pi / 4)) < 1e-12
    assert abs(minus.value - cmath.exp(-1j * cmath.pi / 4)) < 1e-12
    assert plus.eighth_root_index == 1
    assert minus.eighth_root_index == 7


def test_real_rank4_is_minus_one():
    psi = AdditiveCharacter(REAL)
    g = gamma_form(QuadraticForm.make([1, 1, 1, 1], REAL), psi)
    assert abs(g.value + 1) < 1e-12


def test_unit_rank1_gamma_is_one_at_q5():
    g = gamma_form(QuadraticForm.make([1], Qp(5)), AdditiveCharacter(Qp(5)))
    assert abs(g.value - 1) < 1e-10
    assert g.eighth_root_index == 0


def test_gamma_conjugates_under_psi_sign():
    for place in (Qp(3), Qp(2), REAL):
        q = QuadraticForm.make([2, place.p or -1], place)
        g = gamma_form(q, AdditiveCharacter(place, 1)).value
        h = gamma_form(q, AdditiveCharacter(place, -1)).value
        assert abs(g - h.conjugate()) < 1e-9


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_eighth_root_and_square_class_invariance(p):
    place = Qp(p)
    psi = AdditiveCharacter(place)
    for a in square_class_reps(place):
        g = gamma_form(QuadraticForm.make([a], place), psi)
        assert g.root_deviation < 1e-8
        scaled = gamma_form(QuadraticForm.make([a * 9], place), psi)
        assert abs(g.value - scaled.value) < 1e-9


def test_witt_homomorphism_seeded():
    rng = random.Random(31)
    for place in (REAL, Qp(2), Qp(3), Qp(5)):
        psi = AdditiveCharacter(place)
        reps = square_class_reps(place)
        for _ in range(6):
            q = QuadraticForm.make([rng.choice(reps) for _ in range(rng.randint(1, 3))], place)
            r = QuadraticForm.make([rng.choice(reps) for _ in range(rng.randint(1, 3))], place)
            lhs = gamma_form(q.direct_sum(r), psi).value
            rhs = gamma_form(q, psi).value * gamma_form(r, psi).value
            assert abs(lhs - rhs) < 1e-9
            assert abs(gamma_form(q.direct_sum(q.neg()), psi).value - 1) < 1e-9


def test_hyperbolic_padding_fixes_gamma():
    place = Qp(3)
    psi = AdditiveCharacter(place)
    q = QuadraticForm.make([2, 3], place)
    padded = q.direct_sum(QuadraticForm.make([5, -5], place))
    assert abs(gamma_form(q, psi).value - gamma_form(padded, psi).value) < 1e-9


def test_weil_equation_rank1():
    place = Qp(3)
    psi = AdditiveCharacter(place)
    q = QuadraticForm.make([Fraction(2)], place)
    ball = BallIndicator.make([Fraction(1, 3)], -1)
    rep = verify_weil_equation(q, ball, psi)
    assert rep.residual < 1e-12


def test_weil_equation_rank2_all_levels():
    place = Qp(5)
    psi = AdditiveCharacter(place)
    q = QuadraticForm.make([1, Fraction(2, 5)], place)
    for level in (-1, 0, 1, 2):
        ball = BallIndicator.make([Fraction(0), Fraction(1, 5)], level)
        rep = verify_weil_equation(q, ball, psi)
        assert rep.residual < 1e-11, level


def test_weil_equation_gamma_agrees_with_gamma_form():
    place = Qp(7)
    psi = AdditiveCharacter(place)
    q = QuadraticForm.make([7, 2], place)
    rep = verify_weil_equation(q, BallIndicator.make([0, 0], 1), psi)
    assert abs(rep.gamma.value - gamma_form(q, psi).value) < 1e-9


def test_weil_equation_preconditions():
    place = Qp(3)
    psi = AdditiveCharacter(place)
    q = QuadraticForm.make([1, 2], place)
    with pytest.raises(ValueError):
        verify_weil_equation(q, BallIndicator.make([0], 0), psi)
    with pytest.raises(ValueError):
        verify_weil_equation(
            QuadraticForm.make([1], REAL),
            BallIndicator.make([0], 0),
            AdditiveCharacter(REAL),
        )


def test_gamma_epsilon_on_equal_pair():
    place = Qp(5)
    psi = AdditiveCharacter(place)
    q = QuadraticForm.make([2, 5, 1], place)
    rep = gamma_matches_epsilon(q, q, psi)
    assert rep.ok
    assert rep.epsilon == 1
    assert abs(rep.gamma_ratio - 1) < 1e-9


def test_gamma_epsilon_requires_level_two():
    place = Qp(5)
    psi = AdditiveCharacter(place)
    q = QuadraticForm.make([1], place)
    r = QuadraticForm.make([1, 1], place)  # rank parity differs: level 0
    with pytest.raises(ValueError):
        gamma_matches_epsilon(q, r, psi)
    # equal rank but different determinant class: level 1
    with pytest.raises(ValueError):
        gamma_matches_epsilon(q, QuadraticForm.make([2], place), psi)


def test_gamma_epsilon_seeded_pairs():
    rng = random.Random(5)
    place = Qp(3)
    psi = AdditiveCharacter(place)
    reps = square_class_reps(place)
    found = 0
    while found < 10:
        q = QuadraticForm.make([rng.choice(reps) for _ in range(2)], place)
        r = QuadraticForm.make([rng.choice(reps) for _ in range(2)], place)
        from locquad.forms import witt_filtration_level

        if witt_filtration_level(q, r)[0] < 2:
            continue
        assert gamma_matches_epsilon(q, r, psi).ok
        found += 1
