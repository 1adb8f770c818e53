"""Stabilizer forms, the pairing-sign law and congruence orbits."""

import random
from fractions import Fraction

import pytest

from locquad.forms import QuadraticForm, SymMatrix
from locquad.places import REAL, Qp, hilbert_symbol, square_class_reps
from locquad.symsign import (
    c_constant,
    c_constant_value,
    epsilon_pair,
    epsilon_scaling_check,
    g_value,
    orbit_invariant,
    scaling_invariant,
    sl_orbit_count,
    stabilizer_form,
    verify_signprop,
)


def test_stabilizer_form_coefficients():
    q = stabilizer_form([1, 2, 5], Qp(5))
    # entries -a_j/a_i for i < j, lexicographic
    assert q.coeffs == (
        Fraction(-2, 1),
        Fraction(-5, 1),
        Fraction(-5, 2),
    )


def test_stabilizer_form_rank():
    q = stabilizer_form([1, 1, 1, 1, 1], Qp(3))
    assert q.rank == 10  # n(n-1)/2


def test_epsilon_pair_by_hand():
    # diag(1,2,5) against diag(1,1,10) over Q_5
    place = Qp(5)
    lhs = epsilon_pair([1, 2, 5], [1, 1, 10], place)
    qa = stabilizer_form([1, 2, 5], place)
    qb = stabilizer_form([1, 1, 10], place)
    assert lhs == qa.hasse() * qb.hasse()


def test_signprop_exhaustive_small():
    # the law itself at n = 3, one odd place; the full grid is acceptance.
    # pairs must share rank and det class, so bucket by class first
    place = Qp(5)
    reps = square_class_reps(place)
    mats = [[a, b, c] for a in reps for b in reps for c in reps]
    buckets = {}
    for A in mats:
        d = str(QuadraticForm.make(A, place).det_class())
        buckets.setdefault(d, []).append(A)
    for group in buckets.values():
        for A in group[::5]:
            for B in group[::3]:
                rep = verify_signprop(A, B, place)
                assert rep.ok
                assert rep.lhs == rep.rhs


def test_signprop_real():
    rep = verify_signprop([1, -1, 1], [-1, 1, 1], REAL)
    assert rep.ok


def test_epsilon_pair_needs_matching_det_class():
    with pytest.raises(ValueError):
        epsilon_pair([1, 1, 1], [1, 1, 2], Qp(5))
    with pytest.raises(ValueError):
        epsilon_pair([1, 1, 1], [1, 1], Qp(5))


def test_g_value_depends_on_det_class_only():
    place = Qp(7)
    reps = square_class_reps(place)
    rng = random.Random(3)
    for _ in range(25):
        a = [rng.choice(reps) for _ in range(3)]
        b = [rng.choice(reps) for _ in range(3)]
        qa = QuadraticForm.make(a, place)
        qb = QuadraticForm.make(b, place)
        if qa.det_class() == qb.det_class():
            assert g_value(a, place) == g_value(b, place)


def test_c_constant_and_value():
    place = Qp(5)
    rep = c_constant(3, place)
    assert rep.consistent
    assert rep.classes_checked == 4
    assert set(rep.values.values()) <= {1, -1}
    for d in square_class_reps(place):
        assert c_constant_value(3, d, place) == rep.values[str(d)]


def test_orbit_invariant_contents():
    inv = orbit_invariant([2, 3, 6], Qp(3))
    assert inv["n"] == 3
    assert inv["det_class"] == "1"  # 36 is a square
    assert inv["hasse"] in (1, -1)
    real_inv = orbit_invariant([2, -3, 6], REAL)
    assert real_inv["signature"] == [2, 1]


@pytest.mark.parametrize("p", [3, 7])
@pytest.mark.parametrize("n", [3, 5])
def test_two_orbits(p, n):
    place = Qp(p)
    for d in square_class_reps(place):
        assert sl_orbit_count(n, d, place) == 2


def test_one_orbit_at_rank_one():
    # rank 1 fixes the form up to squares, so a det class holds one orbit
    for d in square_class_reps(Qp(7)):
        assert sl_orbit_count(1, d, Qp(7)) == 1


def test_orbit_count_rejects_nonpositive_rank():
    with pytest.raises(ValueError):
        sl_orbit_count(0, 1, Qp(3))


def test_scaling_law_by_hand():
    # n = 3: hasse(q_{tA}) = (t,-1)^3 hasse(q_A)
    place = Qp(3)
    A = [1, 2, 3]
    t = Fraction(3)
    rep = epsilon_scaling_check(A, t, place)
    assert rep.ok
    expected = hilbert_symbol(t, -1, place) ** 3 * QuadraticForm.make(A, place).hasse()
    assert rep.lhs == expected


def test_scaling_invariant_stable():
    place = Qp(7)
    A = [2, 7, 5]
    base = scaling_invariant(A, place)
    for t in (Fraction(7), Fraction(-1), Fraction(10, 3)):
        scaled = [t * a for a in A]
        assert scaling_invariant(scaled, place) == base


def test_scaling_invariant_congruence_stable():
    place = Qp(5)
    A = SymMatrix.make([[1, 1, 0], [1, 3, 1], [0, 1, 2]])
    g = [[1, 0, 0], [2, 1, 0], [0, -1, 1]]
    assert scaling_invariant(A, place) == scaling_invariant(A.congruent_by(g), place)


def test_scaling_needs_odd_rank():
    with pytest.raises(ValueError):
        epsilon_scaling_check([1, 2], Fraction(3), Qp(3))
    with pytest.raises(ValueError):
        scaling_invariant([1, 2], Qp(3))
