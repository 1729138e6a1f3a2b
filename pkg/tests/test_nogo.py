"""The tensor-product obstruction sweep and its per-column anatomy.

The defect rows are produced mechanically by the tensor module acting on
free generic generators; the closed-form phase rows in the package exist
only as an independent cross-check and are exercised as such here.
"""

from __future__ import annotations

import itertools
import random

import pytest

from qdga.cyclotomic import CycNum, RootExponent, primitive_exponents
from qdga.nogo import (
    BASIS_LABELS,
    GradeProfile,
    NogoError,
    column_survivors,
    homomorphism_forces_equal,
    leibniz_defect,
    leibniz_ways,
    leibniz_ways_direct,
    solve_nogo,
    table_row_d_then_multiply,
    table_row_multiply_then_d,
)

J = RootExponent(3, 1)
JBAR = RootExponent(3, 2)
MINUS_ONE = RootExponent(2, 1)


def _triples(n):
    for kq in range(n):
        for kp in primitive_exponents(n):
            for ks in range(n):
                yield RootExponent(n, kq), RootExponent(n, kp), RootExponent(n, ks)


# -- single defect evaluations ----------------------------------------------------


def test_classical_sign_triple_has_zero_defect_everywhere():
    for prof in itertools.product(range(2), repeat=4):
        d = leibniz_defect(MINUS_ONE, MINUS_ONE, MINUS_ONE, GradeProfile(*prof))
        assert d.is_zero(), prof


def test_first_violation_for_the_naive_cube_root_triple():
    # q = p = s = j dies first at profile (0,0,1,0) in column 2, where the
    # defect is 1 - (pq)^|b1| = 1 - j^2
    d = leibniz_defect(J, J, J, GradeProfile(0, 0, 1, 0))
    assert d.first_violating_column() == 2
    expected = CycNum.one(3) - CycNum.root_power(3, 2)
    assert d.components[1] == expected


def test_column_one_always_agrees():
    rng = random.Random(19)
    for n in (2, 3, 4):
        for q, p, s in _triples(n):
            for _ in range(4):
                prof = GradeProfile(*(rng.randrange(n) for _ in range(4)))
                d = leibniz_defect(q, p, s, prof)
                assert d.components[0].is_zero(), (n, q.k, p.k, s.k, prof)


def test_zero_profile_never_violates():
    for n in (2, 3, 4, 5):
        for q, p, s in _triples(n):
            assert leibniz_defect(q, p, s, GradeProfile(0, 0, 0, 0)).is_zero()


def test_nonprimitive_p_is_rejected():
    with pytest.raises(NogoError):
        leibniz_defect(J, RootExponent(3, 0), J, GradeProfile(0, 0, 0, 0))


def test_mixed_moduli_are_rejected():
    with pytest.raises(NogoError):
        leibniz_defect(J, MINUS_ONE, J, GradeProfile(0, 0, 0, 0))


def test_negative_grades_are_rejected():
    with pytest.raises(NogoError):
        GradeProfile(0, -1, 0, 0)


# -- mechanical expansion vs closed forms -----------------------------------------


def test_fast_rows_equal_the_direct_reference():
    rng = random.Random(23)
    for n in (2, 3, 4, 5):
        profs = list(itertools.product(range(n), repeat=4))
        for q, p, s in _triples(n):
            for prof in rng.sample(profs, 3):
                gp = GradeProfile(*prof)
                assert leibniz_ways(q, p, s, gp) == leibniz_ways_direct(q, p, s, gp)


def test_mechanical_rows_match_the_closed_forms():
    for n in (2, 3):
        for q, p, s in _triples(n):
            for prof in itertools.product(range(n), repeat=4):
                gp = GradeProfile(*prof)
                row1, row2 = leibniz_ways(q, p, s, gp)
                assert row1 == table_row_multiply_then_d(q, p, s, gp), (n, prof)
                assert row2 == table_row_d_then_multiply(q, p, s, gp), (n, prof)


def test_tabulated_column2_variant_agrees_exactly_on_balanced_profiles():
    # the commonly printed variant of the column-2 phase swaps |a2| for |a1|;
    # it disagrees with the derived phase somewhere, coincides whenever
    # |a1| = |a2|, and at the minimal violating profile (0,0,1,0) both read
    # off the same constraint p q = 1
    differs = False
    for q, p, s in _triples(3):
        for prof in itertools.product(range(3), repeat=4):
            gp = GradeProfile(*prof)
            derived = table_row_d_then_multiply(q, p, s, gp)[1]
            printed = table_row_d_then_multiply(q, p, s, gp, tabulated_column2=True)[1]
            if gp.a1 == gp.a2:
                assert derived == printed, (q.k, p.k, s.k, prof)
            elif derived != printed:
                differs = True
    assert differs

    witness = GradeProfile(0, 0, 1, 0)
    for q, p, s in _triples(3):
        route_one = table_row_multiply_then_d(q, p, s, witness)[1]
        pq_is_one = (p.as_cyc() * q.as_cyc()).is_one()
        for variant in (False, True):
            route_two = table_row_d_then_multiply(q, p, s, witness, tabulated_column2=variant)[1]
            assert (route_one == route_two) == pq_is_one, (q.k, p.k, s.k, variant)


# -- the sweep ---------------------------------------------------------------------


def test_modulus_two_admits_exactly_the_sign_triple():
    result = solve_nogo(2)
    assert result.solutions == [(1, 1, 1)]
    assert result.admissible


def test_no_solutions_for_moduli_three_and_four():
    assert solve_nogo(3).solutions == []
    assert solve_nogo(4).solutions == []
    assert not solve_nogo(3).admissible


def test_extended_sweep_does_not_change_the_verdict():
    assert solve_nogo(2, extended_sweep=True).solutions == [(1, 1, 1)]
    assert solve_nogo(3, extended_sweep=True).solutions == []


def test_certificates_cover_every_triple_and_pin_first_violations():
    result = solve_nogo(3)
    count = 3 * len(primitive_exponents(3)) * 3
    assert len(result.certificates) == count
    for cert in result.certificates:
        assert cert.accepted == ((cert.q, cert.p, cert.s) in result.solutions)
        if not cert.accepted:
            gp = GradeProfile(*cert.violating_profile)
            q, p, s = (RootExponent(3, k) for k in (cert.q, cert.p, cert.s))
            defect = leibniz_defect(q, p, s, gp)
            assert defect.first_violating_column() == cert.violating_column
            # lexicographically earlier profiles are all clean
            for prof in itertools.product(range(3), repeat=4):
                if prof >= cert.violating_profile:
                    break
                assert leibniz_defect(q, p, s, GradeProfile(*prof)).is_zero()


def test_naive_triple_certificate_profile():
    result = solve_nogo(3)
    cert = next(c for c in result.certificates if (c.q, c.p, c.s) == (1, 1, 1))
    assert cert.violating_profile == (0, 0, 1, 0)
    assert cert.violating_column == 2


def test_modulus_below_two_is_rejected():
    with pytest.raises(NogoError):
        solve_nogo(1)


# -- per-column constraint chain ----------------------------------------------------


def test_column_two_survivors_satisfy_pq_equals_one():
    for n in (2, 3, 4):
        survivors = column_survivors(n, 2)
        assert survivors, n
        for kq, kp, ks in survivors:
            prod = RootExponent(n, kp).as_cyc() * RootExponent(n, kq).as_cyc()
            assert prod.is_one(), (n, kq, kp, ks)
        # and the constraint is exact: every non-survivor breaks p q = 1
        for q, p, s in _triples(n):
            if (q.k, p.k, s.k) not in survivors:
                assert not (p.as_cyc() * q.as_cyc()).is_one(), (n, q.k, p.k, s.k)


def test_column_three_survivors_satisfy_s_equals_q():
    for n in (2, 3, 4):
        survivors = column_survivors(n, 3)
        assert survivors, n
        for kq, kp, ks in survivors:
            assert RootExponent(n, ks).as_cyc() == RootExponent(n, kq).as_cyc()
        for q, p, s in _triples(n):
            if (q.k, p.k, s.k) not in survivors:
                assert s.as_cyc() != q.as_cyc()


def test_column_four_survivors_satisfy_p_equals_s():
    for n in (2, 3, 4):
        survivors = column_survivors(n, 4)
        assert survivors, n
        for kq, kp, ks in survivors:
            assert RootExponent(n, kp).as_cyc() == RootExponent(n, ks).as_cyc()
        for q, p, s in _triples(n):
            if (q.k, p.k, s.k) not in survivors:
                assert p.as_cyc() != s.as_cyc()


def test_column_one_survivors_are_everything():
    for n in (2, 3):
        assert column_survivors(n, 1) == [t for t in
            ((q.k, p.k, s.k) for q, p, s in _triples(n))]


def test_frozen_survivor_lists_for_the_cube_roots():
    assert column_survivors(3, 2) == [
        (1, 2, 0), (1, 2, 1), (1, 2, 2), (2, 1, 0), (2, 1, 1), (2, 1, 2),
    ]
    assert column_survivors(3, 3) == [
        (0, 1, 0), (0, 2, 0), (1, 1, 1), (1, 2, 1), (2, 1, 2), (2, 2, 2),
    ]
    assert column_survivors(3, 4) == [
        (0, 1, 1), (0, 2, 2), (1, 1, 1), (1, 2, 2), (2, 1, 1), (2, 2, 2),
    ]


def test_chain_intersection_reproduces_the_sweep():
    for n in (2, 3, 4):
        chained = (
            set(column_survivors(n, 2))
            & set(column_survivors(n, 3))
            & set(column_survivors(n, 4))
        )
        assert chained == set(solve_nogo(n).solutions), n


def test_basis_labels_cover_four_columns():
    assert len(BASIS_LABELS) == 4


# -- differential homomorphisms ------------------------------------------------------


def test_homomorphism_check_on_the_conjugate_pair():
    check = homomorphism_forces_equal(3, J, JBAR)
    assert not check.equal
    assert check.witness_grade == 1


def test_homomorphism_witnesses_for_distinct_primitive_pairs():
    for n in (2, 3, 4, 5):
        for kq in primitive_exponents(n):
            for kp in primitive_exponents(n):
                check = homomorphism_forces_equal(n, RootExponent(n, kq), RootExponent(n, kp))
                if kq == kp:
                    assert check.equal and check.witness_grade is None
                else:
                    assert not check.equal
                    assert check.witness_grade is not None
                    assert 1 <= check.witness_grade < n


def test_homomorphism_check_rejects_nonprimitive_roots():
    with pytest.raises(NogoError):
        homomorphism_forces_equal(4, RootExponent(4, 2), RootExponent(4, 1))
