"""Cyclotomic field arithmetic and q-deformed binomials.

Oracles: sympy's cyclotomic_poly for the minimal polynomials, the q-Pascal
recurrences for the Gaussian binomials, and numeric evaluation at
exp(2*pi*i/N) for the field automorphisms.  Frozen values below were
computed from those oracles first and then inlined.
"""

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import close, to_complex
from qdga.cyclotomic import (
    CycNum,
    CyclotomicError,
    Poly,
    RootExponent,
    cyclotomic_polynomial,
    gaussian_binomial_poly,
    poly_at_root,
    primitive_exponents,
    q_binomial,
    q_factorial_poly,
    q_int_poly,
)


# -- cyclotomic polynomials ---------------------------------------------------


def test_cyclotomic_polynomials_match_sympy():
    sympy = pytest.importorskip("sympy")
    x = sympy.Symbol("x")
    for n in range(1, 25):
        ours = cyclotomic_polynomial(n).coeffs
        theirs = tuple(reversed(sympy.cyclotomic_poly(n, x).as_poly(x).all_coeffs()))
        assert tuple(int(c) for c in theirs) == ours, n


def test_cyclotomic_polynomials_small_cases():
    assert cyclotomic_polynomial(1).coeffs == (-1, 1)
    assert cyclotomic_polynomial(2).coeffs == (1, 1)
    assert cyclotomic_polynomial(3).coeffs == (1, 1, 1)
    assert cyclotomic_polynomial(4).coeffs == (1, 0, 1)
    assert cyclotomic_polynomial(6).coeffs == (1, -1, 1)
    assert cyclotomic_polynomial(12).coeffs == (1, 0, -1, 0, 1)


def test_primitive_roots_are_annihilated():
    for n in range(2, 13):
        phi = cyclotomic_polynomial(n)
        for k in primitive_exponents(n):
            assert poly_at_root(phi, RootExponent(n, k)).is_zero()


def test_nonprimitive_roots_are_not_annihilated():
    # zeta_6^2 is a primitive cube root, not a root of Phi_6
    val = poly_at_root(cyclotomic_polynomial(6), RootExponent(6, 2))
    assert not val.is_zero()


# -- field structure ----------------------------------------------------------


def test_cube_root_relations():
    j = CycNum.root_power(3, 1)
    one = CycNum.one(3)
    assert (one + j + j * j).is_zero()
    assert j * j * j == one
    # the reduction q^2 = -1 - q lands j*j on the right coordinates
    assert (j * j).coeffs == (-1, -1)


def test_conjugation_swaps_the_primitive_cube_roots():
    j = CycNum.root_power(3, 1)
    assert j.conjugate() == j * j
    assert j.conjugate().conjugate() == j
    assert (j * j.conjugate()).is_one()


def test_conjugation_matches_numeric_conjugation():
    for n in (3, 4, 5, 7, 12):
        for k in range(n):
            z = CycNum.root_power(n, k)
            assert close(to_complex(z.conjugate()), to_complex(z).conjugate())


def test_inverse_roundtrip_on_mixed_values():
    for n in (2, 3, 4, 5, 8, 12):
        vals = [
            CycNum.root_power(n, 1) + 2,
            CycNum.root_power(n, 1) - CycNum.rational(n, Fraction(1, 3)),
            CycNum.rational(n, Fraction(-7, 2)),
        ]
        for v in vals:
            assert (v * v.inverse()).is_one()
            assert (v.inverse() * v).is_one()


def test_zero_has_no_inverse():
    with pytest.raises(CyclotomicError):
        CycNum.zero(4).inverse()


def test_mixed_modulus_arithmetic_is_rejected():
    with pytest.raises(CyclotomicError):
        CycNum.one(3) + CycNum.one(4)
    with pytest.raises(CyclotomicError):
        CycNum.one(3) * CycNum.root_power(5, 1)


def test_rational_values_embed_and_compare():
    a = CycNum.rational(6, Fraction(3, 2))
    assert a.as_rational() == Fraction(3, 2)
    assert (a + a).as_rational() == 3
    assert CycNum.root_power(6, 1).as_rational() is None


_small_fractions = st.fractions(
    min_value=-4, max_value=4, max_denominator=6
)


def _cyc_strategy(n: int):
    d = len(CycNum.zero(n).coeffs)
    return st.tuples(*[_small_fractions] * d).map(lambda t: CycNum(n, t))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 4, 5, 12]).flatmap(
    lambda n: st.tuples(_cyc_strategy(n), _cyc_strategy(n), _cyc_strategy(n))
))
def test_field_laws(triple):
    a, b, c = triple
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()
    if not b.is_zero():
        assert ((a / b) * b) == a


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 4, 5]).flatmap(
    lambda n: st.tuples(_cyc_strategy(n), _cyc_strategy(n))
))
def test_conjugation_is_a_ring_map(pair):
    a, b = pair
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()


# -- root exponents -----------------------------------------------------------


def test_root_exponent_normalization_and_primitivity():
    r = RootExponent(3, 4)
    assert r.k == 1
    assert RootExponent(3, -1).k == 2
    assert RootExponent(4, 2).is_primitive() is False
    assert RootExponent(4, 3).is_primitive() is True
    assert RootExponent(6, 2).order() == 3


def test_root_exponent_conjugate_inverts_the_root():
    for n in (2, 3, 4, 5, 8):
        for k in range(n):
            r = RootExponent(n, k)
            assert (r.as_cyc() * r.conjugate().as_cyc()).is_one()


def test_cyc_power_accepts_negative_exponents():
    r = RootExponent(5, 2)
    assert r.cyc_power(-1) * r.cyc_power(1) == CycNum.one(5)
    assert r.cyc_power(3) == r.as_cyc() ** 3


def test_primitive_exponents_agree_with_gcd_filter():
    for n in range(1, 13):
        assert primitive_exponents(n) == [k for k in range(n) if math.gcd(k, n) == 1]


# -- q-deformed combinatorics -------------------------------------------------


def _pascal_poly(n: int, k: int) -> Poly:
    """Independent q-Pascal oracle: [n k] = [n-1 k-1] + q^k [n-1 k]."""
    if k < 0 or k > n:
        return Poly.of()
    if k == 0 or k == n:
        return Poly.of(1)
    return _pascal_poly(n - 1, k - 1) + Poly.monomial(k) * _pascal_poly(n - 1, k)


def _pascal_poly_other(n: int, k: int) -> Poly:
    """The mirrored recurrence [n k] = q^(n-k) [n-1 k-1] + [n-1 k]."""
    if k < 0 or k > n:
        return Poly.of()
    if k == 0 or k == n:
        return Poly.of(1)
    return Poly.monomial(n - k) * _pascal_poly_other(n - 1, k - 1) + _pascal_poly_other(n - 1, k)


def test_gaussian_binomials_satisfy_both_pascal_recurrences():
    for n in range(11):
        for k in range(n + 1):
            ours = gaussian_binomial_poly(n, k)
            assert ours == _pascal_poly(n, k), (n, k)
            assert ours == _pascal_poly_other(n, k), (n, k)


def test_gaussian_binomial_known_polynomials():
    assert gaussian_binomial_poly(4, 2).coeffs == (1, 1, 2, 1, 1)
    assert gaussian_binomial_poly(3, 1).coeffs == (1, 1, 1)
    assert gaussian_binomial_poly(5, 0).coeffs == (1,)
    assert q_int_poly(4).coeffs == (1, 1, 1, 1)
    assert q_factorial_poly(3).coeffs == (1, 2, 2, 1)


def test_gaussian_binomials_are_symmetric():
    for n in range(9):
        for k in range(n + 1):
            assert gaussian_binomial_poly(n, k) == gaussian_binomial_poly(n, n - k)


def test_gaussian_binomials_specialize_to_binomials_at_one():
    for n in range(9):
        for k in range(n + 1):
            assert gaussian_binomial_poly(n, k).evaluate(1) == math.comb(n, k)


def test_q_binomial_vanishes_at_primitive_roots():
    # the q-deformed binomial [N n] dies for 0 < n < N at any primitive root
    for n in range(2, 13):
        for k in primitive_exponents(n):
            root = RootExponent(n, k)
            for mid in range(1, n):
                assert q_binomial(n, mid, root).is_zero(), (n, k, mid)
            assert q_binomial(n, 0, root).is_one()
            assert q_binomial(n, n, root).is_one()


def test_q_binomial_survives_at_nonprimitive_roots():
    # [4 2] at the non-primitive root zeta_4^2 = -1 equals 2, not 0
    val = q_binomial(4, 2, RootExponent(4, 2))
    assert val.as_rational() == 2


def test_binomial_arguments_are_validated():
    with pytest.raises(CyclotomicError):
        gaussian_binomial_poly(-1, 0)
    with pytest.raises(CyclotomicError):
        gaussian_binomial_poly(3, 5)
