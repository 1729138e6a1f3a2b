"""Differential structures: nilpotency, graded Leibniz, star conjugation."""

from __future__ import annotations

import random

import pytest

from qdga.algebra import Element, formal_derivative
from qdga.calculi import builtin_calculus, classical_line_calculus, line_calculus
from qdga.cyclotomic import CycNum, RootExponent
from qdga.differential import (
    DifferentialError,
    DifferentialStructure,
    apply_d,
    apply_d_times,
    star,
    verify_iterated_leibniz,
    verify_leibniz,
    verify_nilpotency,
    verify_star_differential,
    verify_star_involution,
)
from qdga.sampling import random_element, random_homogeneous_element

J = RootExponent(3, 1)
JBAR = RootExponent(3, 2)


def _samples(calc, seed, count, *, terms=3, max_len=4):
    rng = random.Random(seed)
    return [random_element(calc.universe, rng, terms=terms, max_len=max_len) for _ in range(count)]


def _hom_pairs(calc, seed, count):
    rng = random.Random(seed)
    pairs = []
    guard = 0
    while len(pairs) < count and guard < 50 * count:
        guard += 1
        a = random_homogeneous_element(calc.universe, rng, terms=2, max_len=3)
        if a.is_zero():
            continue
        b = random_element(calc.universe, rng, terms=2, max_len=3)
        pairs.append((a, b))
    return pairs


# -- the differential on the line ----------------------------------------------


def test_d_on_generators():
    calc = line_calculus(J)
    u = calc.universe
    assert calc.d(calc.atom("x")) == Element.word(u, ("dx",))
    assert calc.d(calc.atom("dx")) == Element.word(u, ("d2x",))
    assert calc.d(calc.atom("d2x")).is_zero()


def test_d_squares_the_coordinate():
    calc = line_calculus(J)
    u = calc.universe
    x = calc.atom("x")
    # d(x^2) = (dx)x + q^0 x(dx), and the rule moves x past dx
    assert calc.d(x * x) == Element.word(u, ("dx", "x")).scaled(2)


def test_d_raises_grade_by_one():
    calc = line_calculus(J)
    rng = random.Random(2)
    for _ in range(30):
        e = random_homogeneous_element(calc.universe, rng, terms=2, max_len=4)
        if e.is_zero():
            continue
        g = e.homogeneous_grade()
        de = calc.d(e)
        if not de.is_zero():
            assert de.homogeneous_grade() == g + 1


def test_third_power_of_d_vanishes_everywhere():
    for name in ("line-j", "line-jbar"):
        calc = builtin_calculus(name)
        for e in _samples(calc, seed=13, count=40, max_len=5):
            assert calc.d(e, times=3).is_zero(), (name, e)


def test_second_power_of_d_does_not_vanish():
    calc = line_calculus(J)
    x = calc.atom("x")
    assert not calc.d(x, times=2).is_zero()  # d^2 x = d2x != 0


def test_classical_control_d_squared_vanishes():
    calc = classical_line_calculus()
    for e in _samples(calc, seed=17, count=40, max_len=5):
        assert calc.d(e, times=2).is_zero()
    assert not calc.d(calc.atom("x")).is_zero()


def test_nilpotency_rejects_wrong_power():
    calc = line_calculus(J)
    with pytest.raises(DifferentialError):
        verify_nilpotency(calc.differential, 2, [])


def test_verify_nilpotency_report():
    calc = line_calculus(JBAR)
    report = verify_nilpotency(calc.differential, 3, _samples(calc, seed=23, count=25))
    assert report.ok and report.checked == 25


def test_d_reproduces_the_formal_derivative_on_functions():
    calc = line_calculus(J)
    u = calc.universe
    rng = random.Random(31)
    for _ in range(25):
        word = tuple(rng.choice(("x", "x", "x")) for _ in range(rng.randint(1, 4)))
        f = Element.word(u, word)
        expected = calc.normalize(Element.word(u, ("dx",)) * formal_derivative(f, "x"))
        assert calc.d(f) == expected


# -- Leibniz identities ---------------------------------------------------------


def test_graded_leibniz_on_sampled_pairs():
    for name in ("line-j", "line-jbar", "classical-line"):
        calc = builtin_calculus(name)
        report = verify_leibniz(calc.differential, _hom_pairs(calc, seed=5, count=30))
        assert report.ok, (name, report.summary())


def test_leibniz_requires_homogeneous_left_factor():
    calc = line_calculus(J)
    mixed = calc.atom("x") + calc.atom("dx")
    with pytest.raises(DifferentialError):
        verify_leibniz(calc.differential, [(mixed, calc.atom("x"))])


def test_iterated_leibniz_closes_nilpotency_on_products():
    # middle Gaussian binomials vanish at the primitive root, edges die by
    # d^3 = 0, so d^3(ab) = 0 term by term; checked as an exact identity
    for root in (J, JBAR):
        calc = line_calculus(root)
        rng = random.Random(41)
        pairs = []
        for _ in range(10):
            a = random_element(calc.universe, rng, terms=2, max_len=3)
            b = random_element(calc.universe, rng, terms=2, max_len=3)
            pairs.append((a, b))
        report = verify_iterated_leibniz(calc.differential, pairs)
        assert report.ok, report.summary()


def test_leibniz_phase_is_the_calculus_root():
    # on a grade-1 left factor the cross term picks up exactly one power of q
    calc = line_calculus(J)
    u = calc.universe
    dx = calc.atom("dx")
    x = calc.atom("x")
    lhs = calc.d(dx * x)
    rhs = calc.normalize(
        calc.d(dx) * x + dx.scaled(J.as_cyc()) * calc.d(x)
    )
    assert lhs == rhs


# -- star conjugation -----------------------------------------------------------


def test_star_values_on_generators():
    calc = line_calculus(J)
    u = calc.universe
    assert calc.star(calc.atom("x")) == calc.atom("x")
    assert calc.star(calc.atom("dx")) == calc.atom("dx")
    # (d2x)* = j^2 d2x = (-1 - j) d2x
    expected = calc.atom("d2x").scaled(CycNum.root_power(3, 2))
    assert calc.star(calc.atom("d2x")) == expected


def test_star_is_antilinear():
    calc = line_calculus(J)
    j = J.as_cyc()
    e = calc.atom("dx").scaled(j)
    assert calc.star(e) == calc.atom("dx").scaled(j.conjugate())


def test_star_is_antimultiplicative():
    calc = line_calculus(J)
    dx, d2x = calc.atom("dx"), calc.atom("d2x")
    lhs = calc.star(dx * d2x)
    rhs = calc.normalize(calc.star(d2x) * calc.star(dx))
    assert lhs == rhs


def test_star_involution_on_samples():
    for root in (J, JBAR):
        calc = line_calculus(root)
        report = verify_star_involution(
            calc.differential, calc.star_table, _samples(calc, seed=3, count=30)
        )
        assert report.ok, report.summary()


def test_star_respects_the_differential():
    for root in (J, JBAR):
        calc = line_calculus(root)
        rng = random.Random(9)
        samples = []
        for _ in range(30):
            e = random_homogeneous_element(calc.universe, rng, terms=2, max_len=4)
            if not e.is_zero():
                samples.append(e)
        report = verify_star_differential(calc.differential, calc.star_table, samples)
        assert report.ok, report.summary()


def test_star_respects_the_rewrite_rules():
    # star of both sides of every rule agrees after normalization
    for root in (J, JBAR):
        calc = line_calculus(root)
        u = calc.universe
        for rule in calc.rules.rules:
            if any(not isinstance(a, str) for a in rule.pattern):
                continue  # wildcard rules are covered by the sample suites
            lhs = Element.word(u, tuple(rule.pattern))
            rhs = Element.zero(u)
            for c, atoms in rule.replacement:
                rhs = rhs + Element.word(u, atoms, c)
            assert calc.star(lhs) == calc.star(rhs), rule.name


def test_star_table_must_cover_all_atoms():
    calc = line_calculus(J)
    with pytest.raises(DifferentialError):
        star(calc.differential, {"x": calc.atom("x")}, calc.atom("dx"))


def test_apply_d_respects_normalize_input_flag():
    calc = line_calculus(J)
    u = calc.universe
    # x dx is not in normal form; differentiating as written keeps the
    # unnormalized Leibniz bookkeeping observable on the output
    raw = Element.word(u, ("x", "dx"))
    normalized_first = apply_d(calc.differential, raw)
    as_written = apply_d(calc.differential, raw, normalize_input=False)
    assert normalized_first == as_written  # the calculus is consistent
    assert normalized_first == calc.d(raw)


def test_apply_d_times_matches_repeated_application():
    calc = line_calculus(J)
    e = calc.atom("x") * calc.atom("x") * calc.atom("dx")
    assert apply_d_times(calc.differential, e, 2) == calc.d(calc.d(e))


def test_misdeclared_action_grade_is_rejected():
    calc = line_calculus(J)
    u = calc.universe
    bad_action = dict(calc.differential.action)
    bad_action["x"] = Element.word(u, ("d2x",))  # grade 2, should be 1
    with pytest.raises(DifferentialError):
        DifferentialStructure(J, bad_action, calc.rules)


def test_nonprimitive_root_is_rejected():
    calc = line_calculus(J)
    with pytest.raises(DifferentialError):
        DifferentialStructure(RootExponent(3, 0), calc.differential.action, calc.rules)
