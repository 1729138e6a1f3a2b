"""Shipped calculi: the line at a cube root, its rederivation, the plane
fragment, and the non-anyonic verdict."""

from __future__ import annotations

import random

import pytest

from qdga.algebra import Element, Wildcard
from qdga.calculi import (
    AnyonicVerdict,
    Calculus,
    CalculusError,
    DerivationError,
    builtin_calculus,
    builtin_names,
    check_not_anyonic,
    classical_line_calculus,
    derive_line_relations,
    line_calculus,
    plane_constraints,
    plane_fragment,
)
from qdga.cyclotomic import CycNum, RootExponent
from qdga.differential import verify_leibniz
from qdga.sampling import random_element, random_homogeneous_element

J = RootExponent(3, 1)
JBAR = RootExponent(3, 2)


# -- the line calculus ----------------------------------------------------------


def test_builtin_catalog():
    names = builtin_names()
    for expected in (
        "line-j",
        "line-jbar",
        "line-j-trunc2",
        "line-j-trunc3",
        "line-jbar-trunc2",
        "line-jbar-trunc3",
        "classical-line",
    ):
        assert expected in names
    with pytest.raises(CalculusError):
        builtin_calculus("no-such-calculus")


def test_line_calculus_requires_a_primitive_cube_root():
    with pytest.raises(CalculusError):
        line_calculus(RootExponent(3, 0))
    with pytest.raises(CalculusError):
        line_calculus(RootExponent(4, 1))
    with pytest.raises(CalculusError):
        line_calculus(J, truncation=4)


def test_function_reordering_rule():
    calc = line_calculus(J)
    u = calc.universe
    x, d2x = calc.atom("x"), calc.atom("d2x")
    got = calc.normalize(x * d2x)
    expected = Element.word(u, ("d2x", "x")) + Element.word(
        u, ("dx", "dx"), J.as_cyc() - CycNum.one(3)
    )
    assert got == expected


def test_one_form_cube_vanishes():
    calc = line_calculus(J)
    dx = calc.atom("dx")
    assert calc.normalize(dx * dx * dx).is_zero()
    assert not calc.normalize(dx * dx).is_zero()


def test_exchange_rule_picks_up_the_root():
    calc = line_calculus(J)
    u = calc.universe
    dx, d2x = calc.atom("dx"), calc.atom("d2x")
    assert calc.normalize(dx * d2x) == Element.word(u, ("d2x", "dx"), J.as_cyc())


def test_conjugate_line_uses_the_conjugate_root():
    calc = line_calculus(JBAR)
    u = calc.universe
    dx, d2x = calc.atom("dx"), calc.atom("d2x")
    assert calc.normalize(dx * d2x) == Element.word(u, ("d2x", "dx"), JBAR.as_cyc())


def test_custom_variable_name_renames_generators():
    calc = line_calculus(J, var="y")
    assert set(calc.universe.names()) == {"y", "dy", "d2y"}
    assert calc.d(calc.atom("y")) == Element.word(calc.universe, ("dy",))


def test_normal_forms_have_bounded_one_form_degree():
    # every normal word is (d2x)^a (dx)^b f with b <= 2
    calc = line_calculus(J)
    rng = random.Random(29)
    for _ in range(40):
        e = calc.normalize(random_element(calc.universe, rng, terms=3, max_len=6))
        for word, _ in e.items():
            assert word.count("dx") <= 2
            seen_var = False
            for a in word:
                if a == "x":
                    seen_var = True
                else:
                    assert not seen_var, word  # forms never follow the function part


def test_truncated_calculi_kill_the_right_powers():
    t2 = builtin_calculus("line-j-trunc2")
    t3 = builtin_calculus("line-j-trunc3")
    d2x2 = t2.atom("d2x") * t2.atom("d2x")
    assert t2.normalize(d2x2).is_zero()
    d2x2_in_3 = t3.atom("d2x") * t3.atom("d2x")
    assert not t3.normalize(d2x2_in_3).is_zero()
    assert t3.normalize(d2x2_in_3 * t3.atom("d2x")).is_zero()


def test_trunc2_carries_the_induced_relation():
    # the two-sided ideal of (d2x)^2 contains d2x dx dx: commuting x past
    # (d2x)^2 leaves it with the unit coefficient (q - 1)(1 + q^2), so a
    # consistent presentation must kill it too
    t2 = builtin_calculus("line-j-trunc2")
    word = Element.word(t2.universe, ("d2x", "dx", "dx"))
    assert t2.normalize(word).is_zero()
    assert t2.normalize(t2.atom("x") * t2.atom("d2x") * t2.atom("d2x")).is_zero()
    # untruncated and cube-truncated calculi keep that monomial: the cube
    # analogue of the coefficient is (q - 1)(1 + q + q^2) = 0
    for name in ("line-j", "line-j-trunc3"):
        calc = builtin_calculus(name)
        w = Element.word(calc.universe, ("d2x", "dx", "dx"))
        assert not calc.normalize(w).is_zero(), name


def test_trunc2_quotient_satisfies_leibniz():
    calc = builtin_calculus("line-j-trunc2")
    rng = random.Random(23)
    pairs = []
    while len(pairs) < 30:
        a = random_homogeneous_element(calc.universe, rng, terms=2, max_len=5)
        if not a.is_zero():
            pairs.append((a, random_element(calc.universe, rng, terms=2, max_len=5)))
    report = verify_leibniz(calc.differential, pairs)
    assert report.ok, report.summary()


def test_truncated_calculi_stay_differential():
    for name in ("line-j-trunc2", "line-jbar-trunc3"):
        calc = builtin_calculus(name)
        rng = random.Random(37)
        for _ in range(25):
            e = random_element(calc.universe, rng, terms=2, max_len=5)
            assert calc.d(e, times=3).is_zero(), (name, e)


def test_d_with_times_zero_just_normalizes():
    calc = line_calculus(J)
    e = calc.atom("x") * calc.atom("dx")
    assert calc.d(e, times=0) == calc.normalize(e)


def test_calculus_exposes_root_and_modulus():
    calc = line_calculus(JBAR)
    assert calc.root == JBAR
    assert calc.modulus == 3
    assert calc.label == "line-jbar"


def test_atom_rejects_unknown_names():
    calc = line_calculus(J)
    with pytest.raises(Exception):
        calc.atom("z")


def test_classical_line_control():
    calc = classical_line_calculus()
    dx = calc.atom("dx")
    assert calc.normalize(dx * dx).is_zero()
    assert calc.d(calc.atom("x") * calc.atom("x"), times=2).is_zero()
    assert calc.star(dx) == dx


# -- mechanical rederivation -----------------------------------------------------


def test_rederivation_matches_the_shipped_rules():
    for root in (J, JBAR):
        der = derive_line_relations(root)
        assert der.matches_shipped, root
        assert der.rules.rules == line_calculus(root).rules.rules
        assert [r.name for r in der.rules.rules] == [
            "move-function-past-dx",
            "move-function-past-d2x",
            "dx-cubed-vanishes",
            "exchange-dx-d2x",
        ]


def test_rederivation_intermediate_coefficients():
    for root in (J, JBAR):
        der = derive_line_relations(root)
        assert der.cube_coefficient.as_rational() == -3
        assert der.exchange_coefficient == root.as_cyc()


def test_rederivation_records_four_steps_with_residuals():
    der = derive_line_relations(J)
    assert len(der.steps) == 4
    notes = [n for s in der.steps for n in s.notes]
    assert "cube_coefficient" in notes
    assert "exchange_coefficient" in notes
    for s in der.steps:
        assert s.description


def test_rederivation_rejects_a_nonprimitive_root():
    with pytest.raises((CalculusError, DerivationError)):
        derive_line_relations(RootExponent(3, 0))


# -- the plane fragment ------------------------------------------------------------


def test_plane_fragment_generators_and_axis_restricted_rules():
    frag = plane_fragment(J)
    assert set(frag.universe.names()) == {"x", "y", "dx", "dy", "d2x", "d2y"}
    # cross-axis function moves past d2 are deliberately absent
    x, d2y = frag.atom("x"), frag.atom("d2y")
    stuck = frag.normalize(x * d2y)
    assert stuck == x * d2y  # the word survives unrewritten
    # same-axis moves fire
    assert frag.normalize(x * frag.atom("d2x")) != x * frag.atom("d2x")


def test_plane_fragment_mixed_functions_move_past_one_forms():
    frag = plane_fragment(J)
    u = frag.universe
    assert frag.normalize(frag.atom("y") * frag.atom("dx")) == Element.word(u, ("dx", "y"))


def test_second_differential_of_the_mixed_product():
    # d^2(xy) collects both two-forms and the mixed one-form words with a
    # single factor of the root
    frag = plane_fragment(J)
    u = frag.universe
    got = frag.d(frag.atom("x") * frag.atom("y"), times=2)
    j = J.as_cyc()
    expected = (
        Element.word(u, ("d2x", "y"))
        + Element.word(u, ("d2y", "x"))
        + Element.word(u, ("dx", "dy"), j)
        + Element.word(u, ("dy", "dx"), j)
    )
    assert got == expected


def test_plane_constraints_are_the_two_mixed_relations():
    cs = plane_constraints(J)
    assert [c.source for c in cs] == ["x dy = dy x", "y dx = dx y"]
    u = cs[0].lhs.universe
    j = J.as_cyc()
    first = cs[0]
    assert first.lhs == Element.word(u, ("dx", "dy")) - Element.word(u, ("dy", "dx"), j)
    assert first.rhs == Element.word(u, ("d2y", "x")) - Element.word(u, ("x", "d2y"))
    second = cs[1]
    assert second.lhs == Element.word(u, ("dy", "dx")) - Element.word(u, ("dx", "dy"), j)
    assert second.rhs == Element.word(u, ("d2x", "y")) - Element.word(u, ("y", "d2x"))
    for c in cs:
        assert c.residual() == c.lhs - c.rhs


def test_plane_constraints_conjugate_root():
    cs = plane_constraints(JBAR)
    u = cs[0].lhs.universe
    assert cs[0].lhs == Element.word(u, ("dx", "dy")) - Element.word(u, ("dy", "dx"), JBAR.as_cyc())


def test_line_elements_transport_into_the_plane():
    line = line_calculus(J)
    frag = plane_fragment(J)
    rng = random.Random(43)
    for _ in range(25):
        e = random_element(line.universe, rng, terms=3, max_len=5)
        moved = e.transport(frag.universe)
        assert frag.normalize(moved) == line.normalize(e).transport(frag.universe)
        assert frag.d(moved) == line.d(e).transport(frag.universe)


# -- the non-anyonic verdict ---------------------------------------------------------


def test_cube_root_plane_is_not_anyonic():
    for root in (J, JBAR):
        verdict = check_not_anyonic(root)
        assert isinstance(verdict, AnyonicVerdict)
        assert not verdict.realizable
        assert verdict.solutions == []
        assert "not of anyonic origin" in verdict.summary()


def test_cube_root_constraints_pick_conflicting_braidings():
    verdict = check_not_anyonic(J)
    assert verdict.sources == ["x dy = dy x", "y dx = dx y"]
    assert verdict.per_constraint == [[2], [1]]


def test_classical_plane_is_anyonic():
    verdict = check_not_anyonic(RootExponent(2, 1))
    assert verdict.realizable
    assert verdict.solutions == [1]
    assert verdict.per_constraint == [[1], [1]]


def test_check_not_anyonic_rejects_other_moduli():
    with pytest.raises(CalculusError):
        check_not_anyonic(RootExponent(5, 1))
