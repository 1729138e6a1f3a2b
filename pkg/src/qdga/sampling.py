"""Seeded random elements for the property suites.

Everything here takes an explicit random.Random so identical seeds give
identical samples, which the CLI report determinism tests rely on.
Coefficients are drawn from a pool mixing small rationals with root powers
so the suites exercise genuinely cyclotomic arithmetic, not just integers.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from .algebra import FREE, Element, Generator, RuleSet, Universe
from .cyclotomic import CycNum
from .tensor import TensorContext, TensorElement


@lru_cache(maxsize=None)
def coefficient_pool(modulus: int) -> tuple:
    pool = [
        CycNum.rational(modulus, v)
        for v in (1, -1, 2, -3, Fraction(1, 2), Fraction(-2, 3))
    ]
    for i in range(1, modulus):
        zi = CycNum.root_power(modulus, i)
        pool.append(zi)
        pool.append(zi + 1)
        pool.append(-zi)
    return tuple(pool)


def random_coefficient(modulus: int, rng: random.Random) -> CycNum:
    return rng.choice(coefficient_pool(modulus))


def random_word(universe: Universe, rng: random.Random, max_len: int = 4) -> tuple:
    names = universe.names()
    return tuple(rng.choice(names) for _ in range(rng.randint(0, max_len)))


def random_element(
    universe: Universe, rng: random.Random, *, terms: int = 3, max_len: int = 4
) -> Element:
    out = Element.zero(universe)
    for _ in range(terms):
        out = out + Element.word(
            universe,
            random_word(universe, rng, max_len),
            random_coefficient(universe.modulus, rng),
        )
    return out


def random_homogeneous_element(
    universe: Universe,
    rng: random.Random,
    *,
    grade: int | None = None,
    terms: int = 2,
    max_len: int = 4,
    tries: int = 60,
) -> Element:
    """Homogeneous sample; the first found word fixes the grade when none is
    requested.  May return zero when the grade is unreachable."""
    base = None
    for _ in range(tries):
        w = random_word(universe, rng, max_len)
        if grade is None or universe.word_grade(w) == grade:
            base = w
            break
    if base is None:
        return Element.zero(universe)
    target = universe.word_grade(base)
    out = Element.word(universe, base, random_coefficient(universe.modulus, rng))
    added = 1
    for _ in range(tries):
        if added >= terms:
            break
        w = random_word(universe, rng, max_len)
        if universe.word_grade(w) == target:
            out = out + Element.word(universe, w, random_coefficient(universe.modulus, rng))
            added += 1
    return out


def random_tensor_element(
    context: TensorContext, rng: random.Random, *, terms: int = 2, max_len: int = 3
) -> TensorElement:
    out = TensorElement.zero(context)
    for _ in range(terms):
        pair = TensorElement.pair(
            context,
            Element.word(
                context.left_universe, random_word(context.left_universe, rng, max_len)
            ),
            Element.word(
                context.right_universe, random_word(context.right_universe, rng, max_len)
            ),
        )
        out = out + pair.scaled(random_coefficient(context.modulus, rng))
    return out


def random_homogeneous_tensor_element(
    context: TensorContext,
    rng: random.Random,
    *,
    grade: int | None = None,
    terms: int = 2,
    max_len: int = 3,
    tries: int = 60,
) -> TensorElement:
    base = None
    for _ in range(tries):
        wa = random_word(context.left_universe, rng, max_len)
        wb = random_word(context.right_universe, rng, max_len)
        g = context.left_universe.word_grade(wa) + context.right_universe.word_grade(wb)
        if grade is None or g == grade:
            base = (wa, wb)
            break
    if base is None:
        return TensorElement.zero(context)
    target = context.left_universe.word_grade(base[0]) + context.right_universe.word_grade(base[1])
    out = TensorElement.pair(
        context,
        Element.word(context.left_universe, base[0]),
        Element.word(context.right_universe, base[1]),
    ).scaled(random_coefficient(context.modulus, rng))
    added = 1
    for _ in range(tries):
        if added >= terms:
            break
        wa = random_word(context.left_universe, rng, max_len)
        wb = random_word(context.right_universe, rng, max_len)
        if context.left_universe.word_grade(wa) + context.right_universe.word_grade(wb) == target:
            out = out + TensorElement.pair(
                context,
                Element.word(context.left_universe, wa),
                Element.word(context.right_universe, wb),
            ).scaled(random_coefficient(context.modulus, rng))
            added += 1
    return out


def free_graded_universe(modulus: int, *, prefix: str = "u", grades=(0, 1, 2)) -> Universe:
    """Free noncommuting generators, one per listed grade."""
    return Universe(
        modulus, [Generator(f"{prefix}{g}", g, FREE) for g in grades]
    )


def free_graded_context(modulus: int, braiding_exponent: int) -> TensorContext:
    """Tensor context over two free graded factors; no rewrite rules."""
    from .cyclotomic import RootExponent

    left = RuleSet(free_graded_universe(modulus, prefix="a"), ())
    right = RuleSet(free_graded_universe(modulus, prefix="b"), ())
    return TensorContext(left, right, RootExponent(modulus, braiding_exponent))
