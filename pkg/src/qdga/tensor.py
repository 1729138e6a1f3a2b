"""Braided tensor products of graded word algebras.

The product twists by a root-of-unity phase on the inner factors:

    (a1 (x) b1) (a2 (x) b2) = q^(|b1| |a2|) (a1 a2 (x) b1 b2)

with q any root of unity of the common modulus.  q = -1 on modulus 2 is the
classical sign rule for graded tensor products.  The flip map and the
candidate differential d(a (x) b) = da (x) b + s^|a| a (x) db live here; the
question of WHICH (q, p, s) make the candidate a genuine differential is
answered in `nogo`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraError, Element, RuleSet, normalize
from .cyclotomic import CycNum, RootExponent
from .differential import CheckReport, DifferentialStructure, apply_d


class TensorError(AlgebraError):
    pass


@dataclass(frozen=True)
class TensorContext:
    """Fixed pair of factor algebras plus the braiding root."""

    left_rules: RuleSet
    right_rules: RuleSet
    braiding: RootExponent

    def __post_init__(self):
        n = self.braiding.modulus
        if self.left_rules.universe.modulus != n or self.right_rules.universe.modulus != n:
            raise TensorError("factor universes and braiding must share one modulus")

    @property
    def left_universe(self):
        return self.left_rules.universe

    @property
    def right_universe(self):
        return self.right_rules.universe

    @property
    def modulus(self) -> int:
        return self.braiding.modulus

    def flipped(self) -> "TensorContext":
        return TensorContext(self.right_rules, self.left_rules, self.braiding.conjugate())


class TensorElement:
    """Sum of word pairs; factor words are kept in their normal forms."""

    __slots__ = ("context", "_terms")

    def __init__(self, context: TensorContext, terms=None):
        self.context = context
        self._terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    @staticmethod
    def zero(context: TensorContext) -> "TensorElement":
        return TensorElement(context, {})

    @staticmethod
    def pair(context: TensorContext, left: Element, right: Element) -> "TensorElement":
        """left (x) right, bilinear over normalized factor terms."""
        if left.universe != context.left_universe or right.universe != context.right_universe:
            raise TensorError("factors live over the wrong universes")
        left = normalize(left, context.left_rules)
        right = normalize(right, context.right_rules)
        terms = {}
        for wa, ca in left.items():
            for wb, cb in right.items():
                _acc(terms, (wa, wb), ca * cb)
        return TensorElement(context, terms)

    @staticmethod
    def one(context: TensorContext) -> "TensorElement":
        return TensorElement.pair(
            context,
            Element.one(context.left_universe),
            Element.one(context.right_universe),
        )

    # -- linear structure ---------------------------------------------------

    def _check(self, other: "TensorElement"):
        if not isinstance(other, TensorElement):
            raise TensorError(f"expected TensorElement, got {type(other).__name__}")
        if other.context is not self.context and other.context != self.context:
            raise TensorError("tensor elements live in different contexts")

    def __add__(self, other):
        self._check(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            _acc(out, k, c)
        return TensorElement(self.context, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TensorElement(self.context, {k: -c for k, c in self._terms.items()})

    def scaled(self, c) -> "TensorElement":
        if isinstance(c, CycNum):
            if c.modulus != self.context.modulus:
                raise TensorError("scalar modulus mismatch")
        else:
            c = CycNum.rational(self.context.modulus, c)
        return TensorElement(self.context, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TensorElement):
            return self.scaled(other)
        self._check(other)
        ctx = self.context
        ul, ur = ctx.left_universe, ctx.right_universe
        out = {}
        for (wa1, wb1), c1 in self._terms.items():
            gb1 = ur.word_grade(wb1)
            for (wa2, wb2), c2 in other._terms.items():
                ga2 = ul.word_grade(wa2)
                phase = ctx.braiding.cyc_power(gb1 * ga2)
                left = normalize(Element.word(ul, wa1 + wa2), ctx.left_rules)
                right = normalize(Element.word(ur, wb1 + wb2), ctx.right_rules)
                base = c1 * c2 * phase
                for wa, ca in left.items():
                    for wb, cb in right.items():
                        _acc(out, (wa, wb), base * ca * cb)
        return TensorElement(ctx, out)

    def __rmul__(self, other):
        return self.scaled(other)

    # -- views ----------------------------------------------------------------

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, left_word, right_word) -> CycNum:
        key = (tuple(left_word), tuple(right_word))
        return self._terms.get(key, CycNum.zero(self.context.modulus))

    def term_grade(self, key) -> int:
        wa, wb = key
        return self.context.left_universe.word_grade(wa) + self.context.right_universe.word_grade(wb)

    def grades(self):
        return sorted({self.term_grade(k) for k in self._terms})

    def is_homogeneous(self) -> bool:
        return len(self.grades()) <= 1

    def homogeneous_grade(self) -> int:
        gs = self.grades()
        if len(gs) != 1:
            raise TensorError("tensor element is not homogeneous and nonzero")
        return gs[0]

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda t: (self.term_grade(t[0]), t[0]))

    def __eq__(self, other):
        return (
            isinstance(other, TensorElement)
            and self.context == other.context
            and self._terms == other._terms
        )

    def __repr__(self):
        from .expressions import render_tensor

        return f"<{render_tensor(self)}>"


def _acc(terms: dict, key, c):
    s = terms.get(key)
    s = c if s is None else s + c
    if s.is_zero():
        terms.pop(key, None)
    else:
        terms[key] = s


def embed_left(context: TensorContext, e: Element) -> TensorElement:
    """a -> a (x) 1; an injective algebra map."""
    return TensorElement.pair(context, e, Element.one(context.right_universe))


def embed_right(context: TensorContext, e: Element) -> TensorElement:
    """b -> 1 (x) b; an injective algebra map."""
    return TensorElement.pair(context, Element.one(context.left_universe), e)


def flip_iso(u: TensorElement) -> TensorElement:
    """phi(a (x) b) = q^(-|a||b|) b (x) a, landing in the conjugate braiding.

    Multiplication-preserving onto the flipped context, and inverse to the
    flip out of that context.
    """
    ctx = u.context
    out = {}
    for (wa, wb), c in u.items():
        ga = ctx.left_universe.word_grade(wa)
        gb = ctx.right_universe.word_grade(wb)
        _acc(out, (wb, wa), c * ctx.braiding.cyc_power(-ga * gb))
    return TensorElement(ctx.flipped(), out)


def candidate_d(
    s: RootExponent,
    d_left: DifferentialStructure,
    d_right: DifferentialStructure,
    u: TensorElement,
) -> TensorElement:
    """d(a (x) b) = da (x) b + s^|a| a (x) db, per homogeneous word pair."""
    ctx = u.context
    if d_left.ruleset != ctx.left_rules or d_right.ruleset != ctx.right_rules:
        raise TensorError("factor differentials do not match the tensor context")
    if s.modulus != ctx.modulus:
        raise TensorError("twist root modulus mismatch")
    out = TensorElement.zero(ctx)
    for (wa, wb), c in u.items():
        da = apply_d(d_left, Element.word(ctx.left_universe, wa))
        if not da.is_zero():
            out = out + TensorElement.pair(
                ctx, da, Element.word(ctx.right_universe, wb)
            ).scaled(c)
        db = apply_d(d_right, Element.word(ctx.right_universe, wb))
        if not db.is_zero():
            ga = ctx.left_universe.word_grade(wa)
            out = out + TensorElement.pair(
                ctx, Element.word(ctx.left_universe, wa), db
            ).scaled(c * s.cyc_power(ga))
    return out


# -- suites -------------------------------------------------------------------


def verify_flip_homomorphism(ctx: TensorContext, pairs) -> CheckReport:
    report = CheckReport("flip is multiplicative")
    for u, v in pairs:
        report.count()
        lhs = flip_iso(u * v)
        rhs = flip_iso(u) * flip_iso(v)
        if lhs != rhs:
            report.fail(f"({u!r}, {v!r})", f"phi(uv) = {lhs!r} != phi(u)phi(v) = {rhs!r}")
    return report


def verify_flip_roundtrip(ctx: TensorContext, samples) -> CheckReport:
    report = CheckReport("flip composed with conjugate flip")
    for u in samples:
        report.count()
        back = flip_iso(flip_iso(u))
        if back != u:
            report.fail(repr(u), f"round trip gave {back!r}")
    return report


def verify_tensor_associativity(ctx: TensorContext, triples) -> CheckReport:
    report = CheckReport("tensor product associativity")
    for u, v, w in triples:
        report.count()
        if (u * v) * w != u * (v * w):
            report.fail(f"({u!r}, {v!r}, {w!r})", "(uv)w != u(vw)")
    return report


def verify_tensor_unit(ctx: TensorContext, samples) -> CheckReport:
    report = CheckReport("tensor unit")
    one = TensorElement.one(ctx)
    for u in samples:
        report.count()
        if one * u != u or u * one != u:
            report.fail(repr(u), "1 (x) 1 is not a two-sided unit")
    return report


def verify_product_differential(
    ctx: TensorContext,
    d_left: DifferentialStructure,
    d_right: DifferentialStructure,
    s: RootExponent,
    p: RootExponent,
    samples,
    pairs,
) -> tuple:
    """Nilpotency and p-graded Leibniz for the candidate differential.

    Passes exactly when (braiding, p, s) is an admissible triple; the
    classical modulus-2 case with all three equal to -1 is the control.
    """
    n = ctx.modulus
    nil = CheckReport(f"product differential d^{n}")
    for u in samples:
        nil.count()
        image = u
        for _ in range(n):
            image = candidate_d(s, d_left, d_right, image)
        if not image.is_zero():
            nil.fail(repr(u), f"d^{n} gave {image!r}")
    leib = CheckReport("product differential Leibniz")
    for u, v in pairs:
        leib.count()
        if u.is_zero():
            continue
        if not u.is_homogeneous():
            raise TensorError("left factor must be homogeneous")
        phase = p.cyc_power(u.homogeneous_grade())
        lhs = candidate_d(s, d_left, d_right, u * v)
        rhs = candidate_d(s, d_left, d_right, u) * v + (u * candidate_d(s, d_left, d_right, v)).scaled(phase)
        if lhs != rhs:
            leib.fail(f"({u!r}, {v!r})", f"d(uv) = {lhs!r} vs Leibniz {rhs!r}")
    return nil, leib
