"""N-nilpotent differentials on graded word algebras.

A differential structure fixes a primitive root q of order N, an action of d
on each generator, and the rule set used to normalize results.  d extends to
words by the graded Leibniz rule d(a w) = (d a) w + q^|a| a (d w), applied
atom by atom; on functions this reproduces d(f) = (d x) f' once the rule set
has moved the forms into place.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import AlgebraError, Element, RuleSet, normalize
from .cyclotomic import CycNum, RootExponent, q_binomial


class DifferentialError(AlgebraError):
    pass


@dataclass
class Failure:
    label: str
    detail: str


@dataclass
class CheckReport:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def count(self):
        self.checked += 1

    def fail(self, label: str, detail: str):
        self.failures.append(Failure(label, detail))

    def summary(self) -> str:
        if self.ok:
            return f"{self.name}: ok ({self.checked} checks)"
        first = self.failures[0]
        return (
            f"{self.name}: {len(self.failures)} of {self.checked} checks failed; "
            f"first witness {first.label}: {first.detail}"
        )


class DifferentialStructure:
    """The data (q, action of d, rule set) of an N-differential calculus."""

    def __init__(self, root: RootExponent, action: dict, ruleset: RuleSet):
        u = ruleset.universe
        if root.modulus != u.modulus:
            raise DifferentialError(
                f"root modulus {root.modulus} != universe modulus {u.modulus}"
            )
        if not root.is_primitive():
            raise DifferentialError(
                f"root exponent {root.k} mod {root.modulus} is not primitive"
            )
        for name, value in action.items():
            g = u.generator(name)
            if value.universe != u:
                raise DifferentialError(f"action of {name} lives over a different universe")
            if not value.is_zero() and value.grades() != [g.grade + 1]:
                raise DifferentialError(
                    f"d({name}) must be homogeneous of grade {g.grade + 1}"
                )
        self.root = root
        self.action = dict(action)
        self.ruleset = ruleset

    @property
    def universe(self):
        return self.ruleset.universe

    @property
    def order(self) -> int:
        return self.root.modulus

    def action_of(self, name: str) -> Element:
        try:
            return self.action[name]
        except KeyError:
            raise DifferentialError(
                f"d is not defined on {name} (derivative chain exhausted?)"
            ) from None


def apply_d(ds: DifferentialStructure, element: Element, *, normalize_input: bool = True) -> Element:
    """One application of d, with the result in normal form.

    normalize_input=False differentiates the words exactly as written; the
    relation derivations in `calculi` need that to compare d across the two
    sides of a not-yet-imposed identity.
    """
    u = ds.universe
    e = normalize(element, ds.ruleset) if normalize_input else element
    out = Element.zero(u)
    for word, coeff in e.items():
        grade_before = 0
        for i, atom in enumerate(word):
            act = ds.action_of(atom)
            if not act.is_zero():
                phase = ds.root.cyc_power(grade_before)
                piece = Element.word(u, word[:i], coeff * phase) * act * Element.word(u, word[i + 1:])
                out = out + piece
            grade_before += u.grade_of(atom)
    return normalize(out, ds.ruleset)


def apply_d_times(ds: DifferentialStructure, element: Element, times: int) -> Element:
    if times < 0:
        raise DifferentialError("cannot apply d a negative number of times")
    e = normalize(element, ds.ruleset)
    for _ in range(times):
        e = apply_d(ds, e)
    return e


def verify_nilpotency(ds: DifferentialStructure, power: int, samples) -> CheckReport:
    """d^power must annihilate every sample; power is the order of the root."""
    if power != ds.order:
        raise DifferentialError(f"nilpotency degree {power} != root order {ds.order}")
    report = CheckReport(f"nilpotency d^{power}")
    for e in samples:
        report.count()
        image = apply_d_times(ds, e, power)
        if not image.is_zero():
            report.fail(repr(e), f"d^{power} gave {image!r}")
    return report


def verify_leibniz(ds: DifferentialStructure, pairs) -> CheckReport:
    """d(ab) = (da)b + q^|a| a (db) on homogeneous pairs."""
    report = CheckReport("graded Leibniz")
    for a, b in pairs:
        report.count()
        if not a.is_homogeneous():
            raise DifferentialError("left factor must be homogeneous")
        if a.is_zero():
            continue
        phase = ds.root.cyc_power(a.homogeneous_grade())
        lhs = apply_d(ds, a * b)
        rhs = apply_d(ds, a) * normalize(b, ds.ruleset) + normalize(a, ds.ruleset).scaled(phase) * apply_d(ds, b)
        rhs = normalize(rhs, ds.ruleset)
        if lhs != rhs:
            report.fail(f"({a!r}, {b!r})", f"d(ab) = {lhs!r} but Leibniz gives {rhs!r}")
    return report


def verify_iterated_leibniz(ds: DifferentialStructure, pairs) -> CheckReport:
    """d^N(ab) = sum_n [N over n]_q d^n(a) d^(N-n)(b); both sides vanish.

    The Gaussian binomials kill every middle term at a primitive root, and
    the edge terms die by nilpotency, so the identity closes d^N = 0 on
    products.  Checked exactly on both sides.
    """
    n = ds.order
    report = CheckReport("iterated Leibniz")
    for a, b in pairs:
        report.count()
        lhs = apply_d_times(ds, a * b, n)
        rhs = Element.zero(ds.universe)
        for i in range(n + 1):
            coeff = q_binomial(n, i, ds.root)
            if coeff.is_zero():
                continue
            rhs = rhs + (apply_d_times(ds, a, i) * apply_d_times(ds, b, n - i)).scaled(coeff)
        rhs = normalize(rhs, ds.ruleset)
        if lhs != rhs or not lhs.is_zero():
            report.fail(f"({a!r}, {b!r})", f"lhs {lhs!r}, rhs {rhs!r}")
    return report


def star(ds: DifferentialStructure, table: dict, element: Element) -> Element:
    """Antilinear antimultiplicative conjugation from a generator table."""
    u = ds.universe
    out = Element.zero(u)
    for word, coeff in element.items():
        piece = Element.scalar(u, coeff.conjugate())
        for atom in reversed(word):
            try:
                piece = piece * table[atom]
            except KeyError:
                raise DifferentialError(f"star table does not cover {atom}") from None
        out = out + piece
    return normalize(out, ds.ruleset)


def verify_star_involution(ds: DifferentialStructure, table: dict, samples) -> CheckReport:
    report = CheckReport("star involution")
    for e in samples:
        report.count()
        twice = star(ds, table, star(ds, table, e))
        if twice != normalize(e, ds.ruleset):
            report.fail(repr(e), f"star(star(e)) = {twice!r}")
    return report


def verify_star_differential(ds: DifferentialStructure, table: dict, samples) -> CheckReport:
    """(d omega)* = q^(-i) d(omega*) on homogeneous omega of grade i."""
    report = CheckReport("star vs differential")
    for e in samples:
        report.count()
        if e.is_zero():
            continue
        if not e.is_homogeneous():
            raise DifferentialError("star/differential samples must be homogeneous")
        i = e.homogeneous_grade()
        lhs = star(ds, table, apply_d(ds, e))
        rhs = apply_d(ds, star(ds, table, e)).scaled(ds.root.cyc_power(-i))
        if lhs != rhs:
            report.fail(repr(e), f"(d e)* = {lhs!r} but q^-{i} d(e*) = {rhs!r}")
    return report
