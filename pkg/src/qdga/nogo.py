"""Which braided tensor products admit a compatible differential.

The candidate differential d(a (x) b) = da (x) b + s^|a| a (x) db can be
checked against the p-graded Leibniz rule in two ways on a product
(a1 (x) b1)(a2 (x) b2): multiply first and then differentiate, or
differentiate first by the p-rule and then multiply.  Both routes expand in
the basis

    da1 a2 (x) b1 b2,  a1 da2 (x) b1 b2,  a1 a2 (x) db1 b2,  a1 a2 (x) b1 db2

and the coefficient columns are computed HERE from first principles: four
free generic generators of prescribed grades are built, the tensor module
multiplies and differentiates them, and the coefficients are read off.
Nothing in this file hardcodes the resulting phase table; the closed forms
below exist only so tests can cross-check the mechanical expansion.

Sweeping all exponent triples shows the defect vanishes for every grade
profile only when p = q^(-1), s = q and p = s simultaneously, which kills
everything except the classical sign rule q = p = s = -1 on modulus 2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .algebra import FREE, Element, Generator, RuleSet, Universe
from .cyclotomic import CycNum, RootExponent, primitive_exponents
from .differential import DifferentialStructure, apply_d
from .tensor import TensorContext, TensorElement, TensorError, candidate_d


class NogoError(TensorError):
    pass


@dataclass(frozen=True)
class GradeProfile:
    """Grades (|a1|, |a2|, |b1|, |b2|) of the four generic factors."""

    a1: int
    a2: int
    b1: int
    b2: int

    def __post_init__(self):
        if min(self.a1, self.a2, self.b1, self.b2) < 0:
            raise NogoError("grades must be non-negative")

    def as_tuple(self) -> tuple:
        return (self.a1, self.a2, self.b1, self.b2)


BASIS_LABELS = (
    "da1 a2 (x) b1 b2",
    "a1 da2 (x) b1 b2",
    "a1 a2 (x) db1 b2",
    "a1 a2 (x) b1 db2",
)

_BASIS_KEYS = (
    (("da1", "a2"), ("b1", "b2")),
    (("a1", "da2"), ("b1", "b2")),
    (("a1", "a2"), ("db1", "b2")),
    (("a1", "a2"), ("b1", "db2")),
)


@dataclass(frozen=True)
class DefectVector:
    """Per-column differences of the two evaluation routes."""

    components: tuple

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def first_violating_column(self):
        """1-based index of the first nonzero column, or None."""
        for i, c in enumerate(self.components):
            if not c.is_zero():
                return i + 1
        return None


class _Frame:
    """Free generic factor algebras for one modulus and grade profile."""

    def __init__(self, modulus: int, grades: tuple):
        g1, g2, g3, g4 = grades
        self.left = Universe(
            modulus,
            [
                Generator("a1", g1, FREE),
                Generator("a2", g2, FREE),
                Generator("da1", g1 + 1, FREE),
                Generator("da2", g2 + 1, FREE),
            ],
        )
        self.right = Universe(
            modulus,
            [
                Generator("b1", g3, FREE),
                Generator("b2", g4, FREE),
                Generator("db1", g3 + 1, FREE),
                Generator("db2", g4 + 1, FREE),
            ],
        )
        self.left_rules = RuleSet(self.left, ())
        self.right_rules = RuleSet(self.right, ())
        self.left_action = {
            "a1": Element.word(self.left, ("da1",)),
            "a2": Element.word(self.left, ("da2",)),
            "da1": Element.zero(self.left),
            "da2": Element.zero(self.left),
        }
        self.right_action = {
            "b1": Element.word(self.right, ("db1",)),
            "b2": Element.word(self.right, ("db2",)),
            "db1": Element.zero(self.right),
            "db2": Element.zero(self.right),
        }


@lru_cache(maxsize=None)
def _frame(modulus: int, grades: tuple) -> _Frame:
    return _Frame(modulus, grades)


@lru_cache(maxsize=None)
def _tensor_setup(modulus: int, grades: tuple, braiding_k: int):
    """Braided context with the generic factors u, v and their product.

    Cached per (modulus, profile, braiding exponent): the sweep revisits the
    same product for every (p, s) pair, and TensorElement values are never
    mutated, so sharing them is safe.
    """
    frame = _frame(modulus, grades)
    ctx = TensorContext(frame.left_rules, frame.right_rules, RootExponent(modulus, braiding_k))
    one = CycNum.one(modulus)
    u = TensorElement(ctx, {(("a1",), ("b1",)): one})
    v = TensorElement(ctx, {(("a2",), ("b2",)): one})
    return ctx, u, v, u * v


@lru_cache(maxsize=None)
def _factor_differentials(modulus: int, grades: tuple, leibniz_k: int):
    frame = _frame(modulus, grades)
    p = RootExponent(modulus, leibniz_k)
    return (
        DifferentialStructure(p, frame.left_action, frame.left_rules),
        DifferentialStructure(p, frame.right_action, frame.right_rules),
    )


def _check_roots(q: RootExponent, p: RootExponent, s: RootExponent):
    if not (q.modulus == p.modulus == s.modulus):
        raise NogoError("q, p, s must share one modulus")
    if not p.is_primitive():
        raise NogoError("the factor Leibniz root p must be primitive")


@lru_cache(maxsize=None)
def _route_pieces(modulus: int, grades: tuple, kq: int, kp: int):
    """Twist-independent tensor pieces of the two routes, cached per (q, p).

    On a single word pair w = c * (wa (x) wb) the candidate differential is
    pair(d wa, wb) * c + pair(wa, d wb) * (c * s^|wa|), so only the power of
    the twist root s varies inside the sweep's innermost loop.  Splitting
    each route at that power and scaling afterwards is plain bilinearity;
    every piece is still built by the tensor module itself.
    """
    ctx, u, v, uv = _tensor_setup(modulus, grades, kq)
    d_left, d_right = _factor_differentials(modulus, grades, kp)
    ul, ur = ctx.left_universe, ctx.right_universe

    def split(w: TensorElement):
        ((wa, wb), c), = w.items()  # the generic frame keeps these single-term
        da = apply_d(d_left, Element.word(ul, wa))
        db = apply_d(d_right, Element.word(ur, wb))
        left_piece = TensorElement.pair(ctx, da, Element.word(ur, wb)).scaled(c)
        right_piece = TensorElement.pair(ctx, Element.word(ul, wa), db).scaled(c)
        return left_piece, right_piece, ul.word_grade(wa)

    w1a, w1b, guv = split(uv)
    dua, dub, gu = split(u)
    dva, dvb, gv = split(v)
    return (
        (w1a, w1b, guv),
        (dua * v, dub * v, gu),
        (u * dva, u * dvb, gv),
    )


def leibniz_ways(q: RootExponent, p: RootExponent, s: RootExponent, profile: GradeProfile):
    """Coefficient rows of the two evaluation routes, derived mechanically.

    Returns (row_multiply_then_d, row_d_then_multiply), each a 4-tuple of
    CycNum coefficients over the generic basis, extracted from the tensor
    module acting on free generators of the profile's grades.  Equal to
    leibniz_ways_direct on every input; the pieces that do not involve the
    twist root are cached across the sweep.
    """
    _check_roots(q, p, s)
    n = q.modulus
    (w1a, w1b, guv), (p1, p2, gu), (p3, p4, gv) = _route_pieces(
        n, profile.as_tuple(), q.k, p.k
    )

    way_one = w1a + w1b.scaled(s.cyc_power(guv))
    du_v = p1 + p2.scaled(s.cyc_power(gu))
    u_dv = p3 + p4.scaled(s.cyc_power(gv))
    way_two = du_v + u_dv.scaled(p.cyc_power(profile.a1 + profile.b1))

    return _extract_rows(way_one, way_two)


def leibniz_ways_direct(q: RootExponent, p: RootExponent, s: RootExponent, profile: GradeProfile):
    """Reference evaluation of the two routes, nothing cached or hoisted.

    Applies the candidate differential to u, v and u*v exactly as written
    and multiplies out the second route term by term.  The tests pin
    leibniz_ways to this function; the sweep itself uses the cached form.
    """
    _check_roots(q, p, s)
    n = q.modulus
    frame = _frame(n, profile.as_tuple())
    ctx = TensorContext(frame.left_rules, frame.right_rules, q)
    d_left = DifferentialStructure(p, frame.left_action, frame.left_rules)
    d_right = DifferentialStructure(p, frame.right_action, frame.right_rules)
    one = CycNum.one(n)
    u = TensorElement(ctx, {(("a1",), ("b1",)): one})
    v = TensorElement(ctx, {(("a2",), ("b2",)): one})

    way_one = candidate_d(s, d_left, d_right, u * v)
    du = candidate_d(s, d_left, d_right, u)
    dv = candidate_d(s, d_left, d_right, v)
    way_two = du * v + (u * dv).scaled(p.cyc_power(profile.a1 + profile.b1))

    return _extract_rows(way_one, way_two)


def _extract_rows(way_one: TensorElement, way_two: TensorElement):
    rows = []
    for way in (way_one, way_two):
        extra = set(way._terms) - set(_BASIS_KEYS)
        if extra:
            raise NogoError(f"expansion left the generic basis: {sorted(extra)}")
        rows.append(tuple(way.coefficient(*k) for k in _BASIS_KEYS))
    return rows[0], rows[1]


def leibniz_defect(q: RootExponent, p: RootExponent, s: RootExponent, profile: GradeProfile) -> DefectVector:
    """Column-wise difference of the two routes on one grade profile."""
    row_one, row_two = leibniz_ways(q, p, s, profile)
    return DefectVector(tuple(a - b for a, b in zip(row_one, row_two)))


# closed-form phase rows, used by the tests to cross-check the mechanical
# expansion column by column (never fed back into the sweep)


def table_row_multiply_then_d(q, p, s, profile: GradeProfile):
    base = q.cyc_power(profile.a2 * profile.b1)
    return (
        base,
        base * p.cyc_power(profile.a1),
        base * s.cyc_power(profile.a1 + profile.a2),
        base * s.cyc_power(profile.a1 + profile.a2) * p.cyc_power(profile.b1),
    )


def table_row_d_then_multiply(q, p, s, profile: GradeProfile, *, tabulated_column2: bool = False):
    """Second route; tabulated_column2 switches in the commonly printed
    variant q^(|b1|(|a1|+1)) of column 2 instead of the derived
    q^(|b1|(|a2|+1))."""
    col2_inner = profile.a1 if tabulated_column2 else profile.a2
    return (
        q.cyc_power(profile.a2 * profile.b1),
        p.cyc_power(profile.a1 + profile.b1) * q.cyc_power(profile.b1 * (col2_inner + 1)),
        q.cyc_power((profile.b1 + 1) * profile.a2) * s.cyc_power(profile.a1),
        p.cyc_power(profile.a1 + profile.b1) * s.cyc_power(profile.a2) * q.cyc_power(profile.b1 * profile.a2),
    )


# -- exponent sweeps ----------------------------------------------------------


@dataclass
class TripleCertificate:
    q: int
    p: int
    s: int
    accepted: bool
    violating_profile: tuple | None = None
    violating_column: int | None = None


@dataclass
class NogoResult:
    modulus: int
    extended: bool
    solutions: list
    certificates: list
    notes: list

    @property
    def admissible(self) -> bool:
        return bool(self.solutions)


def _profiles(modulus: int, extended: bool):
    top = 2 * modulus if extended else modulus
    return itertools.product(range(top), repeat=4)


SWEEP_NOTES = [
    "columns run over the basis (da1 a2 (x) b1 b2, a1 da2 (x) b1 b2, "
    "a1 a2 (x) db1 b2, a1 a2 (x) b1 db2); column 1 agrees between the two "
    "routes identically",
    "column 2, differentiate-then-multiply route: the derived phase is "
    "q^(|b1|(|a2|+1)) because the braiding moves the raised second left "
    "factor (grade |a2|+1) past b1; a commonly tabulated variant reads "
    "q^(|b1|(|a1|+1)) instead; the variants coincide whenever |a1| = |a2|, "
    "in particular at the minimal violating profile (0, 0, 1, 0), so the "
    "constraint read off there is p q = 1 either way",
    "sweep runs q and s over all roots of the modulus, p over primitive "
    "exponents only, and grade profiles over residues [0, N) (phases only "
    "depend on grades mod N); --extended-sweep doubles the grade range",
]


def solve_nogo(modulus: int, *, extended_sweep: bool = False) -> NogoResult:
    """Sweep all (q, p, s) exponent triples; keep those with zero defect.

    Rejection certificates record the first violating grade profile in
    lexicographic order and the first violating column.
    """
    if modulus < 2:
        raise NogoError("modulus must be >= 2")
    solutions = []
    certificates = []
    for kq in range(modulus):
        q = RootExponent(modulus, kq)
        for kp in primitive_exponents(modulus):
            p = RootExponent(modulus, kp)
            for ks in range(modulus):
                s = RootExponent(modulus, ks)
                violation = None
                for prof in _profiles(modulus, extended_sweep):
                    defect = leibniz_defect(q, p, s, GradeProfile(*prof))
                    col = defect.first_violating_column()
                    if col is not None:
                        violation = (prof, col)
                        break
                if violation is None:
                    solutions.append((kq, kp, ks))
                    certificates.append(TripleCertificate(kq, kp, ks, True))
                else:
                    certificates.append(
                        TripleCertificate(kq, kp, ks, False, violation[0], violation[1])
                    )
    return NogoResult(modulus, extended_sweep, solutions, certificates, list(SWEEP_NOTES))


def column_survivors(modulus: int, column: int, *, extended_sweep: bool = False) -> list:
    """Triples whose defect vanishes in ONE column for every profile.

    column is 1-based over the generic basis; the sweep space matches
    solve_nogo.  Used to confirm the per-column constraints p q = 1 (column
    2), s = q (column 3) and p = s (column 4) separately.
    """
    if column not in (1, 2, 3, 4):
        raise NogoError("column must be in 1..4")
    survivors = []
    for kq in range(modulus):
        q = RootExponent(modulus, kq)
        for kp in primitive_exponents(modulus):
            p = RootExponent(modulus, kp)
            for ks in range(modulus):
                s = RootExponent(modulus, ks)
                ok = True
                for prof in _profiles(modulus, extended_sweep):
                    defect = leibniz_defect(q, p, s, GradeProfile(*prof))
                    if not defect.components[column - 1].is_zero():
                        ok = False
                        break
                if ok:
                    survivors.append((kq, kp, ks))
    return survivors


# -- differential homomorphisms ------------------------------------------------


@dataclass
class HomomorphismCheck:
    modulus: int
    q: int
    p: int
    equal: bool
    witness_grade: int | None

    def summary(self) -> str:
        if self.equal:
            return f"q = p (exponent {self.q} mod {self.modulus}): compatible"
        return (
            f"q != p: the Leibniz expansions of d(ab) differ at grade "
            f"|a| = {self.witness_grade} (q^{self.witness_grade} != p^{self.witness_grade})"
        )


def homomorphism_forces_equal(modulus: int, q: RootExponent, p: RootExponent) -> HomomorphismCheck:
    """A grade-preserving, d-commuting map between the q- and p-calculi
    carries the q-Leibniz expansion of d(ab) into the p-calculus unchanged
    on generic symbols; compare the expansions grade by grade.  Returns the
    smallest left-factor grade where they part ways, if any."""
    if q.modulus != modulus or p.modulus != modulus:
        raise NogoError("root moduli must match")
    if not (q.is_primitive() and p.is_primitive()):
        raise NogoError("both roots must be primitive")
    for i in range(modulus):
        u = Universe(
            modulus,
            [
                Generator("a", i, FREE),
                Generator("b", 1, FREE),
                Generator("da", i + 1, FREE),
                Generator("db", 2, FREE),
            ],
        )
        lead = Element.word(u, ("da", "b"))
        tail = Element.word(u, ("a", "db"))
        under_q = lead + tail.scaled(q.cyc_power(i))
        under_p = lead + tail.scaled(p.cyc_power(i))
        if under_q != under_p:
            return HomomorphismCheck(modulus, q.k, p.k, False, i)
    return HomomorphismCheck(modulus, q.k, p.k, True, None)
