"""Shipped differential calculi and the derivations that justify them.

The central objects are the two cube-root line calculi (one per primitive
root), the classical square-root line as a control, and a partial plane
construction.  `derive_line_relations` re-derives the line rewrite rules
mechanically from nothing but d(f) = dx f', the graded Leibniz rule and
d^3 = 0, and checks the result against what ships; `plane_constraints`
differentiates the degree-0 plane relations to expose the commutation
constraints the plane would have to satisfy; `check_not_anyonic` shows no
braided tensor product of two lines satisfies them at order 3, while the
classical order-2 case does.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import (
    FORM,
    VARIABLE,
    AlgebraError,
    Element,
    Generator,
    RuleSet,
    RewriteRule,
    Universe,
    Wildcard,
    FUNC,
    FUNC_PRIME,
    formal_derivative,
    make_rule,
    normalize,
    _instantiate,
)
from .cyclotomic import CycNum, RootExponent
from .differential import DifferentialStructure, apply_d, star
from .tensor import TensorContext, TensorElement, embed_left, embed_right


class CalculusError(AlgebraError):
    pass


class DerivationError(CalculusError):
    def __init__(self, step: str, detail: str, residual=None):
        super().__init__(f"derivation failed at {step}: {detail}")
        self.step = step
        self.residual = residual


@dataclass
class Calculus:
    """A universe, its rule set, the differential, and an optional star."""

    label: str
    rules: RuleSet
    differential: DifferentialStructure
    star_table: dict | None = None

    def __post_init__(self):
        if self.differential.ruleset != self.rules:
            raise CalculusError("differential must normalize with the calculus rules")

    @property
    def universe(self) -> Universe:
        return self.rules.universe

    @property
    def root(self) -> RootExponent:
        return self.differential.root

    @property
    def modulus(self) -> int:
        return self.universe.modulus

    def atom(self, name: str) -> Element:
        return Element.word(self.universe, (name,))

    def normalize(self, e: Element) -> Element:
        return normalize(e, self.rules)

    def d(self, e: Element, times: int = 1) -> Element:
        for _ in range(times):
            e = apply_d(self.differential, e)
        return normalize(e, self.rules) if times == 0 else e

    def star(self, e: Element) -> Element:
        if self.star_table is None:
            raise CalculusError(f"{self.label} has no star structure")
        return star(self.differential, self.star_table, e)


# -- the line calculi ----------------------------------------------------------


def line_calculus(root: RootExponent, *, var: str = "x", truncation: int | None = None) -> Calculus:
    """Order-3 line calculus: one coordinate, d applied up to twice.

    Rules: functions move right past the one-form freely, past the two-form
    at the cost of a (root - 1) dx dx f' correction, the one-form cubes to
    zero, and the one-form exchanges with the two-form at the root phase.
    truncation (2 or 3) additionally kills that power of the two-form.
    """
    if root.modulus != 3 or not root.is_primitive():
        raise CalculusError("line calculus needs a primitive cube root")
    if truncation not in (None, 2, 3):
        raise CalculusError("truncation must be 2, 3 or None")
    dv, d2v = "d" + var, "d2" + var
    u = Universe(
        3,
        [
            Generator(var, 0, VARIABLE),
            Generator(dv, 1, FORM),
            Generator(d2v, 2, FORM),
        ],
    )
    one = CycNum.one(3)
    rules = [
        make_rule(
            f"move-function-past-{dv}",
            (Wildcard(), dv),
            [(one, (dv, FUNC))],
        ),
        make_rule(
            f"move-function-past-{d2v}",
            (Wildcard(), d2v),
            [(one, (d2v, FUNC)), (root.as_cyc() - 1, (dv, dv, FUNC_PRIME))],
            deriv_var=var,
        ),
        make_rule(f"{dv}-cubed-vanishes", (dv, dv, dv), []),
        make_rule(f"exchange-{dv}-{d2v}", (dv, d2v), [(root.as_cyc(), (d2v, dv))]),
    ]
    label = {1: "line-j", 2: "line-jbar"}[root.k]
    if truncation is not None:
        rules.append(
            make_rule(f"{d2v}-power-{truncation}-vanishes", (d2v,) * truncation, [])
        )
        if truncation == 2:
            # the two-sided ideal of (d2v)^2 also swallows d2v dv dv:
            # commuting a function past (d2v)^2 leaves (root-1)(1+root^2)
            # d2v dv dv f', and that coefficient is a unit; the matching
            # factor for the cube truncation is (root-1)(1+root+root^2) = 0,
            # so truncation=3 needs no companion rule
            rules.append(
                make_rule(f"{d2v}-{dv}-{dv}-vanishes", (d2v, dv, dv), [])
            )
        label += f"-trunc{truncation}"
    rs = RuleSet(u, rules)
    ds = DifferentialStructure(
        root,
        {
            var: Element.word(u, (dv,)),
            dv: Element.word(u, (d2v,)),
            d2v: Element.zero(u),
        },
        rs,
    )
    table = {
        var: Element.word(u, (var,)),
        dv: Element.word(u, (dv,)),
        d2v: Element.word(u, (d2v,), root.cyc_power(2)),
    }
    return Calculus(label, rs, ds, table)


def classical_line_calculus(var: str = "x") -> Calculus:
    """The order-2 de Rham line: d^2 = 0, functions commute with dx, dx^2 = 0."""
    dv = "d" + var
    u = Universe(2, [Generator(var, 0, VARIABLE), Generator(dv, 1, FORM)])
    one = CycNum.one(2)
    rs = RuleSet(
        u,
        [
            make_rule(f"move-function-past-{dv}", (Wildcard(), dv), [(one, (dv, FUNC))]),
            make_rule(f"{dv}-squared-vanishes", (dv, dv), []),
        ],
    )
    root = RootExponent(2, 1)
    ds = DifferentialStructure(
        root,
        {var: Element.word(u, (dv,)), dv: Element.zero(u)},
        rs,
    )
    table = {var: Element.word(u, (var,)), dv: Element.word(u, (dv,))}
    return Calculus("classical-line", rs, ds, table)


_BUILTINS = {
    "line-j": lambda: line_calculus(RootExponent(3, 1)),
    "line-jbar": lambda: line_calculus(RootExponent(3, 2)),
    "line-j-trunc2": lambda: line_calculus(RootExponent(3, 1), truncation=2),
    "line-j-trunc3": lambda: line_calculus(RootExponent(3, 1), truncation=3),
    "line-jbar-trunc2": lambda: line_calculus(RootExponent(3, 2), truncation=2),
    "line-jbar-trunc3": lambda: line_calculus(RootExponent(3, 2), truncation=3),
    "classical-line": lambda: classical_line_calculus(),
}


def builtin_names() -> list:
    return sorted(_BUILTINS)


def builtin_calculus(name: str) -> Calculus:
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise CalculusError(
            f"unknown calculus {name!r}; built-ins: {', '.join(builtin_names())}"
        ) from None


# -- mechanical rederivation of the line rules ---------------------------------


@dataclass
class DerivationStep:
    description: str
    residual: Element | None
    extracted: RewriteRule | None
    notes: dict = field(default_factory=dict)


@dataclass
class LineDerivation:
    root: RootExponent
    steps: list
    rules: RuleSet
    cube_coefficient: CycNum
    exchange_coefficient: CycNum
    matches_shipped: bool


def _derivation_universe() -> Universe:
    # f, g are opaque functions of x; primes name their formal derivatives
    return Universe(
        3,
        [
            Generator("x", 0, VARIABLE),
            Generator("f", 0, VARIABLE, "f'", "x"),
            Generator("f'", 0, VARIABLE, "f''", "x"),
            Generator("f''", 0, VARIABLE, "f'''", "x"),
            Generator("f'''", 0, VARIABLE),
            Generator("g", 0, VARIABLE, "g'", "x"),
            Generator("g'", 0, VARIABLE),
            Generator("dx", 1, FORM),
            Generator("d2x", 2, FORM),
        ],
    )


def _abstract_template(element: Element, mapping: dict, step: str):
    """Turn concrete residual terms into a rule replacement template."""
    out = []
    for word, coeff in element.sorted_terms():
        atoms = []
        for a in word:
            if a in mapping:
                atoms.append(mapping[a])
            elif element.universe.kind_of(a) == FORM:
                atoms.append(a)
            else:
                raise DerivationError(step, f"unexpected symbol {a} in extracted rule", element)
        out.append((coeff, tuple(atoms)))
    return out


def derive_line_relations(root: RootExponent) -> LineDerivation:
    """Rebuild the line rewrite rules from d(f) = dx f', Leibniz and d^3 = 0.

    The chain: comparing the two evaluations of d(fg) forces functions past
    the one-form; differentiating that relation forces them past the
    two-form with the (root - 1) correction; differentiating once more and
    splitting the residual by the independent symbols f'' and f' yields the
    cube relation and the exchange relation.  Raises DerivationError with
    the offending residual if any step refuses to factor as expected.
    """
    if root.modulus != 3 or not root.is_primitive():
        raise CalculusError("the derivation runs at a primitive cube root")
    u = _derivation_universe()
    dx = Element.word(u, ("dx",))

    def action():
        return {
            "x": dx,
            "f": Element.word(u, ("dx", "f'")),
            "f'": Element.word(u, ("dx", "f''")),
            "f''": Element.word(u, ("dx", "f'''")),
            "g": Element.word(u, ("dx", "g'")),
            "dx": Element.word(u, ("d2x",)),
            "d2x": Element.zero(u),
        }

    steps = []
    one = CycNum.one(3)

    # step 1: d(fg) via the Leibniz extension vs dx (fg)'
    ds0 = DifferentialStructure(root, action(), RuleSet(u, ()))
    fg = Element.word(u, ("f", "g"))
    residual = apply_d(ds0, fg, normalize_input=False) - dx * formal_derivative(fg, "x")
    factored = (Element.word(u, ("f", "dx")) - Element.word(u, ("dx", "f"))) * Element.word(u, ("g'",))
    if residual != factored:
        raise DerivationError("step 1", "d(fg) mismatch does not factor as (f dx - dx f) g'", residual)
    rule1 = make_rule("move-function-past-dx", (Wildcard(), "dx"), [(one, ("dx", FUNC))])
    steps.append(
        DerivationStep(
            "comparing d(fg) computed by the Leibniz extension against dx (fg)' "
            "leaves (f dx - dx f) g'; functions must move past the one-form",
            residual,
            rule1,
        )
    )

    # step 2: differentiate f dx = dx f
    ds1 = DifferentialStructure(root, action(), RuleSet(u, (rule1,)))
    residual = apply_d(ds1, Element.word(u, ("f", "dx")), normalize_input=False) - apply_d(
        ds1, Element.word(u, ("dx", "f")), normalize_input=False
    )
    lead = residual.coefficient(("f", "d2x"))
    if lead.is_zero():
        raise DerivationError("step 2", "no f d2x term to solve for", residual)
    rest = residual - Element.word(u, ("f", "d2x"), lead)
    rhs = (-rest).scaled(lead.inverse())
    rule2 = make_rule(
        "move-function-past-d2x",
        (Wildcard(), "d2x"),
        _abstract_template(rhs, {"f": FUNC, "f'": FUNC_PRIME}, "step 2"),
        deriv_var="x",
    )
    steps.append(
        DerivationStep(
            "differentiating f dx = dx f isolates f d2x; functions move past "
            "the two-form with a first-derivative correction",
            residual,
            rule2,
        )
    )

    # step 3: differentiate the new relation, using d(d2x) = 0 (d^3 = 0)
    rs2 = RuleSet(u, (rule1, rule2))
    ds2 = DifferentialStructure(root, action(), rs2)
    lhs = Element.word(u, ("f", "d2x"))
    rhs_inst = Element.zero(u)
    for c, w in _instantiate(rule2, ("f", "d2x"), 0, "f", u):
        rhs_inst = rhs_inst + Element.word(u, w, c)
    residual = apply_d(ds2, lhs, normalize_input=False) - apply_d(ds2, rhs_inst, normalize_input=False)

    groups: dict = {}
    for word, coeff in residual.items():
        if not word or u.kind_of(word[-1]) != VARIABLE:
            raise DerivationError("step 3", f"term {' '.join(word)} has no function tail", residual)
        if any(u.kind_of(a) != FORM for a in word[:-1]):
            raise DerivationError("step 3", f"term {' '.join(word)} is not forms-then-function", residual)
        grp = groups.setdefault(word[-1], {})
        grp[word[:-1]] = coeff
    if set(groups) != {"f'", "f''"}:
        raise DerivationError("step 3", f"expected f' and f'' groups, got {sorted(groups)}", residual)

    cube_terms = groups["f''"]
    if set(cube_terms) != {("dx", "dx", "dx")}:
        raise DerivationError("step 3", f"f'' multiplies {sorted(cube_terms)}", residual)
    cube_coefficient = cube_terms[("dx", "dx", "dx")]
    rule3 = make_rule("dx-cubed-vanishes", ("dx", "dx", "dx"), [])
    steps.append(
        DerivationStep(
            "differentiating the two-form relation and splitting by the "
            "independent symbols: the f'' part forces dx dx dx = 0",
            residual,
            rule3,
            notes={"cube_coefficient": cube_coefficient},
        )
    )

    pair_terms = groups["f'"]
    if set(pair_terms) != {("dx", "d2x"), ("d2x", "dx")}:
        raise DerivationError("step 3", f"f' multiplies {sorted(pair_terms)}", residual)
    lead = pair_terms[("dx", "d2x")]
    other = pair_terms[("d2x", "dx")]
    exchange_coefficient = -other / lead
    rule4 = make_rule(
        "exchange-dx-d2x", ("dx", "d2x"), [(exchange_coefficient, ("d2x", "dx"))]
    )
    steps.append(
        DerivationStep(
            "the f' part relates the two orderings of dx and d2x; dividing "
            "out the leading coefficient orients the exchange",
            None,
            rule4,
            notes={"exchange_coefficient": exchange_coefficient},
        )
    )

    derived = RuleSet(
        Universe(
            3,
            [
                Generator("x", 0, VARIABLE),
                Generator("dx", 1, FORM),
                Generator("d2x", 2, FORM),
            ],
        ),
        (rule1, rule2, rule3, rule4),
    )
    shipped = line_calculus(root).rules
    matches = derived.rules == shipped.rules
    return LineDerivation(root, steps, derived, cube_coefficient, exchange_coefficient, matches)


# -- the plane -----------------------------------------------------------------


def plane_fragment(root: RootExponent) -> Calculus:
    """Two embedded lines plus the degree-0 cross relations; NOT closed.

    Words like x d2y stay stuck on purpose: the commutation of a coordinate
    with the other axis's two-form is exactly what plane_constraints
    derives, and no closure is assumed here.
    """
    if root.modulus != 3 or not root.is_primitive():
        raise CalculusError("the plane fragment is built at a primitive cube root")
    u = Universe(
        3,
        [
            Generator("x", 0, VARIABLE),
            Generator("y", 0, VARIABLE),
            Generator("dx", 1, FORM),
            Generator("dy", 1, FORM),
            Generator("d2x", 2, FORM),
            Generator("d2y", 2, FORM),
        ],
    )
    one = CycNum.one(3)
    rules = []
    for v in ("x", "y"):
        dv, d2v = "d" + v, "d2" + v
        rules.append(
            make_rule(
                f"move-{v}-past-{d2v}",
                (Wildcard(frozenset({v})), d2v),
                [(one, (d2v, FUNC)), (root.as_cyc() - 1, (dv, dv, FUNC_PRIME))],
                deriv_var=v,
            )
        )
        rules.append(make_rule(f"{dv}-cubed-vanishes", (dv, dv, dv), []))
        rules.append(
            make_rule(f"exchange-{dv}-{d2v}", (dv, d2v), [(root.as_cyc(), (d2v, dv))])
        )
    for w in ("dx", "dy"):
        rules.append(
            make_rule(f"move-function-past-{w}", (Wildcard(), w), [(one, (w, FUNC))])
        )
    rs = RuleSet(u, rules)
    ds = DifferentialStructure(
        root,
        {
            "x": Element.word(u, ("dx",)),
            "y": Element.word(u, ("dy",)),
            "dx": Element.word(u, ("d2x",)),
            "dy": Element.word(u, ("d2y",)),
            "d2x": Element.zero(u),
            "d2y": Element.zero(u),
        },
        rs,
    )
    label = {1: "plane-j", 2: "plane-jbar"}[root.k]
    return Calculus(label, rs, ds, None)


def _classical_plane_fragment() -> Calculus:
    u = Universe(
        2,
        [
            Generator("x", 0, VARIABLE),
            Generator("y", 0, VARIABLE),
            Generator("dx", 1, FORM),
            Generator("dy", 1, FORM),
        ],
    )
    one = CycNum.one(2)
    rules = []
    for w in ("dx", "dy"):
        rules.append(
            make_rule(f"move-function-past-{w}", (Wildcard(), w), [(one, (w, FUNC))])
        )
        rules.append(make_rule(f"{w}-squared-vanishes", (w, w), []))
    rs = RuleSet(u, rules)
    ds = DifferentialStructure(
        RootExponent(2, 1),
        {
            "x": Element.word(u, ("dx",)),
            "y": Element.word(u, ("dy",)),
            "dx": Element.zero(u),
            "dy": Element.zero(u),
        },
        rs,
    )
    return Calculus("classical-plane", rs, ds, None)


@dataclass
class PlaneConstraint:
    """lhs (pure one-form words) must equal rhs (coordinate/two-form words)."""

    source: str
    lhs: Element
    rhs: Element

    def residual(self) -> Element:
        return self.lhs - self.rhs


def _constraints_of(frag: Calculus) -> list:
    u = frag.universe
    out = []
    for v, w in (("x", "dy"), ("y", "dx")):
        delta = apply_d(frag.differential, Element.word(u, (v, w)), normalize_input=False) - apply_d(
            frag.differential, Element.word(u, (w, v)), normalize_input=False
        )
        lhs = Element.zero(u)
        rhs = Element.zero(u)
        for word, c in delta.items():
            if word and all(
                u.kind_of(a) == FORM and u.grade_of(a) == 1 for a in word
            ):
                lhs = lhs + Element.word(u, word, c)
            else:
                rhs = rhs + Element.word(u, word, -c)
        out.append(PlaneConstraint(f"{v} {w} = {w} {v}", lhs, rhs))
    return out


def plane_constraints(root: RootExponent) -> list:
    """Differentiate the degree-0 plane relations into the open commutation
    constraints between the two axes' forms."""
    return _constraints_of(plane_fragment(root))


@dataclass
class AnyonicVerdict:
    root: RootExponent
    sources: list
    per_constraint: list
    solutions: list

    @property
    def realizable(self) -> bool:
        return bool(self.solutions)

    def summary(self) -> str:
        parts = [
            f"constraint '{src}': braiding exponents {sol or '{}'}"
            for src, sol in zip(self.sources, self.per_constraint)
        ]
        verdict = (
            f"realizable with braiding exponents {self.solutions}"
            if self.realizable
            else "no braiding satisfies all constraints: not of anyonic origin"
        )
        return "; ".join(parts) + "; " + verdict


def check_not_anyonic(root: RootExponent) -> AnyonicVerdict:
    """Can a braided product of two lines carry the plane's constraints?

    Sweeps every braiding exponent of the modulus.  Right-hand sides vanish
    in the tensor product because grade-0 factors commute across it (their
    braiding phase has exponent 0), so each constraint pins down the
    braiding directly.  Order 3 leaves the two constraints contradictory;
    order 2 (the classical plane) is satisfied by the sign braiding.
    """
    n = root.modulus
    if n == 3:
        if not root.is_primitive():
            raise CalculusError("need a primitive cube root")
        frag = plane_fragment(root)
        a, b = line_calculus(root, var="x"), line_calculus(root, var="y")
    elif n == 2:
        frag = _classical_plane_fragment()
        a, b = classical_line_calculus("x"), classical_line_calculus("y")
    else:
        raise CalculusError("only moduli 2 and 3 have shipped line factors")
    constraints = _constraints_of(frag)
    u = frag.universe
    per = [[] for _ in constraints]
    for k in range(n):
        ctx = TensorContext(a.rules, b.rules, RootExponent(n, k))

        def image(e: Element) -> TensorElement:
            out = TensorElement.zero(ctx)
            for word, c in e.items():
                term = TensorElement.one(ctx)
                for atom in word:
                    if atom in a.universe:
                        term = term * embed_left(ctx, Element.word(a.universe, (atom,)))
                    else:
                        term = term * embed_right(ctx, Element.word(b.universe, (atom,)))
                out = out + term.scaled(c)
            return out

        for i, con in enumerate(constraints):
            if (image(con.lhs) - image(con.rhs)).is_zero():
                per[i].append(k)
    solutions = sorted(set(per[0]).intersection(*per[1:])) if per else []
    return AnyonicVerdict(root, [c.source for c in constraints], per, solutions)
