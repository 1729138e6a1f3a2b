"""Graded words over a generator alphabet, linear combinations with exact
cyclotomic coefficients, and the rewriting engine that brings them to
canonical form.

Elements are finite sums of words; a word is a tuple of generator names.
Multiplication is plain concatenation and deliberately does NOT normalize:
normalization is a separate, rule-driven step so that the difference between
"the same element written two ways" stays observable (several derivations in
`calculi` depend on exactly that).

The only structural identification applied eagerly is that adjacent
variable-kind atoms commute with each other (functions form a commutative
subalgebra); moving a variable past a form atom always goes through a rule.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import CycNum


class AlgebraError(Exception):
    pass


class RuleError(AlgebraError):
    pass


class NonTerminatingError(AlgebraError):
    def __init__(self, word, fuel):
        super().__init__(
            f"rewriting exceeded the fuel budget ({fuel} applications per term); "
            f"still reducible: {' '.join(word)}"
        )
        self.word = word
        self.fuel = fuel


FORM = "form"
VARIABLE = "variable"
FREE = "free"
_KINDS = (FORM, VARIABLE, FREE)

# sentinel returned by Universe.atom_derivative when the derivative is 1
DERIV_ONE = object()


@dataclass(frozen=True)
class Generator:
    """A named atom of the alphabet.

    kind "form" is a grade >= 1 one-sided symbol (dx, d2x, ...); "variable"
    is a grade-0 coordinate or function symbol, commuting with other
    variables; "free" is a noncommuting abstract symbol of any grade >= 0,
    used for generic coefficient derivations.

    A variable may carry a derivative chain: derivative_name names the atom
    standing for its formal derivative with respect to chain_var.  Plain
    coordinates leave both unset and differentiate to 1 against themselves.
    """

    name: str
    grade: int
    kind: str = FORM
    derivative_name: str | None = None
    chain_var: str | None = None

    def __post_init__(self):
        if not self.name:
            raise AlgebraError("generator name must be nonempty")
        if self.kind not in _KINDS:
            raise AlgebraError(f"unknown generator kind {self.kind!r}")
        if self.kind == VARIABLE and self.grade != 0:
            raise AlgebraError(f"variable {self.name} must have grade 0")
        if self.kind == FORM and self.grade < 1:
            raise AlgebraError(f"form {self.name} must have grade >= 1")
        if self.kind == FREE and self.grade < 0:
            raise AlgebraError(f"free symbol {self.name} must have grade >= 0")
        if self.derivative_name is not None and self.kind != VARIABLE:
            raise AlgebraError("only variables carry derivative chains")
        if (self.derivative_name is None) != (self.chain_var is None):
            raise AlgebraError("derivative_name and chain_var go together")


class Universe:
    """A fixed alphabet of generators over Q(zeta_modulus)."""

    def __init__(self, modulus: int, generators):
        self.modulus = modulus
        self._gens = tuple(generators)
        self._by_name = {}
        for g in self._gens:
            if g.name in self._by_name:
                raise AlgebraError(f"duplicate generator {g.name}")
            self._by_name[g.name] = g
        for g in self._gens:
            if g.derivative_name is not None:
                if g.derivative_name not in self._by_name:
                    raise AlgebraError(
                        f"{g.name} names unknown derivative {g.derivative_name}"
                    )
                if g.chain_var not in self._by_name:
                    raise AlgebraError(f"{g.name} differentiates against unknown {g.chain_var}")

    @property
    def generators(self):
        return self._gens

    def names(self):
        return tuple(g.name for g in self._gens)

    def __contains__(self, name):
        return name in self._by_name

    def generator(self, name: str) -> Generator:
        try:
            return self._by_name[name]
        except KeyError:
            raise AlgebraError(f"unknown generator {name!r}") from None

    def grade_of(self, name: str) -> int:
        return self.generator(name).grade

    def kind_of(self, name: str) -> str:
        return self.generator(name).kind

    def word_grade(self, word) -> int:
        return sum(self.grade_of(a) for a in word)

    def sort_word(self, word) -> tuple:
        """Sort each maximal run of adjacent variables; leave the rest."""
        out = []
        i = 0
        n = len(word)
        while i < n:
            if self.kind_of(word[i]) == VARIABLE:
                j = i
                while j < n and self.kind_of(word[j]) == VARIABLE:
                    j += 1
                out.extend(sorted(word[i:j]))
                i = j
            else:
                out.append(word[i])
                i += 1
        return tuple(out)

    def atom_derivative(self, name: str, wrt: str):
        """Formal derivative of one variable atom: DERIV_ONE, None (zero), or
        the name of the chained derivative symbol."""
        g = self.generator(name)
        if g.kind != VARIABLE:
            raise AlgebraError(f"{name} is not a variable")
        if g.derivative_name is not None:
            return g.derivative_name if g.chain_var == wrt else None
        return DERIV_ONE if name == wrt else None

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Universe)
            and self.modulus == other.modulus
            and self._gens == other._gens
        )

    def __hash__(self):
        return hash((self.modulus, self._gens))

    def __repr__(self):
        return f"Universe(N={self.modulus}, {', '.join(self.names())})"


def _coerce_coeff(modulus: int, c) -> CycNum:
    if isinstance(c, CycNum):
        if c.modulus != modulus:
            raise AlgebraError(f"coefficient modulus {c.modulus} != universe modulus {modulus}")
        return c
    if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
        return CycNum.rational(modulus, c)
    raise AlgebraError(f"cannot use {type(c).__name__} as a coefficient")


class Element:
    """Linear combination of words with CycNum coefficients."""

    __slots__ = ("universe", "_terms")

    def __init__(self, universe: Universe, terms=None, *, _canonical=False):
        self.universe = universe
        if _canonical:
            self._terms = terms or {}
            return
        merged = {}
        for word, coeff in (terms or {}).items():
            word = tuple(word)
            for a in word:
                universe.generator(a)
            word = universe.sort_word(word)
            c = _coerce_coeff(universe.modulus, coeff)
            if word in merged:
                c = merged[word] + c
            merged[word] = c
        self._terms = {w: c for w, c in merged.items() if not c.is_zero()}

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(universe: Universe) -> "Element":
        return Element(universe, {}, _canonical=True)

    @staticmethod
    def scalar(universe: Universe, c) -> "Element":
        return Element(universe, {(): c})

    @staticmethod
    def one(universe: Universe) -> "Element":
        return Element.scalar(universe, 1)

    @staticmethod
    def word(universe: Universe, atoms, coeff=1) -> "Element":
        return Element(universe, {tuple(atoms): coeff})

    # -- linear structure ----------------------------------------------------

    def _check(self, other: "Element"):
        if not isinstance(other, Element):
            raise AlgebraError(f"expected Element, got {type(other).__name__}")
        if other.universe != self.universe:
            raise AlgebraError("elements live over different universes")

    def __add__(self, other):
        self._check(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return Element(self.universe, out, _canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Element(
            self.universe, {w: -c for w, c in self._terms.items()}, _canonical=True
        )

    def scaled(self, c) -> "Element":
        c = _coerce_coeff(self.universe.modulus, c)
        if c.is_zero():
            return Element.zero(self.universe)
        return Element(
            self.universe, {w: x * c for w, x in self._terms.items()}, _canonical=True
        )

    def __mul__(self, other):
        if isinstance(other, Element):
            self._check(other)
            out = {}
            for w1, c1 in self._terms.items():
                for w2, c2 in other._terms.items():
                    w = self.universe.sort_word(w1 + w2)
                    c = c1 * c2
                    s = out.get(w)
                    s = c if s is None else s + c
                    out[w] = s
            return Element(
                self.universe,
                {w: c for w, c in out.items() if not c.is_zero()},
                _canonical=True,
            )
        return self.scaled(other)

    def __rmul__(self, other):
        # scalars commute with everything; Element*Element handled above
        return self.scaled(other)

    # -- views ----------------------------------------------------------------

    def items(self):
        return self._terms.items()

    def sorted_terms(self):
        """Terms in canonical order: by grade, then by word."""
        return sorted(
            self._terms.items(), key=lambda t: (self.universe.word_grade(t[0]), t[0])
        )

    def coefficient(self, word) -> CycNum:
        word = self.universe.sort_word(tuple(word))
        return self._terms.get(word, CycNum.zero(self.universe.modulus))

    def is_zero(self) -> bool:
        return not self._terms

    def support(self):
        return set(self._terms)

    def grade_decompose(self) -> dict:
        out = {}
        for w, c in self._terms.items():
            g = self.universe.word_grade(w)
            out.setdefault(g, {})[w] = c
        return {
            g: Element(self.universe, terms, _canonical=True)
            for g, terms in sorted(out.items())
        }

    def grades(self):
        return sorted({self.universe.word_grade(w) for w in self._terms})

    def is_homogeneous(self) -> bool:
        return len(self.grades()) <= 1

    def homogeneous_grade(self) -> int:
        gs = self.grades()
        if len(gs) != 1:
            raise AlgebraError("element is not homogeneous and nonzero")
        return gs[0]

    def map_coefficients(self, fn) -> "Element":
        out = {w: fn(c) for w, c in self._terms.items()}
        return Element(
            self.universe, {w: c for w, c in out.items() if not c.is_zero()}, _canonical=True
        )

    def transport(self, universe: Universe) -> "Element":
        """The same combination of words read over another universe."""
        for w in self._terms:
            for a in w:
                g = self.universe.generator(a)
                h = universe.generator(a)
                if (g.grade, g.kind) != (h.grade, h.kind):
                    raise AlgebraError(f"generator {a} differs between universes")
        if universe.modulus != self.universe.modulus:
            raise AlgebraError("universes have different moduli")
        return Element(universe, dict(self._terms))

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.universe == other.universe
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.universe, frozenset(self._terms.items())))

    def __repr__(self):
        from .expressions import render_element

        return f"<{render_element(self)}>"


def formal_derivative(element: Element, var: str) -> Element:
    """Exact formal partial derivative of a purely functional element."""
    u = element.universe
    u.generator(var)
    out = Element.zero(u)
    for word, c in element.items():
        for a in word:
            if u.kind_of(a) != VARIABLE:
                raise AlgebraError(f"cannot differentiate word containing {a}")
        for i, a in enumerate(word):
            d = u.atom_derivative(a, var)
            if d is None:
                continue
            rest = word[:i] + word[i + 1 :] if d is DERIV_ONE else word[:i] + (d,) + word[i + 1 :]
            out = out + Element.word(u, rest, c)
    return out


# -- rewrite rules ------------------------------------------------------------


@dataclass(frozen=True)
class Wildcard:
    """Pattern slot matching a single variable atom (optionally restricted)."""

    allowed: frozenset | None = None

    def admits(self, name: str, universe: Universe) -> bool:
        if universe.kind_of(name) != VARIABLE:
            return False
        return self.allowed is None or name in self.allowed


class _Marker:
    def __init__(self, label):
        self._label = label

    def __repr__(self):
        return self._label


# replacement-template stand-ins for the matched function and its derivative
FUNC = _Marker("F")
FUNC_PRIME = _Marker("F'")


def _atom_key(a):
    if isinstance(a, str):
        return (0, a)
    return (1, repr(a))


@dataclass(frozen=True)
class RewriteRule:
    name: str
    pattern: tuple
    replacement: tuple  # ((CycNum, (atom, ...)), ...)
    deriv_var: str | None = None


def make_rule(name, pattern, replacement, deriv_var=None) -> RewriteRule:
    """Build a rule with the replacement in a deterministic term order."""
    repl = tuple(
        sorted(
            ((c, tuple(atoms)) for c, atoms in replacement),
            key=lambda t: tuple(_atom_key(a) for a in t[1]),
        )
    )
    return RewriteRule(name, tuple(pattern), repl, deriv_var)


class RuleSet:
    """An ordered rule list over one universe, validated at construction."""

    def __init__(self, universe: Universe, rules, fuel: int = 10_000):
        self.universe = universe
        self.rules = tuple(rules)
        self.fuel = fuel
        if fuel < 1:
            raise RuleError("fuel must be positive")
        for r in self.rules:
            self._validate(r)

    def _validate(self, rule: RewriteRule):
        u = self.universe
        if not rule.pattern:
            raise RuleError(f"rule {rule.name}: empty pattern")
        wilds = [a for a in rule.pattern if isinstance(a, Wildcard)]
        if len(wilds) > 1:
            raise RuleError(f"rule {rule.name}: at most one function wildcard")
        lhs_grade = 0
        for a in rule.pattern:
            if isinstance(a, Wildcard):
                if a.allowed:
                    for v in a.allowed:
                        if u.kind_of(v) != VARIABLE:
                            raise RuleError(f"rule {rule.name}: wildcard over non-variable {v}")
                continue
            if u.kind_of(a) != FORM:
                raise RuleError(
                    f"rule {rule.name}: concrete pattern atoms must be forms, got {a}"
                )
            lhs_grade += u.grade_of(a)
        uses_prime = any(
            atom is FUNC_PRIME for _, atoms in rule.replacement for atom in atoms
        )
        if uses_prime and rule.deriv_var is None:
            raise RuleError(f"rule {rule.name}: F' needs a derivation variable")
        if (uses_prime or wilds) and rule.deriv_var is not None:
            u.generator(rule.deriv_var)
        for c, atoms in rule.replacement:
            if not isinstance(c, CycNum) or c.modulus != u.modulus:
                raise RuleError(f"rule {rule.name}: replacement coefficients must be CycNum mod {u.modulus}")
            if c.is_zero():
                raise RuleError(f"rule {rule.name}: zero replacement term")
            g = 0
            for a in atoms:
                if a is FUNC or a is FUNC_PRIME:
                    if not wilds:
                        raise RuleError(f"rule {rule.name}: template references a missing wildcard")
                    continue
                g += u.grade_of(a)
            if g != lhs_grade:
                raise RuleError(
                    f"rule {rule.name}: replacement grade {g} != pattern grade {lhs_grade}"
                )

    def with_rules(self, extra) -> "RuleSet":
        return RuleSet(self.universe, self.rules + tuple(extra), self.fuel)

    def __eq__(self, other):
        return (
            isinstance(other, RuleSet)
            and self.universe == other.universe
            and self.rules == other.rules
            and self.fuel == other.fuel
        )

    def __hash__(self):
        return hash((self.universe, self.rules, self.fuel))


def _match_at(rule: RewriteRule, word, pos, universe):
    """Try to match at pos; return (matched_variable_or_None,) or None."""
    if pos + len(rule.pattern) > len(word):
        return None
    matched = None
    for off, pat in enumerate(rule.pattern):
        atom = word[pos + off]
        if isinstance(pat, Wildcard):
            if not pat.admits(atom, universe):
                return None
            matched = atom
        elif pat != atom:
            return None
    return (matched,)


def _instantiate(rule: RewriteRule, word, pos, matched, universe):
    """Replacement terms for one application, as (coeff, word) pairs."""
    pre = word[:pos]
    post = word[pos + len(rule.pattern):]
    out = []
    for coeff, atoms in rule.replacement:
        new = []
        dead = False
        for a in atoms:
            if a is FUNC:
                new.append(matched)
            elif a is FUNC_PRIME:
                d = universe.atom_derivative(matched, rule.deriv_var)
                if d is None:
                    dead = True
                    break
                if d is not DERIV_ONE:
                    new.append(d)
            else:
                new.append(a)
        if not dead:
            out.append((coeff, pre + tuple(new) + post))
    return out


def _first_redex(word, ruleset: RuleSet):
    for pos in range(len(word)):
        for idx, rule in enumerate(ruleset.rules):
            m = _match_at(rule, word, pos, ruleset.universe)
            if m is not None:
                return pos, idx, m[0]
    return None


def _all_redexes(word, ruleset: RuleSet):
    out = []
    for pos in range(len(word)):
        for idx, rule in enumerate(ruleset.rules):
            m = _match_at(rule, word, pos, ruleset.universe)
            if m is not None:
                out.append((pos, idx, m[0]))
    return out


def _rewrite(element: Element, ruleset: RuleSet, chooser) -> Element:
    if element.universe != ruleset.universe:
        raise AlgebraError("element and rule set live over different universes")
    u = ruleset.universe
    acc: dict = {}
    stack = [(u.sort_word(w), c) for w, c in element.items()]
    budget = ruleset.fuel * max(1, len(stack))
    while stack:
        word, coeff = stack.pop()
        red = chooser(word)
        if red is None:
            s = acc.get(word)
            s = coeff if s is None else s + coeff
            acc[word] = s
            continue
        budget -= 1
        if budget < 0:
            raise NonTerminatingError(word, ruleset.fuel)
        pos, idx, matched = red
        for rc, rw in _instantiate(ruleset.rules[idx], word, pos, matched, u):
            stack.append((u.sort_word(rw), coeff * rc))
    return Element(
        element.universe,
        {w: c for w, c in acc.items() if not c.is_zero()},
        _canonical=True,
    )


def normalize(element: Element, ruleset: RuleSet) -> Element:
    """Canonical normal form: leftmost-innermost redex, first matching rule."""
    if not ruleset.rules:
        # element words are kept sort_word-canonical by every constructor
        if element.universe != ruleset.universe:
            raise AlgebraError("element and rule set live over different universes")
        return element
    return _rewrite(element, ruleset, lambda w: _first_redex(w, ruleset))


def normalize_randomized(element: Element, ruleset: RuleSet, rng: random.Random) -> Element:
    """Normal form under a randomized redex/rule choice (confluence probe)."""

    def chooser(word):
        redexes = _all_redexes(word, ruleset)
        return rng.choice(redexes) if redexes else None

    return _rewrite(element, ruleset, chooser)


@dataclass
class OrderIndependenceReport:
    checked: int
    trials: int
    discrepancies: list

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def summary(self) -> str:
        state = "ok" if self.ok else f"{len(self.discrepancies)} discrepancies"
        return f"order-independence: {state} ({self.checked} samples x {self.trials} trials)"


def check_order_independence(
    ruleset: RuleSet, samples, *, trials: int = 3, seed: int = 0
) -> OrderIndependenceReport:
    """Empirical confluence check: canonical vs randomized strategies."""
    rng = random.Random(seed)
    checked = 0
    bad = []
    for sample in samples:
        checked += 1
        base = normalize(sample, ruleset)
        for _ in range(trials):
            alt = normalize_randomized(sample, ruleset, rng)
            if alt != base:
                bad.append((sample, base, alt))
                break
    return OrderIndependenceReport(checked, trials, bad)
