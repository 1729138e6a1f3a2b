"""Surface syntax for elements and calculi.

Covers four jobs: a lexer/parser for the expression grammar

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor+
    factor := scalar | atom ('^' nat)? | '(' expr ')'
    atom   := IDENT | 'd(' expr ')'
    scalar := RATIONAL | 'q' ('^' INT)?

(juxtaposition is multiplication, whitespace-insensitive, IDENTs may carry
trailing primes); canonical rendering with terms sorted by (grade, word);
JSON serialization of elements; and the line-oriented calculus document
format used by the CLI for import and export.

The letter q always denotes the calculus's configured root.  Rendering
writes scalars as polynomials in that same root (exponents are remapped
through the inverse exponent when the root is not the canonical primitive
one), which keeps parse(render(e)) == e exact for every calculus.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    FORM,
    FREE,
    VARIABLE,
    AlgebraError,
    Element,
    Generator,
    RuleSet,
    Universe,
    Wildcard,
    FUNC,
    FUNC_PRIME,
    make_rule,
)
from .calculi import Calculus, CalculusError
from .cyclotomic import CycNum, Poly, RootExponent
from .differential import DifferentialStructure, apply_d


class ParseError(Exception):
    """Syntax or symbol error, annotated with a character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.message = message
        self.position = position


class DocumentError(Exception):
    """Calculus document error, annotated with a line number."""

    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.message = message
        self.lineno = lineno


# -- lexer ---------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", one of "+-^()", or "end"
    value: object
    position: int


_NUM_RE = re.compile(r"\d+(?:/\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*'*")


def tokenize(text: str) -> list:
    out = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            m = _NUM_RE.match(text, i)
            try:
                value = Fraction(m.group())
            except ZeroDivisionError:
                raise ParseError("zero denominator", i) from None
            out.append(Token("num", value, i))
            i = m.end()
            continue
        if ch.isalpha() or ch == "_":
            m = _IDENT_RE.match(text, i)
            out.append(Token("ident", m.group(), i))
            i = m.end()
            continue
        if ch in "+-^()":
            out.append(Token(ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    out.append(Token("end", "", n))
    return out


# -- syntax tree ----------------------------------------------------------------


@dataclass(frozen=True)
class ScalarNode:
    value: Fraction
    position: int


@dataclass(frozen=True)
class RootPowerNode:
    exponent: int
    position: int


@dataclass(frozen=True)
class AtomNode:
    name: str
    position: int


@dataclass(frozen=True)
class PowerNode:
    base: AtomNode
    exponent: int
    position: int


@dataclass(frozen=True)
class DApplyNode:
    inner: object
    position: int


@dataclass(frozen=True)
class ProductNode:
    factors: tuple
    position: int


@dataclass(frozen=True)
class SumNode:
    terms: tuple  # ((sign, node), ...)
    position: int


def _describe(t: Token) -> str:
    return "end of input" if t.kind == "end" else repr(t.value)


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self, kind=None) -> Token:
        t = self.tokens[self.i]
        if kind is not None and t.kind != kind:
            raise ParseError(f"expected {kind!r}, found {_describe(t)}", t.position)
        self.i += 1
        return t

    def parse_expr(self):
        pos = self.peek().position
        sign = 1
        if self.peek().kind == "-":
            self.take()
            sign = -1
        terms = [(sign, self.parse_term())]
        while self.peek().kind in ("+", "-"):
            op = self.take()
            terms.append((1 if op.kind == "+" else -1, self.parse_term()))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return SumNode(tuple(terms), pos)

    def parse_term(self):
        pos = self.peek().position
        factors = [self.parse_factor()]
        while self.peek().kind in ("num", "ident", "("):
            factors.append(self.parse_factor())
        if len(factors) == 1:
            return factors[0]
        return ProductNode(tuple(factors), pos)

    def parse_factor(self):
        t = self.peek()
        if t.kind == "num":
            self.take()
            return ScalarNode(t.value, t.position)
        if t.kind == "(":
            self.take()
            inner = self.parse_expr()
            self.take(")")
            return inner
        if t.kind == "ident":
            self.take()
            if t.value == "q":
                if self.peek().kind == "^":
                    self.take()
                    return RootPowerNode(self._signed_int(), t.position)
                return RootPowerNode(1, t.position)
            if t.value == "d" and self.peek().kind == "(":
                self.take()
                inner = self.parse_expr()
                self.take(")")
                return DApplyNode(inner, t.position)
            node = AtomNode(t.value, t.position)
            if self.peek().kind == "^":
                self.take()
                return PowerNode(node, self._nat(), t.position)
            return node
        raise ParseError(
            f"expected a scalar, symbol or parenthesis, found {_describe(t)}",
            t.position,
        )

    def _signed_int(self) -> int:
        sign = 1
        if self.peek().kind == "-":
            self.take()
            sign = -1
        t = self.take("num")
        if t.value.denominator != 1:
            raise ParseError("exponent must be an integer", t.position)
        return sign * int(t.value)

    def _nat(self) -> int:
        t = self.take("num")
        if t.value.denominator != 1:
            raise ParseError("power must be a whole number", t.position)
        return int(t.value)


def parse_text(text: str):
    """Text to syntax tree; no symbol resolution yet."""
    p = _Parser(tokenize(text))
    node = p.parse_expr()
    tail = p.peek()
    if tail.kind != "end":
        raise ParseError(f"unexpected trailing {_describe(tail)}", tail.position)
    return node


def _walk_atoms(node):
    if isinstance(node, AtomNode):
        yield node
    elif isinstance(node, PowerNode):
        yield node.base
    elif isinstance(node, DApplyNode):
        yield from _walk_atoms(node.inner)
    elif isinstance(node, ProductNode):
        for f in node.factors:
            yield from _walk_atoms(f)
    elif isinstance(node, SumNode):
        for _, t in node.terms:
            yield from _walk_atoms(t)


def parse(text: str, calculus: Calculus):
    """Parse and resolve every identifier against the calculus."""
    node = parse_text(text)
    for atom in _walk_atoms(node):
        if atom.name not in calculus.universe:
            raise ParseError(f"unknown symbol {atom.name!r}", atom.position)
    return node


def evaluate_node(node, universe: Universe, root: RootExponent, differential=None) -> Element:
    """Syntax tree to Element; d(...) needs a differential to act with."""
    if isinstance(node, ScalarNode):
        return Element.scalar(universe, node.value)
    if isinstance(node, RootPowerNode):
        return Element.scalar(universe, root.cyc_power(node.exponent))
    if isinstance(node, AtomNode):
        if node.name not in universe:
            raise ParseError(f"unknown symbol {node.name!r}", node.position)
        return Element.word(universe, (node.name,))
    if isinstance(node, PowerNode):
        if node.base.name not in universe:
            raise ParseError(f"unknown symbol {node.base.name!r}", node.base.position)
        return Element.word(universe, (node.base.name,) * node.exponent)
    if isinstance(node, DApplyNode):
        if differential is None:
            raise ParseError("d(...) is not available in this context", node.position)
        return apply_d(differential, evaluate_node(node.inner, universe, root, differential))
    if isinstance(node, ProductNode):
        out = Element.one(universe)
        for f in node.factors:
            out = out * evaluate_node(f, universe, root, differential)
        return out
    if isinstance(node, SumNode):
        out = Element.zero(universe)
        for sign, t in node.terms:
            piece = evaluate_node(t, universe, root, differential)
            out = out + (piece if sign == 1 else -piece)
        return out
    raise ParseError(f"unrecognized syntax node {type(node).__name__}", 0)


def parse_element(text: str, calculus: Calculus) -> Element:
    node = parse(text, calculus)
    return evaluate_node(node, calculus.universe, calculus.root, calculus.differential)


def parse_tensor(text: str, context, left: Calculus, right: Calculus):
    """`a ox b`: factor expressions evaluated in their own calculi."""
    from .tensor import TensorElement

    if left.rules != context.left_rules or right.rules != context.right_rules:
        raise ParseError("factor calculi do not match the tensor context", 0)
    tokens = tokenize(text)
    depth = 0
    split = None
    for idx, t in enumerate(tokens):
        if t.kind == "(":
            depth += 1
        elif t.kind == ")":
            depth -= 1
        elif t.kind == "ident" and t.value == "ox" and depth == 0:
            if split is not None:
                raise ParseError("more than one top-level 'ox'", t.position)
            split = idx
    if split is None:
        raise ParseError("expected 'ox' between the tensor factors", len(text))
    left_tokens = tokens[:split] + [Token("end", "", tokens[split].position)]
    right_tokens = tokens[split + 1:]

    def side(toks, calc):
        p = _Parser(toks)
        node = p.parse_expr()
        tail = p.peek()
        if tail.kind != "end":
            raise ParseError(f"unexpected trailing {_describe(tail)}", tail.position)
        return evaluate_node(node, calc.universe, calc.root, calc.differential)

    return TensorElement.pair(context, side(left_tokens, left), side(right_tokens, right))


# -- rendering -------------------------------------------------------------------


def _root_pairs(c: CycNum, root: RootExponent | None):
    """Nonzero (coefficient, exponent) pairs of c as a polynomial in the
    given root, highest exponent first.  The stored basis runs over powers
    of the canonical primitive root; for root zeta^k the exponents remap
    through the inverse of k, which is a bijection, so no terms merge."""
    pairs = c.as_pairs()
    if root is None or root.k == 1:
        return pairs
    n = root.modulus
    if math.gcd(root.k, n) != 1:
        raise CalculusError("rendering root must be primitive")
    inv = pow(root.k, -1, n)
    mapped = [(coeff, (p * inv) % n) for coeff, p in pairs]
    return tuple(sorted(mapped, key=lambda t: -t[1]))


def _magnitude(c: Fraction, power: int) -> str:
    if power == 0:
        return str(c)
    q = "q" if power == 1 else f"q^{power}"
    return q if c == 1 else f"{c} {q}"


def render_cyc(c: CycNum, root: RootExponent | None = None) -> str:
    """Scalar as a signed polynomial in q, highest power first."""
    pairs = _root_pairs(c, root)
    if not pairs:
        return "0"
    chunks = []
    for i, (coeff, power) in enumerate(pairs):
        neg = coeff < 0
        mag = _magnitude(-coeff if neg else coeff, power)
        if i == 0:
            chunks.append("-" + mag if neg else mag)
        else:
            chunks.append(("- " if neg else "+ ") + mag)
    return " ".join(chunks)


def _word_text(universe: Universe, word, atom_name=None) -> str:
    """Space-joined atoms; adjacent equal variables group as powers."""
    name = atom_name or (lambda a: a)
    parts = []
    i = 0
    while i < len(word):
        a = word[i]
        if universe.kind_of(a) == VARIABLE:
            j = i
            while j < len(word) and word[j] == a:
                j += 1
            parts.append(name(a) if j - i == 1 else f"{name(a)}^{j - i}")
            i = j
        else:
            parts.append(name(a))
            i += 1
    return " ".join(parts)


def _term_text(coeff: CycNum, body: str, root, solo: bool):
    """(negative, text) for one rendered term; sign extracted only for
    single-pair coefficients."""
    pairs = _root_pairs(coeff, root)
    if not body:
        if len(pairs) == 1:
            c, p = pairs[0]
            neg = c < 0
            return neg, _magnitude(-c if neg else c, p)
        text = render_cyc(coeff, root)
        return False, text if solo else f"({text})"
    if len(pairs) == 1:
        c, p = pairs[0]
        neg = c < 0
        mag = -c if neg else c
        if mag == 1 and p == 0:
            return neg, body
        return neg, f"{_magnitude(mag, p)} {body}"
    return False, f"({render_cyc(coeff, root)}) {body}"


def _join_terms(rendered) -> str:
    chunks = []
    for i, (neg, body) in enumerate(rendered):
        if i == 0:
            chunks.append("-" + body if neg else body)
        else:
            chunks.append(("- " if neg else "+ ") + body)
    return " ".join(chunks)


def render_element(e: Element, root: RootExponent | None = None) -> str:
    """Canonical text: terms by (grade, word), scalars in powers of q."""
    terms = e.sorted_terms()
    if not terms:
        return "0"
    solo = len(terms) == 1
    u = e.universe
    rendered = [
        _term_text(c, _word_text(u, w), root, solo) for w, c in terms
    ]
    return _join_terms(rendered)


def render_tensor(t, root: RootExponent | None = None) -> str:
    terms = t.sorted_terms()
    if not terms:
        return "0"
    ctx = t.context
    solo = len(terms) == 1
    rendered = []
    for (wa, wb), c in terms:
        left = _word_text(ctx.left_universe, wa) or "1"
        right = _word_text(ctx.right_universe, wb) or "1"
        rendered.append(_term_text(c, f"{left} ox {right}", root, solo))
    return _join_terms(rendered)


# -- JSON forms -------------------------------------------------------------------


def cyc_to_json(c: CycNum, root: RootExponent | None = None) -> list:
    return [[str(coeff), power] for coeff, power in _root_pairs(c, root)]


def poly_to_json(p: Poly) -> list:
    return [
        [str(Fraction(c)), i]
        for i, c in reversed(list(enumerate(p.coeffs)))
        if c != 0
    ]


def element_to_json(e: Element, root: RootExponent | None = None) -> list:
    """Terms as {"coeff": [[rational, power], ...], "word": [...], "func": {...}}.

    The trailing run of variable atoms renders as the "func" monomial; the
    rest of the word stays in "word" order.
    """
    u = e.universe
    out = []
    for word, coeff in e.sorted_terms():
        cut = len(word)
        while cut > 0 and u.kind_of(word[cut - 1]) == VARIABLE:
            cut -= 1
        head, tail = word[:cut], word[cut:]
        func = {_word_text(u, tail): "1"} if tail else {}
        out.append(
            {"coeff": cyc_to_json(coeff, root), "word": list(head), "func": func}
        )
    return out


def tensor_to_json(t, root: RootExponent | None = None) -> list:
    out = []
    for (wa, wb), c in t.sorted_terms():
        out.append(
            {"coeff": cyc_to_json(c, root), "left": list(wa), "right": list(wb)}
        )
    return out


def render_rule(rule, root: RootExponent | None = None, wildcard_name: str = "F") -> str:
    """One rewrite rule in the document surface syntax."""
    lhs = " ".join(
        wildcard_name if isinstance(a, Wildcard) else a for a in rule.pattern
    )
    if not rule.replacement:
        return f"{lhs} -> 0"
    rendered = []
    for coeff, atoms in rule.replacement:
        names = []
        for a in atoms:
            if a is FUNC:
                names.append(wildcard_name)
            elif a is FUNC_PRIME:
                names.append(_marker_prime(wildcard_name))
            else:
                names.append(a)
        rendered.append(_term_text(coeff, " ".join(names), root, False))
    return f"{lhs} -> {_join_terms(rendered)}"


# -- calculus documents ------------------------------------------------------------


@dataclass(frozen=True)
class _WildcardSpec:
    name: str
    allowed: frozenset | None
    wrt: str | None


def _marker_prime(name: str) -> str:
    return name + "'"


def load_calculus_text(text: str) -> Calculus:
    """Parse the line-oriented calculus document format.

    Directives: `calculus <label>`, `root <N> <k>`, `generator <name>
    <grade> <form|variable>`, `wildcard <name> [only <atoms...>] [wrt
    <var>]`, `rule <name>: <pattern> -> <expr>`, `d <name> = <expr>`,
    `star <name> = <expr>`.  `#` starts a comment; order of sections is
    free but generators and wildcards must precede the rules using them.
    """
    label = None
    root_spec = None
    gens = []
    wildcards: dict = {}
    rule_lines = []
    action_lines = []
    star_lines = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "calculus":
            if not rest:
                raise DocumentError("calculus directive needs a label", lineno)
            label = rest
        elif head == "root":
            parts = rest.split()
            if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
                raise DocumentError("root directive needs '<N> <k>'", lineno)
            n, k = int(parts[0]), int(parts[1])
            if n < 2 or math.gcd(k % n, n) != 1:
                raise DocumentError(f"root exponent {k} mod {n} is not primitive", lineno)
            root_spec = (n, k)
        elif head == "generator":
            parts = rest.split()
            if len(parts) != 3 or not parts[1].lstrip("-").isdigit():
                raise DocumentError("generator directive needs '<name> <grade> <kind>'", lineno)
            name, grade, kind = parts[0], int(parts[1]), parts[2]
            if kind not in (FORM, VARIABLE):
                raise DocumentError(f"generator kind must be form or variable, got {kind!r}", lineno)
            gens.append((name, grade, kind, lineno))
        elif head == "wildcard":
            parts = rest.split()
            if not parts:
                raise DocumentError("wildcard directive needs a name", lineno)
            name = parts[0]
            allowed = None
            wrt = None
            i = 1
            if i < len(parts) and parts[i] == "only":
                i += 1
                names = []
                while i < len(parts) and parts[i] != "wrt":
                    names.append(parts[i])
                    i += 1
                if not names:
                    raise DocumentError("'only' needs at least one atom", lineno)
                allowed = frozenset(names)
            if i < len(parts) and parts[i] == "wrt":
                if i + 2 != len(parts):
                    raise DocumentError("'wrt' needs exactly one variable", lineno)
                wrt = parts[i + 1]
                i += 2
            if i != len(parts):
                raise DocumentError(f"unexpected token {parts[i]!r} in wildcard directive", lineno)
            if name in wildcards:
                raise DocumentError(f"duplicate wildcard {name}", lineno)
            wildcards[name] = _WildcardSpec(name, allowed, wrt)
        elif head == "rule":
            name, sep, body = rest.partition(":")
            name = name.strip()
            if not sep or not name:
                raise DocumentError("rule directive needs '<name>: <pattern> -> <expr>'", lineno)
            lhs, arrow, rhs = body.partition("->")
            if not arrow:
                raise DocumentError("rule needs '->' between pattern and replacement", lineno)
            rule_lines.append((name, lhs.strip(), rhs.strip(), lineno))
        elif head in ("d", "star"):
            target, sep, expr = rest.partition("=")
            target = target.strip()
            expr = expr.strip()
            if not sep or not target or not expr:
                raise DocumentError(f"{head} directive needs '<name> = <expr>'", lineno)
            (action_lines if head == "d" else star_lines).append((target, expr, lineno))
        else:
            raise DocumentError(f"unknown directive {head!r}", lineno)

    if root_spec is None:
        raise DocumentError("missing root directive", len(text.splitlines()) + 1)
    if label is None:
        raise DocumentError("missing calculus directive", len(text.splitlines()) + 1)
    n, k = root_spec
    try:
        root = RootExponent(n, k)
        universe = Universe(n, [Generator(nm, g, kd) for nm, g, kd, _ in gens])
    except Exception as exc:
        raise DocumentError(str(exc), gens[0][3] if gens else 1) from None

    for w in wildcards.values():
        if w.name in universe:
            raise DocumentError(f"wildcard {w.name} collides with a generator", 1)
        if w.allowed:
            for a in w.allowed:
                if a not in universe:
                    raise DocumentError(f"wildcard {w.name} restricted to unknown atom {a}", 1)
        if w.wrt is not None and w.wrt not in universe:
            raise DocumentError(f"wildcard {w.name} differentiates against unknown {w.wrt}", 1)

    scratch_gens = [Generator(nm, g, kd) for nm, g, kd, _ in gens]
    for w in wildcards.values():
        scratch_gens.append(Generator(w.name, 0, FREE))
        scratch_gens.append(Generator(_marker_prime(w.name), 0, FREE))
    scratch = Universe(n, scratch_gens)

    rules = []
    for name, lhs_text, rhs_text, lineno in rule_lines:
        pattern = []
        used_wild = None
        for tok in lhs_text.split():
            if tok in wildcards:
                if used_wild is not None:
                    raise DocumentError(f"rule {name}: more than one wildcard in the pattern", lineno)
                used_wild = wildcards[tok]
                pattern.append(Wildcard(used_wild.allowed))
            elif tok in universe:
                pattern.append(tok)
            else:
                raise DocumentError(f"rule {name}: unknown pattern atom {tok!r}", lineno)
        try:
            node = parse_text(rhs_text)
            rhs = evaluate_node(node, scratch, root)
        except ParseError as exc:
            raise DocumentError(f"rule {name}: {exc}", lineno) from None
        replacement = []
        uses_prime = False
        for word, coeff in rhs.sorted_terms():
            atoms = []
            for a in word:
                if used_wild is not None and a == used_wild.name:
                    atoms.append(FUNC)
                elif used_wild is not None and a == _marker_prime(used_wild.name):
                    atoms.append(FUNC_PRIME)
                    uses_prime = True
                elif a in wildcards or (a.endswith("'") and a[:-1] in wildcards):
                    raise DocumentError(
                        f"rule {name}: wildcard {a} does not appear in the pattern", lineno
                    )
                else:
                    atoms.append(a)
            replacement.append((coeff, tuple(atoms)))
        deriv_var = None
        if uses_prime:
            if used_wild.wrt is None:
                raise DocumentError(
                    f"rule {name}: {used_wild.name}' needs 'wrt' on the wildcard", lineno
                )
            deriv_var = used_wild.wrt
        rules.append(make_rule(name, tuple(pattern), replacement, deriv_var))

    try:
        ruleset = RuleSet(universe, rules)
    except AlgebraError as exc:
        raise DocumentError(str(exc), rule_lines[0][3] if rule_lines else 1) from None

    action = {}
    for target, expr, lineno in action_lines:
        if target not in universe:
            raise DocumentError(f"d of unknown generator {target!r}", lineno)
        try:
            action[target] = evaluate_node(parse_text(expr), universe, root)
        except ParseError as exc:
            raise DocumentError(str(exc), lineno) from None
    table = None
    if star_lines:
        table = {}
        for target, expr, lineno in star_lines:
            if target not in universe:
                raise DocumentError(f"star of unknown generator {target!r}", lineno)
            try:
                table[target] = evaluate_node(parse_text(expr), universe, root)
            except ParseError as exc:
                raise DocumentError(str(exc), lineno) from None

    try:
        ds = DifferentialStructure(root, action, ruleset)
        return Calculus(label, ruleset, ds, table)
    except AlgebraError as exc:
        raise DocumentError(str(exc), 1) from None


def load_calculus_file(path: str) -> Calculus:
    with open(path, encoding="utf-8") as fh:
        return load_calculus_text(fh.read())


_WILDCARD_NAMES = ("F", "G", "H", "K", "L", "M")


def dump_calculus(calc: Calculus) -> str:
    """Emit the document format; load_calculus_text inverts this exactly."""
    u = calc.universe
    lines = [f"calculus {calc.label}", f"root {calc.root.modulus} {calc.root.k}"]
    for g in u.generators:
        if g.kind not in (FORM, VARIABLE) or g.derivative_name is not None:
            raise CalculusError(f"generator {g.name} has no document form")
        lines.append(f"generator {g.name} {g.grade} {g.kind}")

    # one wildcard per (restriction, derivation variable) pair in use
    specs = []  # [(allowed, wrt), ...] in order of first use
    rule_wild = {}
    for r in calc.rules.rules:
        wilds = [a for a in r.pattern if isinstance(a, Wildcard)]
        if not wilds:
            continue
        allowed = wilds[0].allowed
        primed = any(
            atom is FUNC_PRIME for _, atoms in r.replacement for atom in atoms
        )
        wrt = r.deriv_var if primed else None
        idx = None
        for i, (al, wr) in enumerate(specs):
            if al != allowed:
                continue
            if wrt is None or wr is None or wr == wrt:
                idx = i
                if wr is None and wrt is not None:
                    specs[i] = (al, wrt)
                break
        if idx is None:
            specs.append((allowed, wrt))
            idx = len(specs) - 1
        rule_wild[r.name] = idx
    if len(specs) > len(_WILDCARD_NAMES):
        raise CalculusError("too many distinct wildcards to name")
    for i, (allowed, wrt) in enumerate(specs):
        parts = [f"wildcard {_WILDCARD_NAMES[i]}"]
        if allowed:
            parts.append("only " + " ".join(sorted(allowed)))
        if wrt is not None:
            parts.append(f"wrt {wrt}")
        lines.append(" ".join(parts))

    root = calc.root
    for r in calc.rules.rules:
        wname = _WILDCARD_NAMES[rule_wild[r.name]] if r.name in rule_wild else None
        lhs = " ".join(wname if isinstance(a, Wildcard) else a for a in r.pattern)
        if not r.replacement:
            rhs = "0"
        else:
            rendered = []
            for coeff, atoms in r.replacement:
                names = []
                for a in atoms:
                    if a is FUNC:
                        names.append(wname)
                    elif a is FUNC_PRIME:
                        names.append(_marker_prime(wname))
                    else:
                        names.append(a)
                rendered.append(_term_text(coeff, " ".join(names), root, False))
            rhs = _join_terms(rendered)
        lines.append(f"rule {r.name}: {lhs} -> {rhs}")

    for g in u.generators:
        if g.name in calc.differential.action:
            value = calc.differential.action[g.name]
            lines.append(f"d {g.name} = {render_element(value, root)}")
    if calc.star_table is not None:
        for g in u.generators:
            if g.name in calc.star_table:
                lines.append(f"star {g.name} = {render_element(calc.star_table[g.name], root)}")
    return "\n".join(lines) + "\n"
