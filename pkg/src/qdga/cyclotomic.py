"""Exact arithmetic in cyclotomic fields and q-deformed combinatorics.

Every scalar in this package is an element of Q(zeta_N), stored as a dense
rational coordinate vector in the power basis 1, q, ..., q^(phi(N)-1) of
Q[q]/(Phi_N(q)).  Phi_N is the minimal polynomial of a primitive N-th root
of unity, so a value is zero exactly when all stored coordinates are zero;
identity checks downstream are exact, never numerical.

Gaussian binomials are computed as polynomials in Z[q] first (by exact
division of the product formula) and only then evaluated at a root, which
sidesteps the vanishing q-factorials in the denominator at roots of unity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class CyclotomicError(ValueError):
    """Invalid field operation: modulus mismatch, division by zero, bad index."""


def _scalar(x):
    # keep integers as plain ints so reprs stay readable
    if isinstance(x, bool):
        raise TypeError("bool is not a polynomial coefficient")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


def _norm(x):
    # like _scalar but for values already known to be int or Fraction
    if type(x) is int:
        return x
    return int(x) if x.denominator == 1 else x


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial over Q, constant term first.

    >>> Poly.of(-1, 1) * Poly.of(1, 1, 1)
    Poly.of(-1, 0, 0, 1)
    >>> divmod(Poly.of(-1, 0, 0, 1), Poly.of(-1, 1))
    (Poly.of(1, 1, 1), Poly.of())
    """

    coeffs: tuple

    @staticmethod
    def of(*coeffs) -> "Poly":
        cs = [_scalar(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return Poly(tuple(cs))

    @staticmethod
    def monomial(power: int, coeff=1) -> "Poly":
        if power < 0:
            raise CyclotomicError("negative monomial power")
        return Poly.of(*([0] * power + [coeff]))

    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Poly.of(*(x + y for x, y in zip(a, b)))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        return Poly.of(*(-c for c in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Poly.of()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly.of(*out)

    __rmul__ = __mul__
    __radd__ = __add__

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise CyclotomicError("polynomial division by zero")
        rem = list(self.coeffs)
        lead = Fraction(other.coeffs[-1])
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly.of(), self
        quot = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            c = Fraction(rem[k + other.degree()]) / lead
            quot[k] = c
            for j, b in enumerate(other.coeffs):
                rem[k + j] -= c * b
        return Poly.of(*quot), Poly.of(*rem)

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise CyclotomicError(f"{other!r} does not divide {self!r} exactly")
        return q

    def evaluate(self, x):
        """Horner evaluation; works for any value supporting * and +."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.of(_scalar(other))

    def __repr__(self):
        return f"Poly.of({', '.join(str(c) for c in self.coeffs)})"


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Poly:
    """N-th cyclotomic polynomial by exact division of q^n - 1.

    q^n - 1 = prod of Phi_d over divisors d of n, so Phi_n is the quotient
    of q^n - 1 by the product over proper divisors.

    >>> cyclotomic_polynomial(1)
    Poly.of(-1, 1)
    >>> cyclotomic_polynomial(3)
    Poly.of(1, 1, 1)
    >>> cyclotomic_polynomial(6)
    Poly.of(1, -1, 1)
    """
    if n < 1:
        raise CyclotomicError("cyclotomic index must be >= 1")
    num = Poly.monomial(n) - 1
    den = Poly.of(1)
    for d in range(1, n):
        if n % d == 0:
            den = den * cyclotomic_polynomial(d)
    return num.exact_div(den)


def euler_totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


@lru_cache(maxsize=None)
def _field_degree(n: int) -> int:
    return cyclotomic_polynomial(n).degree()


@lru_cache(maxsize=None)
def _power_basis(n: int) -> tuple:
    """Coordinates of q^m mod Phi_n for m = 0 .. max(2*(d-1), n-1)."""
    d = _field_degree(n)
    phi = cyclotomic_polynomial(n).coeffs
    rows = [tuple(1 if i == m else 0 for i in range(d)) for m in range(d)]
    top = max(2 * (d - 1), n - 1)
    for _ in range(d, top + 1):
        prev = rows[-1]
        shifted = [0] + list(prev[: d - 1])
        lead = prev[d - 1]
        if lead != 0:
            # q^d = -(phi_0 + phi_1 q + ... + phi_{d-1} q^{d-1}), Phi monic
            for i in range(d):
                shifted[i] -= lead * phi[i]
        rows.append(tuple(_scalar(Fraction(c)) if isinstance(c, Fraction) else c for c in shifted))
    return tuple(rows)


@dataclass(frozen=True)
class CycNum:
    """Element of Q(zeta_n) in the power basis of Q[q]/(Phi_n)."""

    modulus: int
    coeffs: tuple

    def __post_init__(self):
        if self.modulus < 1:
            raise CyclotomicError("modulus must be >= 1")
        if len(self.coeffs) != _field_degree(self.modulus):
            raise CyclotomicError(
                f"expected {_field_degree(self.modulus)} coordinates for modulus {self.modulus}, "
                f"got {len(self.coeffs)}"
            )

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(n: int) -> "CycNum":
        return _zero_cached(n)

    @staticmethod
    def one(n: int) -> "CycNum":
        return CycNum.rational(n, 1)

    @staticmethod
    def rational(n: int, value) -> "CycNum":
        d = _field_degree(n)
        v = value if type(value) is int else _scalar(Fraction(value))
        return CycNum(n, (v,) + (0,) * (d - 1))

    @staticmethod
    def root_power(n: int, k: int) -> "CycNum":
        """zeta_n^k, reduced into the power basis."""
        return _root_power_cached(n, k % n)

    # -- ring structure ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycNum):
            if other.modulus != self.modulus:
                raise CyclotomicError(
                    f"mixed moduli {self.modulus} and {other.modulus}"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return CycNum.rational(self.modulus, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycNum(self.modulus, tuple(_norm(a + b) for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __neg__(self):
        return CycNum(self.modulus, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = len(self.coeffs)
        conv = [0] * (2 * d - 1 if d else 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                if b == 0:
                    continue
                conv[i + j] += a * b
        rows = _power_basis(self.modulus)
        out = list(conv[:d])
        for m in range(d, len(conv)):
            c = conv[m]
            if c == 0:
                continue
            row = rows[m]
            for i in range(d):
                if row[i] != 0:
                    out[i] += c * row[i]
        return CycNum(self.modulus, tuple(_norm(c) for c in out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = CycNum.one(self.modulus)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "CycNum":
        """Field inverse via the extended Euclidean algorithm in Q[q]."""
        if self.is_zero():
            raise CyclotomicError("zero has no inverse")
        a = Poly.of(*self.coeffs)
        b = cyclotomic_polynomial(self.modulus)
        # invariant: r = u*a + v*b (v is never needed)
        r0, r1 = a, b
        u0, u1 = Poly.of(1), Poly.of()
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            u0, u1 = u1, u0 - q * u1
        # r0 is a nonzero constant: a is coprime to the irreducible Phi_n
        g = Fraction(r0.coeffs[0])
        inv = u0 * Fraction(1, 1) * Fraction(g.denominator, g.numerator)
        _, rem = divmod(inv, b)
        cs = list(rem.coeffs) + [0] * (_field_degree(self.modulus) - len(rem.coeffs))
        return CycNum(self.modulus, tuple(_scalar(Fraction(c)) for c in cs))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def conjugate(self) -> "CycNum":
        """Image under zeta -> zeta^(n-1), i.e. complex conjugation."""
        n = self.modulus
        out = CycNum.zero(n)
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            out = out + CycNum.root_power(n, (n - i) % n) * c
        return out

    # -- predicates and views ----------------------------------------------

    def is_zero(self) -> bool:
        # zero ints and zero Fractions are the only falsy coordinates
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self == CycNum.one(self.modulus)

    def as_rational(self):
        """The value as a Fraction when it lies in Q, else None."""
        if any(c != 0 for c in self.coeffs[1:]):
            return None
        return Fraction(self.coeffs[0]) if self.coeffs else Fraction(0)

    def as_pairs(self) -> tuple:
        """Nonzero (coefficient, power) pairs, highest power first."""
        return tuple(
            (Fraction(c), i) for i, c in reversed(list(enumerate(self.coeffs))) if c != 0
        )

    def __repr__(self):
        body = " + ".join(f"{c}*q^{i}" for c, i in reversed(self.as_pairs())) or "0"
        return f"CycNum[{self.modulus}]({body})"


@lru_cache(maxsize=None)
def _zero_cached(n: int) -> CycNum:
    return CycNum(n, (0,) * _field_degree(n))


@lru_cache(maxsize=None)
def _root_power_cached(n: int, k: int) -> CycNum:
    return CycNum(n, _power_basis(n)[k])


@dataclass(frozen=True)
class RootExponent:
    """A root of unity zeta_modulus^k, named by its exponent."""

    modulus: int
    k: int

    def __post_init__(self):
        if self.modulus < 1:
            raise CyclotomicError("modulus must be >= 1")
        object.__setattr__(self, "k", self.k % self.modulus)

    def is_primitive(self) -> bool:
        return math.gcd(self.k, self.modulus) == 1

    def order(self) -> int:
        return self.modulus // math.gcd(self.k, self.modulus)

    def conjugate(self) -> "RootExponent":
        return RootExponent(self.modulus, -self.k)

    def power(self, i: int) -> "RootExponent":
        return RootExponent(self.modulus, self.k * i)

    def as_cyc(self) -> CycNum:
        return CycNum.root_power(self.modulus, self.k)

    def cyc_power(self, i: int) -> CycNum:
        """zeta^(k*i) as a CycNum; i may be negative."""
        return CycNum.root_power(self.modulus, (self.k * i) % self.modulus)


def primitive_exponents(n: int) -> list:
    return [k for k in range(n) if math.gcd(k, n) == 1]


# -- q-combinatorics --------------------------------------------------------


@lru_cache(maxsize=None)
def q_int_poly(n: int) -> Poly:
    """[n]_q = 1 + q + ... + q^(n-1) as a polynomial."""
    if n < 0:
        raise CyclotomicError("q-integer of a negative integer")
    return Poly.of(*([1] * n)) if n else Poly.of()


@lru_cache(maxsize=None)
def q_factorial_poly(n: int) -> Poly:
    """[n]_q! = prod_{i=1..n} (1 - q^i)/(1 - q), as a polynomial."""
    out = Poly.of(1)
    for i in range(1, n + 1):
        out = out * q_int_poly(i)
    return out


@lru_cache(maxsize=None)
def gaussian_binomial_poly(n: int, k: int) -> Poly:
    """[n choose k]_q in Z[q], via exact division of the product formula.

    Computed as prod_{i=1..k} (1 - q^(n-k+i)) / prod_{i=1..k} (1 - q^i);
    the quotient is a genuine polynomial, so no root of unity ever meets a
    vanishing denominator.
    """
    if k < 0 or k > n:
        raise CyclotomicError(f"binomial index {k} out of range for {n}")
    num = Poly.of(1)
    den = Poly.of(1)
    for i in range(1, k + 1):
        num = num * (Poly.of(1) - Poly.monomial(n - k + i))
        den = den * (Poly.of(1) - Poly.monomial(i))
    return num.exact_div(den)


def poly_at_root(p: Poly, root: RootExponent) -> CycNum:
    """Evaluate an integer/rational polynomial at zeta^k, exactly."""
    out = CycNum.zero(root.modulus)
    for i, c in enumerate(p.coeffs):
        if c != 0:
            out = out + root.cyc_power(i) * c
    return out


def q_int(n: int, root: RootExponent) -> CycNum:
    return poly_at_root(q_int_poly(n), root)


def q_factorial(n: int, root: RootExponent) -> CycNum:
    return poly_at_root(q_factorial_poly(n), root)


def q_binomial(n: int, k: int, root: RootExponent) -> CycNum:
    """Gaussian binomial evaluated at a root of unity, polynomial first."""
    return poly_at_root(gaussian_binomial_poly(n, k), root)
