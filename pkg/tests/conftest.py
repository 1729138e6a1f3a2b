"""Shared helpers for the test suite."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from qdga.cyclotomic import CycNum


def to_complex(c: CycNum) -> complex:
    """Numeric value of a cyclotomic number, for oracle comparisons only."""
    zeta = cmath.exp(2j * math.pi / c.modulus)
    return sum(Fraction(co) * zeta**i for i, co in enumerate(c.coeffs))


def close(a: complex, b: complex, tol: float = 1e-9) -> bool:
    return abs(a - b) <= tol
