"""Gaussian binomials and why d^N = 0 is compatible with a Leibniz rule.

The q-binomial [n choose k]_q is an integer polynomial in q.  Evaluated at
a primitive N-th root of unity it vanishes for every 0 < k < N, which is
exactly what makes the iterated q-Leibniz expansion of d^N(ab) collapse
term by term once d^N kills each factor.
"""

from qdga.cyclotomic import (
    CycNum,
    RootExponent,
    gaussian_binomial_poly,
    primitive_exponents,
    q_binomial,
)


def poly_str(poly) -> str:
    pairs = [(c, i) for i, c in enumerate(poly.coeffs) if c]
    chunks = []
    for c, i in reversed(pairs):
        q = "1" if i == 0 else ("q" if i == 1 else f"q^{i}")
        chunks.append(q if c == 1 and i > 0 else (f"{c} {q}" if i > 0 else str(c)))
    return " + ".join(chunks)


print("== the polynomials themselves ==")
for n in range(1, 6):
    row = [poly_str(gaussian_binomial_poly(n, k)) for k in range(n + 1)]
    print(f"  n={n}: " + " | ".join(row))

print()
print("== evaluation at a primitive cube root ==")
from qdga.expressions import render_cyc

j = RootExponent(3, 1)
for k in range(4):
    value = q_binomial(3, k, j)
    print(f"  [3 choose {k}] at j = {render_cyc(value, j)}")

print()
print("== the interior vanishes at every primitive root, N = 2..12 ==")
for n in range(2, 13):
    prim = primitive_exponents(n)
    assert all(
        q_binomial(n, k, RootExponent(n, e)).is_zero()
        for e in prim
        for k in range(1, n)
    )
    print(f"  N={n:>2}: interior entries vanish for all {len(prim)} primitive exponents")

print()
print("== but not at non-primitive roots ==")
# zeta_4^2 = -1 has order 2, and [4 choose 2] there is the integer 2
half_turn = RootExponent(4, 2)
print("  [4 choose 2] at zeta_4^2:", render_cyc(q_binomial(4, 2, half_turn)))
assert q_binomial(4, 2, half_turn) == CycNum.rational(4, 2)
