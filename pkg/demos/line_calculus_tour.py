"""A tour of the order-3 differential calculus on one coordinate.

The calculus lives over Q(j), j a primitive cube root of unity.  d is
nilpotent of order three instead of two, so alongside dx there is an
independent two-form d2x = d(dx), and functions commute past d2x only up
to a first-derivative correction.
"""

from qdga import builtin_calculus
from qdga.differential import star
from qdga.expressions import parse_element, render_element

calc = builtin_calculus("line-j")
render = lambda e: render_element(e, calc.root)
reduce_ = lambda text: render(calc.normalize(parse_element(text, calc)))

print("== normal forms ==")
for text in ("x d2x", "x dx", "dx d2x", "dx dx dx", "x^2 d2x dx"):
    print(f"  {text:12} ->  {reduce_(text)}")

print()
print("== the differential ==")
for text, times in (("x", 1), ("x^2", 1), ("x^2", 2), ("x^2", 3), ("x dx", 1)):
    out = calc.d(parse_element(text, calc), times)
    print(f"  d^{times}({text}) = {render(out)}")

print()
print("== d^3 is identically zero ==")
import random

from qdga.sampling import random_element

rng = random.Random(1)
for _ in range(200):
    e = random_element(calc.universe, rng, terms=3, max_len=5)
    assert calc.d(e, times=3).is_zero()
print("  checked 200 random elements: d^3(e) = 0 exactly")

print()
print("== star structure ==")
ds, table = calc.differential, calc.star_table
for name in ("x", "dx", "d2x"):
    e = calc.atom(name)
    print(f"  star({name}) = {render(star(ds, table, e))}")
# dx is hermitian, d2x anti-hermitian up to the phase j^2

print()
print("== optional truncations ==")
t2 = builtin_calculus("line-j-trunc2")
w = parse_element("d2x d2x x", t2)
print("  trunc2: d2x d2x x ->", render_element(t2.normalize(w), t2.root))
# the induced relation: the ideal of (d2x)^2 also contains d2x dx dx
w2 = parse_element("d2x dx dx", t2)
print("  trunc2: d2x dx dx ->", render_element(t2.normalize(w2), t2.root))
t3 = builtin_calculus("line-j-trunc3")
w3 = parse_element("d2x d2x", t3)
print("  trunc3: d2x d2x   ->", render_element(t3.normalize(w3), t3.root))

print()
print("== the conjugate calculus ==")
bar = builtin_calculus("line-jbar")
print("  line-jbar reduce x d2x ->", render_element(bar.normalize(parse_element("x d2x", bar)), bar.root))

print()
print("== the classical control ==")
classical = builtin_calculus("classical-line")
e = parse_element("x^3", classical)
print("  N=2: d(x^3) =", render_element(classical.d(e), classical.root))
print("  N=2: d^2(x^3) =", render_element(classical.d(e, 2), classical.root))
