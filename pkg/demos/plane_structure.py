"""Two coordinates: a consistent d^3 = 0 fragment that is not a tensor product.

Postulating x y = y x, extending each coordinate's line calculus, and
differentiating the commutation relation twice produces mixed-form
constraints.  Matching them against what a braided tensor product would
enforce shows no braiding exponent satisfies both: the plane structure
exists, but it is not of anyonic origin.
"""

from qdga.algebra import Element
from qdga.calculi import check_not_anyonic, plane_constraints, plane_fragment
from qdga.cyclotomic import RootExponent
from qdga.expressions import render_element

j = RootExponent(3, 1)
frag = plane_fragment(j)
render = lambda e: render_element(e, j)

print("== the fragment ==")
print("  generators:", " ".join(sorted(g.name for g in frag.universe.generators)))
xy = Element.word(frag.universe, ("x", "y"))
print("  d(x y)   =", render(frag.d(xy)))
print("  d^2(x y) =", render(frag.d(xy, 2)))
print("  d^3(x y) =", render(frag.d(xy, 3)))

print()
print("== cross-coordinate words are deliberately left alone ==")
stuck = Element.word(frag.universe, ("x", "d2y"))
print("  normalize(x d2y) =", render(frag.normalize(stuck)), " (no rule moves x past d2y)")
moved = Element.word(frag.universe, ("x", "d2x"))
print("  normalize(x d2x) =", render(frag.normalize(moved)))

print()
print("== constraints forced by differentiating x y = y x ==")
for c in plane_constraints(j):
    print(f"  from {c.source}:  {render(c.lhs)} = {render(c.rhs)}")

print()
print("== is it an anyonic tensor product? ==")
for k, label in ((1, "j"), (2, "jbar")):
    verdict = check_not_anyonic(RootExponent(3, k))
    print(f"  {label}: {verdict.summary()}")

print()
print("== the N=2 control is a tensor product ==")
control = check_not_anyonic(RootExponent(2, 1))
print(f"  {control.summary()}")
