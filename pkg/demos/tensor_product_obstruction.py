"""Why the braided tensor product of d^N = 0 algebras fails for N > 2.

The braided product twists multiplication by q^{|b1||a2|}.  A candidate
differential on the product has two free phases besides the braiding: the
product-Leibniz parameter p and the cross-term twist s.  Evaluating
d(u v) two ways on free generators and comparing coefficients in the
four-dimensional defect space sweeps out every (q, p, s) choice.

Only the classical sign survives: q = p = s = -1 at N = 2.  From N = 3
on, nothing does.
"""

from qdga.cyclotomic import CycNum, RootExponent
from qdga.expressions import render_cyc
from qdga.nogo import (
    GradeProfile,
    column_survivors,
    homomorphism_forces_equal,
    leibniz_defect,
    solve_nogo,
)

print("== the sweep ==")
for n in range(2, 7):
    result = solve_nogo(n)
    verdict = result.solutions if result.solutions else "empty"
    print(f"  N={n}: admissible exponent triples (q, p, s): {verdict}")

print()
print("== the witness for the cube root ==")
j = RootExponent(3, 1)
profile = GradeProfile(0, 0, 1, 0)
defect = leibniz_defect(j, j, j, profile)
column = defect.first_violating_column()
print(f"  (q, p, s) = (j, j, j) fails at grade profile {profile},")
print(f"  column {column}, defect {render_cyc(defect.components[column - 1], j)} (= 1 - j^2)")

print()
print("== the constraint chain, column by column ==")
# column 2 forces p q = 1, column 3 forces s = q, column 4 forces p = s;
# chaining them leaves p = q = s with q^2 = 1, impossible for a primitive
# root of order > 2
for n in (2, 3, 4):
    one = CycNum.one(n)
    col2 = column_survivors(n, 2)
    assert all(
        CycNum.root_power(n, p) * CycNum.root_power(n, q) == one for q, p, s in col2
    )
    col3 = column_survivors(n, 3)
    assert all(CycNum.root_power(n, s) == CycNum.root_power(n, q) for q, p, s in col3)
    col4 = column_survivors(n, 4)
    assert all(CycNum.root_power(n, p) == CycNum.root_power(n, s) for q, p, s in col4)
    chain = set(col2) & set(col3) & set(col4)
    print(f"  N={n}: |col2|={len(col2)}, |col3|={len(col3)}, |col4|={len(col4)}, "
          f"intersection={sorted(chain) if chain else 'empty'}")

print()
print("== the homomorphism observation ==")
# a differential homomorphism between a q-structure and a p-structure
# forces q = p: the Leibniz phases must agree on some graded element
for n in (3, 4):
    j1 = RootExponent(n, 1)
    for k in range(2, n):
        p = RootExponent(n, k)
        if not p.is_primitive():
            continue
        check = homomorphism_forces_equal(n, j1, p)
        print(f"  N={n}: q=zeta^1 vs p=zeta^{k}: equal={check.equal}, "
              f"witness grade {check.witness_grade}")
