"""
Infinite symmetry and Goursat chains
====================================

Two sources of infinite-dimensional symmetry: Goursat distributions, which
always come from prolonging a smaller one, and products with jet spaces
where any f(w) d/dw lifts to a symmetry.
"""

from tanakakit import models
from tanakakit.fieldalg import PointQ
from tanakakit.flag import derived_flag, flag_at
from tanakakit.modelio import parse_expression
from tanakakit.symcheck import is_symmetry

# prolonging the plane k times gives the jet space of curves
m = models.trivial_base(2)
for k in range(1, 5):
    m = models.prolong_rank2(m)
    df = derived_flag(m.frame)
    p = PointQ.origin(m.coords)
    w = models.deprolongation_witness(df, p)
    print(k, flag_at(df, p).growth, "goursat:", models.goursat_test(df, p),
          "cauchy direction:", [str(c) for c in w.direction] if w else None)

# the Monge model has no such direction
jm = models.monge(1, 3)
print("E13 witness:", models.deprolongation_witness(derived_flag(jm.frame), PointQ.origin(jm.chart)))

# E13 times second jets of w: every f(w) d/dw prolongs to a symmetry
prod = models.product_with_jets(jm, 2)
for expr in ("1", "w", "w^2", "w^3", "w^5 - 3*w"):
    f = parse_expression(f"({expr})*d/dx", prod.chart).components[0]
    X = models.prolonged_w_field(prod, f)
    print(f"f = {expr:10s} symmetry: {is_symmetry(X, prod.frame)}")

# rank-3 prolongation of type II, applied twice
r3 = models.prolong_rank3(models.prolong_rank3(models.trivial_base(3), "II"), "II")
print("II twice:", flag_at(derived_flag(r3.frame), PointQ.origin(r3.coords)).growth)
