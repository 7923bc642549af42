"""
The Monge equation y' = (z''')^2
================================

Walk through the rank-2 distribution of this equation on R^6: its derived
flag, the graded symbol algebra, the Tanaka prolongation and the eleven
polynomial symmetries that realise it.
"""

from tanakakit import models
from tanakakit.fieldalg import PointQ
from tanakakit.fintype import finiteness_report
from tanakakit.flag import derived_flag, flag_at
from tanakakit.gnla import gnla_at
from tanakakit.prolong import tanaka_prolongation
from tanakakit.symcheck import closure, filtration_degree, is_symmetry

jm, syms = models.e13_with_symmetries()
origin = PointQ.origin(jm.chart)
for X in jm.frame:
    print("frame field:", X)

# the derived flag grows by 2, 1, 2, 1 until it fills the tangent space
df = derived_flag(jm.frame)
fp = flag_at(df, origin)
print("growth", fp.growth, "cumulative", fp.cumulative)

# symbol algebra at the origin and its prolongation, which stops at degree 2
m = gnla_at(df, origin, fp)
pro = tanaka_prolongation(m)
print("prolongation dims", pro.dims, "total", pro.total_dim)

# every listed field is a symmetry; the degree read off from iterated
# brackets agrees with the grade each field was declared with
for s in syms:
    print(f"{s.name:3s} symmetry={is_symmetry(s.field, jm.frame)} "
          f"degree={filtration_degree(s.field, df, origin)} declared={s.grade}")

# the eleven fields close into a Lie algebra with constant structure constants
sa = closure([s.field for s in syms], jm.frame, [s.name for s in syms])
print("closed:", sa.closed, "dim:", sa.dim, "jacobi:", sa.jacobi)
print("[Z3, S0] =", {k: str(c) for k, c in sa.to_dict()["structure"]["[Z3,S0]"].items()})

# the packaged report puts it all together
rep = finiteness_report(jm.model)
print("verdict:", rep.finiteness_verdict, "bound:", rep.theorem1_bound)
