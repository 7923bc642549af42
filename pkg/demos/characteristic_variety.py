"""
Rank-one elements in h0
=======================

A symbol algebra has finite type when the part of g0 acting only on the
lowest grade contains no rank-one matrix, even over the complex numbers.
These examples show the different ways the search can end.
"""

from tanakakit.fintype import char_variety, h0, h0_from_matrices
from tanakakit.gnla import free_gnla, heisenberg
from tanakakit.prolong import tanaka_prolongation


def show(label, h):
    v = char_variety(h)
    print(f"{label:12s} dim h0 = {h.dim}  -> {v.verdict} via {v.stage}: {v.certificate}")
    if v.has_witness:
        print("             p =", [str(x) for x in v.witness_p], " q =", [str(x) for x in v.witness_q])


# contact symbol: h0 is sl(2), which obviously has rank-one elements
show("heisenberg", h0(tanaka_prolongation(heisenberg(), max_degree=0)))

# free step-2 on three generators: h0 vanishes
show("free(3,2)", h0(tanaka_prolongation(free_gnla(3, 2), max_degree=0)))

# rotations: no rank-one element even after complexifying, so the Groebner
# charts all contain 1
show("so(2)", h0_from_matrices(2, [[[0, -1], [1, 0]]]))

# real 2x2 matrices a + bJ: rank one only for a = +-ib, so a certificate but
# no rational witness
show("C", h0_from_matrices(2, [[[1, 0], [0, 1]], [[0, -1], [1, 0]]]))

# here the rank-one element needs sqrt(2)
show("Q(sqrt 2)", h0_from_matrices(2, [[[1, 0], [0, 1]], [[0, 2], [1, 0]]]))
