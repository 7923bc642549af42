"""
Free nilpotent symbols
======================

Dimensions of free truncated Lie algebras, and what the prolongation of a
free symbol says about how many symmetries a generic distribution can have.
"""

from tanakakit.gnla import free_gnla, free_total_dim, witt_dim
from tanakakit.fintype import symmetry_bound_free
from tanakakit.prolong import tanaka_prolongation

# graded dimensions from the Moebius formula
for n in (2, 3, 4):
    print(n, [witt_dim(n, k) for k in range(1, 7)])

# n = 2, step 2 is the contact case: the prolongation never stops
pro = tanaka_prolongation(free_gnla(2, 2), max_degree=5)
print("contact:", pro.dims, pro.status)

# everything else terminates, and the bound is attained
for n, k in [(3, 2), (4, 2), (2, 3), (3, 3), (2, 4)]:
    pro = tanaka_prolongation(free_gnla(n, k))
    print(f"free({n},{k}): m = {free_total_dim(n, k):2d}  g_k = {pro.dims}  "
          f"total = {pro.total_dim}  bound = {symmetry_bound_free(n, k)}")
