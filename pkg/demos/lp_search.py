"""
Searching for polynomials with linear programming
=================================================

At t0 = 1 the search is the classic Delsarte program.  Lowering t0 lets f
be positive near -1, and E = F0 + f(1) estimates what the extended method
can prove.
"""

import numpy as np

from kissbound.polysearch import SearchConfig, lowered_expansion, search

classic = search(SearchConfig(4, 0.5, 1.0, 9))
print(f"Delsarte, n=4, d=9: f(1) = {classic.E:.4f}")

# E grows with t0; how small t0 may go is limited by mu
for t0 in np.arange(0.59, 0.66, 0.01):
    r = search(SearchConfig(4, 0.5, float(t0), 9, 1000))
    print(f"t0 = {t0:.2f}  E = {r.E:.4f}  {r.status}")

r = search(SearchConfig(4, 0.5, 0.6058, 9))
exp = lowered_expansion(r)
print("E at t0 = 0.6058:", round(r.E, 4))
print("certified coefficients:", np.round([float(c) for c in exp.coeffs], 4))

# nested grids without the straddling cell: E creeps up with N
for N in (250, 500, 1000, 2000):
    print(N, round(search(SearchConfig(4, 0.5, 0.6058, 9, N, straddle=False)).E, 6))
