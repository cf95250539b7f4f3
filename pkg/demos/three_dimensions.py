"""
Twelve spheres in three dimensions
==================================

Walks through the chain of checks that bounds k(3) by 12 with a degree-9
polynomial, printing each intermediate quantity.
"""

from kissbound.hbound import (
    REFERENCE_RHOMB_SPLIT,
    REFERENCE_TRIANGLE_GRID,
    ExtensionPolynomial,
    h01,
    h2,
    rhomb_cells,
    triangle_cells,
)
from kissbound.cli import verify_k3
from kissbound.orthopoly import to_gegenbauer
from kissbound.polys import K3_POLY
from kissbound.spherical import CodeProblem, mu_upper_bound, projected_angle

f = K3_POLY
print("f =", f)

# Legendre coefficients: all nonnegative, so f is admissible
exp = to_gegenbauer(f, 3)
print("Legendre coefficients:", [str(c) for c in exp.coeffs])

# f has one root -t0 left of z = 1/2; it decreases before it and is <= 0 after
ep = ExtensionPolynomial.build(f, 3, 0.5)
print(f"t0 = {ep.t0:.7f}, cap radius theta0 = {ep.theta0:.4f} deg")

# points inside the cap project to the equator at least this far apart
ang = projected_angle(0.5, ep.t0)
print(f"projected angle {ang:.3f} deg -> at most {mu_upper_bound(CodeProblem(3, 0.5), ep.t0)} points in the cap")

h0, h1 = h01(ep)
print(f"h0 = {h0:.4f}  h1 = {h1:.4f}  h2 = {h2(ep):.4f}")
for a, b, w in triangle_cells(ep, REFERENCE_TRIANGLE_GRID):
    print(f"  triangle cell [{a:6.2f}, {b:6.2f}]  bound {w:.4f}")
for a, b, w in rhomb_cells(ep, REFERENCE_RHOMB_SPLIT):
    print(f"  rhomb cell    [{a:6.2f}, {b:6.2f}]  bound {w:.4f}")

cert = verify_k3()
print("h_max =", round(cert.h_max, 4), " bound =", round(cert.bound, 4))
for c in cert.checks:
    print(f"  {c.name:28s} {'pass' if c.ok else 'FAIL'}  margin {c.margin:.3g}")
print("conclusion:", cert.conclusion)
