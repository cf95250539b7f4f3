"""
Bounding the minimal angle of 25 points in four dimensions
==========================================================

Certifies that no 25 points on the 3-sphere have minimal angle 60 degrees
by running the search and the full chain at z = cos 60.  See
kissbound.cli.pipelines.angle_bound for the bisection over angles.
"""

import time

from kissbound.cli.pipelines import certify_angle

t = time.time()
cert = certify_angle(4, 25, 60.0)
print(f"{time.time() - t:.1f} s")
if cert is None:
    print("no certificate at 60 degrees")
else:
    print("bound", round(cert.bound, 4), "->", cert.conclusion)
