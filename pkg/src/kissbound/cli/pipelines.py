"""End-to-end runs: the two kissing-number proofs, LP searches and angle bounds."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from ..hbound import REFERENCE_RHOMB_SPLIT, REFERENCE_TRIANGLE_GRID, AssumptionViolated, ExtensionPolynomial, HOptions, circumradius
from ..orthopoly import GegenbauerExpansion, Polynomial, from_gegenbauer
from ..polys import K3_POLY, K4_POLY, NAMED
from ..polysearch import SearchConfig, SearchInfeasible, lowered_expansion, search
from ..spherical import PHI3_7, t0_for_projected_angle
from .certificate import Certificate, run_pipeline

__all__ = [
    "verify_k3",
    "verify_k4",
    "extension_pipeline",
    "delsarte",
    "AngleBound",
    "angle_bound",
    "certify_angle",
    "plot_data",
    "write_csv",
]


def _label(n, z):
    return f"k({n})" if z == 0.5 else f"A({n},{z:.12g})"


def verify_k3(f: Polynomial = K3_POLY, options: HOptions | None = None) -> Certificate:
    """The three-dimensional chain with the reference cell breakpoints; concludes ``k(3)=12``."""
    opts = options or HOptions(triangle_grid=REFERENCE_TRIANGLE_GRID, rhomb_split=REFERENCE_RHOMB_SPLIT)
    return run_pipeline(f, 3, 0.5, options=opts, witness="icosahedron")


def verify_k4(f: Polynomial = K4_POLY, t0: float | None = None, options: HOptions | None = None) -> Certificate:
    """The four-dimensional chain; concludes ``k(4)=24``."""
    return run_pipeline(f, 4, 0.5, t0=t0, options=options, witness="cell24")


def extension_pipeline(f: Polynomial, n: int, z: float, t0: float | None = None, options: HOptions | None = None, witness=None) -> Certificate:
    """Full extension pipeline on a user polynomial."""
    return run_pipeline(f, n, z, t0=t0, options=options, witness=witness, label=_label(n, z))


def delsarte(n: int, z: float, d: int, N: int = 2000) -> Certificate:
    """Classic mode: LP search with ``t0 = 1``, then the bound ``f(1) / c_0``.

    The grid solution is first lowered by a constant so that the continuous
    nonpositivity check on ``[-1, z]`` passes.
    """
    res = search(SearchConfig(n, z, 1.0, d, N))
    exp = lowered_expansion(res)
    if exp is None:
        exp = res.expansion
    return run_pipeline(from_gegenbauer(exp), n, z, expansion=exp, label=_label(n, z))


# ----------------------------------------------------------------------------
# angle bounds
# ----------------------------------------------------------------------------

#: for each dimension, the projected angle above which mu stays within the implemented methods
_MU_ANGLE = {3: 72.0, 4: PHI3_7}
_T0_OFFSETS = (2e-4, 0.005, 0.015, 0.03)


@dataclass
class AngleBound:
    n: int
    M: int
    angle: float | None
    status: str  # "certified", "trivial" or "inconclusive"
    certificate: Certificate | None = None
    e_limit: float | None = None
    tried: list = field(default_factory=list)

    def as_dict(self) -> dict:
        from .certificate import fmt

        return {
            "n": self.n,
            "M": self.M,
            "angle": fmt(self.angle),
            "status": self.status,
            "e_limit": fmt(self.e_limit),
            "certificate": self.certificate.as_dict() if self.certificate else None,
        }


def _t0_min(n: int, z: float) -> float:
    try:
        return max(z, t0_for_projected_angle(z, _MU_ANGLE[n]))
    except ValueError:
        # every cap already projects wide enough
        return z


def _angle_options(n: int, ep: ExtensionPolynomial, M: int) -> HOptions:
    if n == 3:
        tg = tuple(np.linspace(circumradius(ep.z), ep.theta0, 200)[1:-1])
        return HOptions(triangle_grid=tg, rhomb_split=tuple(np.arange(40.0, 140.0, 0.05)), stop_above=M)
    th = ep.theta0
    return HOptions(h6_split=(th - 6, th - 4, th - 2.5, th - 1.5, th - 0.75), stop_above=M)


def _min_E(n: int, angle: float, d: int, N: int) -> float:
    z = math.cos(math.radians(angle))
    return search(SearchConfig(n, z, _t0_min(n, z) + _T0_OFFSETS[0], d, N)).E


def certify_angle(n: int, M: int, angle: float, d: int = 11, N: int = 2000) -> Certificate | None:
    """Try to show that no ``M``-point code in ``S^{n-1}`` has minimal angle ``angle``.

    Searches a few caps ``t0`` just above the smallest one keeping ``mu``
    within reach, and returns the first certificate whose bound is below ``M``.
    """
    z = math.cos(math.radians(angle))
    tmin = _t0_min(n, z)
    for dt in _T0_OFFSETS:
        t0 = tmin + dt
        try:
            res = search(SearchConfig(n, z, t0, d, N))
        except SearchInfeasible:
            continue
        if res.E >= M:
            # h_max is at least E for any admissible f with this cap
            continue
        exp = lowered_expansion(res)
        if exp is None:
            continue
        f = from_gegenbauer(exp)
        try:
            ep = ExtensionPolynomial.from_expansion(exp, z)
        except AssumptionViolated:
            continue
        cert = run_pipeline(f, n, z, options=_angle_options(n, ep, M), expansion=exp, label=f"A({n},{z:.12g})")
        if cert.passed and cert.bound < M:
            cert.conclusion = f"phi_{n}({M})<{angle:.12g}"
            return cert
    return None


def angle_bound(n: int, M: int, d: int = 11, tol: float = 0.01, N: int = 2000, window: tuple = (50.0, 75.0)) -> AngleBound:
    """Upper bound on ``phi_n(M)``, the largest minimal angle of ``M`` points on ``S^{n-1}``.

    A cheap scan of the LP value ``E`` (a lower bound on ``h_max`` for every
    admissible cap) locates the first angle where a proof is possible at all;
    the full pipeline is then run on angles above it and the certified
    interval is bisected down to ``tol`` degrees.
    """
    if n not in _MU_ANGLE:
        raise ValueError("angle bounds are implemented for n = 3 and 4")
    if M < 2:
        raise ValueError("M must be at least 2")
    if M <= n + 1:
        # the regular simplex is optimal: phi = arccos(-1/(M-1)) >= 90 degrees
        return AngleBound(n, M, math.degrees(math.acos(-1.0 / (M - 1))), "trivial")
    lo, hi = window
    # E grows as the angle shrinks; find where it crosses M
    if _min_E(n, hi, d, N) >= M:
        return AngleBound(n, M, None, "inconclusive")
    a, b = lo, hi
    if _min_E(n, a, d, N) < M:
        b = a
    while b - a > tol / 4:
        mid = 0.5 * (a + b)
        if _min_E(n, mid, d, N) < M:
            b = mid
        else:
            a = mid
    e_limit = b
    tried = []
    # climb from the E limit until the pipeline certifies
    step = tol
    fail, good, cert = e_limit, None, None
    while True:
        ang = min(e_limit + step, hi)
        c = certify_angle(n, M, ang, d, N)
        tried.append((ang, c is not None))
        if c is not None:
            good, cert = ang, c
            break
        fail = ang
        if ang >= hi:
            return AngleBound(n, M, None, "inconclusive", None, e_limit, tried)
        step *= 2
    while good - fail > tol:
        mid = 0.5 * (fail + good)
        c = certify_angle(n, M, mid, d, N)
        tried.append((mid, c is not None))
        if c is not None:
            good, cert = mid, c
        else:
            fail = mid
    return AngleBound(n, M, good, "certified", cert, e_limit, tried)


# ----------------------------------------------------------------------------
# plot data
# ----------------------------------------------------------------------------


def plot_data(which: str = "k3poly", samples: int = 201, custom: tuple | None = None) -> list:
    """Rows ``(t, f(t))`` at uniform spacing over ``[-1, z]``.

    ``custom`` is ``(polynomial, z)`` when ``which == "custom"``.
    """
    if samples < 2:
        raise ValueError("samples must be >= 2")
    if which == "custom":
        if custom is None:
            raise ValueError("custom plot needs (polynomial, z)")
        f, z = custom
    else:
        _, f = NAMED[which]
        z = 0.5
    t = np.linspace(-1.0, z, samples)
    t[-1] = z
    return [(float(a), float(f(a))) for a in t]


def write_csv(rows, fh=None) -> str:
    buf = fh if fh is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "f_t"])
    for t, v in rows:
        w.writerow([repr(t), repr(v)])
    return buf.getvalue() if fh is None else ""
