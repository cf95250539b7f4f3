"""Bounds built from points on a common 2-sphere: pairs on an arc, triangles and rhombs.

All angles are in degrees.  Each one-parameter objective is turned into a
polynomial in ``s = cos u`` with :func:`~kissbound.orthopoly.symmetric_pair`
and maximised exactly on its interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..orthopoly import max_on_interval, symmetric_pair
from .extension import ExtensionPolynomial

__all__ = [
    "h01",
    "F1",
    "F1_argmax",
    "h2",
    "rho",
    "F2",
    "triangle_vertex_angle",
    "circumradius",
    "triangle_cells",
    "h3_triangle_n3",
    "rhomb_cells",
    "h4_rhomb_n3",
    "ArcMax",
    "arc_max",
    "F_arc",
    "REFERENCE_TRIANGLE_GRID",
    "REFERENCE_RHOMB_SPLIT",
]

_rad = math.radians
_deg = math.degrees

# interior breakpoints used for z = 1/2 in three dimensions
REFERENCE_TRIANGLE_GRID = (38.0, 41.0, 44.0, 48.0)
REFERENCE_RHOMB_SPLIT = (77.0,)


def h01(ep: ExtensionPolynomial) -> tuple:
    """``(f(1), f(1) + f(-1))``, exactly when ``f`` has rational coefficients."""
    if ep.f.is_exact:
        h0 = ep.f.exact_eval(1)
        return float(h0), float(h0 + ep.f.exact_eval(-1))
    return float(ep.f(1.0)), float(ep.f(1.0) + ep.f(-1.0))


# ----------------------------------------------------------------------------
# pairs
# ----------------------------------------------------------------------------


def _f1_interval(ep: ExtensionPolynomial, psi: float):
    if not ep.delta - 1e-9 <= psi <= 2 * ep.theta0 + 1e-9:
        raise ValueError(f"psi={psi} outside [delta, 2 theta0]")
    half = _rad(psi) / 2
    poly = symmetric_pair(ep.f, 0.0, -math.cos(half), math.sin(half))
    umax = min(_rad(ep.theta0), _rad(psi)) - half
    return poly, math.cos(max(umax, 0.0))


def F1_argmax(ep: ExtensionPolynomial, psi: float) -> tuple:
    """``(F1(psi), theta)``: best ``f(-cos theta) + f(-cos(psi - theta))`` with both angles in the cap."""
    poly, s_lo = _f1_interval(ep, psi)
    val, s = max_on_interval(poly, s_lo, 1.0)
    # the larger of the two angles; s = 1 is the symmetric position
    theta = psi / 2 + _deg(math.acos(min(1.0, s)))
    return val, theta


def F1(ep: ExtensionPolynomial, psi: float) -> float:
    return F1_argmax(ep, psi)[0]


def h2(ep: ExtensionPolynomial) -> float:
    h0, _ = h01(ep)
    return h0 + F1(ep, ep.delta)


# ----------------------------------------------------------------------------
# triangles
# ----------------------------------------------------------------------------


def triangle_vertex_angle(z: float, gamma: float | None = None) -> float:
    """Apex angle of the isosceles triangle with legs ``arccos z`` and base ``gamma``."""
    c = z if gamma is None else math.cos(_rad(gamma))
    s2 = 1 - z * z
    return _deg(math.acos(max(-1.0, min(1.0, (c - z * z) / s2))))


def circumradius(z: float) -> float:
    """Circumradius of the equilateral spherical triangle with sides ``arccos z``."""
    return _deg(math.acos(math.sqrt((1 + 2 * z) / 3)))


@dataclass(frozen=True)
class ArcMax:
    """Maximum of a pair sum over an arc ``dist(y1, y) = psi``.

    ``u`` is the rotation away from the bisector at the maximiser and
    ``u_max`` the end of the feasible arc; ``at_endpoint`` records whether
    the maximum sits at an end of the arc (the shortcut condition).
    """

    value: float
    u: float
    u_max: float
    at_endpoint: bool


def arc_max(ep: ExtensionPolynomial, psi: float, gamma: float, cap_cos: float | None = None) -> ArcMax:
    """Best ``f(-y.yi) + f(-y.yj)`` over the arc at distance ``psi`` from the apex ``y1``.

    The triangle ``y1 yi yj`` has legs ``delta`` and base ``gamma``; both
    ``y.yi`` and ``y.yj`` must be at least ``cap_cos`` (default ``t0``).
    Returns ``value = -inf`` when the arc is empty.
    """
    cap_cos = ep.t0 if cap_cos is None else cap_cos
    half = _rad(triangle_vertex_angle(ep.z, gamma)) / 2
    cd, sd = ep.z, math.sqrt(1 - ep.z * ep.z)
    cp, sp = math.cos(_rad(psi)), math.sin(_rad(psi))
    if sp < 1e-15:
        ok = cp * cd >= cap_cos - 1e-12
        v = 2 * float(ep.f(-cp * cd)) if ok else -math.inf
        return ArcMax(v, 0.0, 0.0, True)
    kappa = (cap_cos - cd * cp) / (sd * sp)
    if kappa > math.cos(half) + 1e-12:
        return ArcMax(-math.inf, 0.0, 0.0, True)
    umax = min(math.pi, math.acos(max(-1.0, min(1.0, kappa))) - half)
    umax = max(umax, 0.0)
    poly = symmetric_pair(ep.f, -cd * cp, -sd * sp * math.cos(half), sd * sp * math.sin(half))
    s_lo = math.cos(umax)
    val, s = max_on_interval(poly, s_lo, 1.0)
    tie = 1e-12 * max(1.0, abs(val))
    at_end = s in (s_lo, 1.0) or val <= max(float(poly(s_lo)), float(poly(1.0))) + tie
    return ArcMax(val, _deg(math.acos(min(1.0, s))), _deg(umax), bool(at_end))


def F_arc(ep: ExtensionPolynomial, psi: float, gamma: float, cap_cos: float | None = None) -> float:
    """``F(psi, gamma)``; ``-inf`` marks an empty arc (infeasible configuration)."""
    return arc_max(ep, psi, gamma, cap_cos).value


def F2(ep: ExtensionPolynomial, psi: float) -> float:
    """``f(1)`` plus the best pair sum for the two other vertices of an equilateral triangle.

    The third vertex is at distance ``psi`` from the pole and is the farthest
    of the three, so the other two are constrained to angles ``<= psi``.
    """
    return h01(ep)[0] + F_arc(ep, psi, ep.delta, cap_cos=math.cos(_rad(psi)))


def _default_grid(lo: float, hi: float, step: float) -> list:
    k = max(1, math.ceil((hi - lo) / step - 1e-12))
    return list(np.linspace(lo, hi, k + 1))


def triangle_cells(ep: ExtensionPolynomial, grid=None) -> list:
    """Cell bounds ``(psi_i, psi_{i+1}, w_i)`` with ``w_i = F2(psi_{i+1}) + f(-cos psi_i)``.

    ``grid`` lists interior breakpoints strictly between the circumradius and
    ``theta0``; by default the range is cut into cells of at most one degree.
    """
    r0, th0 = circumradius(ep.z), ep.theta0
    if th0 < r0:
        return []
    if grid is None:
        pts = _default_grid(r0, th0, 1.0)
    else:
        pts = [r0] + [g for g in grid if r0 < g < th0] + [th0]
    out = []
    for a, b in zip(pts, pts[1:]):
        out.append((a, b, F2(ep, b) + float(ep.g(a))))
    return out


def h3_triangle_n3(ep: ExtensionPolynomial, grid=None) -> float:
    """Safe over-estimate of ``h3`` in three dimensions via the triangle cells."""
    cells = triangle_cells(ep, grid)
    return max((w for _, _, w in cells), default=-math.inf)


# ----------------------------------------------------------------------------
# rhombs
# ----------------------------------------------------------------------------


def rho(s: float, z: float = 0.5) -> float:
    """The other diagonal of a rhomb with sides ``arccos z`` and one diagonal ``s``."""
    c = z / math.cos(_rad(s) / 2)
    if not -1 <= c <= 1:
        raise ValueError(f"no rhomb with diagonal {s}")
    return 2 * _deg(math.acos(c))


def rhomb_cells(ep: ExtensionPolynomial, split=None) -> list:
    """Cell bounds ``(d_i, d_{i+1}, f(1) + F1(d_i) + F1(rho(d_{i+1})))`` for the short diagonal.

    The short diagonal ranges over ``[max(delta, rho(2 theta0)), d*]`` where
    ``d* = rho(d*)``; ``split`` lists interior breakpoints (default: cells of
    at most two degrees).
    """
    z = ep.z
    dstar = 2 * _deg(math.acos(math.sqrt(z)))
    if 2 * ep.theta0 < dstar:
        return []
    lo = max(ep.delta, rho(2 * ep.theta0, z))
    if lo > dstar:
        return []
    if split is None:
        pts = _default_grid(lo, dstar, 2.0)
    else:
        pts = [lo] + [x for x in split if lo < x < dstar] + [dstar]
    h0 = h01(ep)[0]
    cells = []
    for a, b in zip(pts, pts[1:]):
        cells.append((a, b, h0 + F1(ep, a) + F1(ep, min(rho(b, z), 2 * ep.theta0))))
    return cells


def h4_rhomb_n3(ep: ExtensionPolynomial, split=None) -> float:
    cells = rhomb_cells(ep, split)
    return max((w for _, _, w in cells), default=-math.inf)
