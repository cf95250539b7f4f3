"""``h_m`` for ``m <= n``: the points near the antipode form a regular simplex around the pole.

Two independent methods.  :func:`h_simplex_triangulation` is a branch and
bound over a triangulation of the ordered chamber of the simplex and works
for any ``f`` satisfying the monotonicity assumption.  :func:`h_simplex_powersum`
rewrites ``H`` through power sums of ``t_i = y.y_i`` and reduces ``m = 3, 4``
to one-dimensional searches; it needs degree-9 structure in ``f``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import minimize_scalar

from ..orthopoly import Polynomial, max_on_interval, min_on_interval
from .extension import ExtensionPolynomial
from .planar import h01

__all__ = [
    "regular_simplex",
    "chamber",
    "SimplexResult",
    "h_simplex_triangulation",
    "LemmaHypothesisError",
    "check_powersum_hypotheses",
    "powersum_range",
    "sigma",
    "h_simplex_powersum",
]

_deg = math.degrees


def regular_simplex(m: int, z: float) -> np.ndarray:
    """Rows are ``m`` unit vectors in ``R^m`` with pairwise products ``z``."""
    gram = (1 - z) * np.eye(m) + z * np.ones((m, m))
    w, v = np.linalg.eigh(gram)
    return (v * np.sqrt(np.maximum(w, 0.0))) @ v.T


def chamber(m: int, z: float) -> np.ndarray:
    """Vertices of the chamber ``theta_1 <= ... <= theta_m``: normalised partial sums of the simplex."""
    y = regular_simplex(m, z)
    v = np.cumsum(y, axis=0)
    return v / np.linalg.norm(v, axis=1, keepdims=True)


@dataclass
class SimplexResult:
    """``value`` bounds (or equals, for ``kind == "exact"``) ``h_m``; ``angles`` locate the best point found."""

    m: int
    value: float
    kind: str
    method: str
    angles: tuple
    lower: float = -math.inf
    info: dict = field(default_factory=dict)

    def __float__(self):
        return float(self.value)


# ----------------------------------------------------------------------------
# triangulation
# ----------------------------------------------------------------------------


class _DerivativeTable:
    """Range maxima of ``|g'|`` and ``max(g'', 0)`` for ``g(t) = f(-t)`` on bins of ``[-1, 1]``.

    Each bin value is an exact maximum of a polynomial on the bin; a query
    over ``[lo, hi]`` takes the maximum over the covering bins (sparse table).
    """

    def __init__(self, f, bins: int = 1024):
        c = np.asarray(f.values, dtype=float) * (-1.0) ** np.arange(len(f.values))
        g = Polynomial(tuple(c))
        g1, g2 = g.derivative(), g.derivative().derivative()
        edges = np.linspace(-1.0, 1.0, bins + 1)
        d1 = np.empty(bins)
        d2 = np.empty(bins)
        for i in range(bins):
            a, b = edges[i], edges[i + 1]
            d1[i] = max(max_on_interval(g1, a, b)[0], -min_on_interval(g1, a, b)[0])
            d2[i] = max(max_on_interval(g2, a, b)[0], 0.0)
        self.bins = bins
        self.t1 = self._sparse(d1)
        self.t2 = self._sparse(d2)

    @staticmethod
    def _sparse(a):
        levels = [a]
        k = 1
        while 2 * k <= a.size:
            prev = levels[-1]
            levels.append(np.maximum(prev[:-k], prev[k:]))
            k *= 2
        return levels

    def _query(self, table, lo, hi):
        i = np.clip(np.floor((lo + 1) / 2 * self.bins).astype(int), 0, self.bins - 1)
        j = np.clip(np.floor((hi + 1) / 2 * self.bins).astype(int), 0, self.bins - 1)
        j = np.maximum(i, j)
        span = j - i + 1
        lev = np.floor(np.log2(span)).astype(int)
        out = np.empty(lo.shape)
        for L in np.unique(lev):
            sel = lev == L
            t = table[L]
            out[sel] = np.maximum(t[i[sel]], t[j[sel] - (1 << L) + 1])
        return out

    def slope(self, lo, hi):
        return self._query(self.t1, lo, hi)

    def curvature(self, lo, hi):
        return self._query(self.t2, lo, hi)


@lru_cache(maxsize=16)
def _table_for(coeffs: tuple, bins: int):
    return _DerivativeTable(Polynomial(coeffs), bins)


def _tilt(cells: np.ndarray, chord: np.ndarray) -> np.ndarray:
    """Bound on ``|x/|x| . d|`` for ``x`` in a cell and unit ``d`` parallel to it.

    ``|P v_1| + C``, where ``P`` projects onto the directions of the cell and
    ``C`` is its longest chord; capped at 1.
    """
    v1 = cells[:, 0, :]
    E = cells[:, 1:, :] - v1[:, None, :]
    G = E @ E.transpose(0, 2, 1)
    rhs = E @ v1[:, :, None]
    with np.errstate(all="ignore"):
        try:
            coef = np.linalg.solve(G, rhs)
            proj = np.sqrt(np.maximum((rhs * coef).sum(axis=(1, 2)), 0.0))
        except np.linalg.LinAlgError:
            return np.ones(cells.shape[0])
    out = np.minimum(proj + chord, 1.0)
    return np.where(np.isfinite(out), out, 1.0)


def h_simplex_triangulation(
    ep: ExtensionPolynomial, m: int, eps: float = 0.05, max_cells: int = 2_000_000
) -> SimplexResult:
    """Safe over-estimate of ``h_m`` by longest-edge bisection of the ordered chamber.

    Every cell gets the smaller of two upper bounds on ``H`` over its
    feasible part:

    * first order: ``y.y_k`` is at most ``max_j(v_j.y_k) / sqrt(cos D)`` on a
      cell of angular diameter ``D``, and ``f(-t)`` increases on ``[t0, 1]``;
    * second order: the best vertex value plus ``M C^2 / 4``, where ``C`` is
      the longest chord and ``M`` bounds the second directional derivative
      of ``H`` along chords of the cell.  For ``phi(x) = y.x/|x|`` along a
      unit direction, ``phi'^2 <= 1/r^2`` and
      ``|phi''| <= (1 + 2 tau + 3 tau^2)/r^2`` with ``tau`` bounding the
      tilt of the direction against the radius.

    Cells whose bound does not beat the best feasible vertex are dropped, the
    rest are split until their diameter is at most ``eps`` degrees.  The
    result is the larger of the best vertex value and the largest surviving
    bound; halving ``eps`` never increases it.
    """
    if not 1 <= m <= ep.n:
        raise ValueError(f"need 1 <= m <= n, got m={m}")
    h0 = h01(ep)[0]
    if m == 1:
        return SimplexResult(1, h01(ep)[1], "exact", "closed form", (0.0,), h01(ep)[1])
    f = ep.f
    fc = np.asarray(f.values, dtype=float)
    t0 = ep.t0
    y = regular_simplex(m, ep.z)
    table = _table_for(tuple(float(c) for c in fc), 1024)
    cos_eps = math.cos(math.radians(eps))

    def H(p):
        return h0 + npoly.polyval(-p, fc).sum(axis=-1)

    cells = chamber(m, ep.z)[None, :, :]
    parent = np.array([math.inf])
    best_val, best_pt = -math.inf, None
    terminal_max = -math.inf
    iu = np.triu_indices(m, 1)
    generations = 0
    total = 0
    while cells.shape[0]:
        generations += 1
        total += cells.shape[0]
        if total > max_cells:
            raise RuntimeError("triangulation cell budget exhausted; increase eps")
        P = cells @ y.T  # (C, vertex, point)
        hv = H(P)  # (C, vertex)
        feas = (P >= t0).all(axis=2)
        fv = np.where(feas, hv, -np.inf)
        k = np.unravel_index(np.argmax(fv), fv.shape)
        if fv[k] > best_val:
            best_val, best_pt = float(fv[k]), P[k]
        G = cells @ cells.transpose(0, 2, 1)
        cosd = np.clip(G[:, iu[0], iu[1]].min(axis=1), -1.0, 1.0)
        rmin = np.sqrt(np.maximum(cosd, 1e-300))
        tmax = P.max(axis=1)
        tmin = P.min(axis=1)
        upper = np.where(tmax >= 0, np.minimum(tmax / rmin[:, None], 1.0), tmax)
        lower = np.where(tmin >= 0, tmin, tmin / rmin[:, None])
        alive = (upper >= t0).all(axis=1) & (cosd > 0)
        b1 = h0 + npoly.polyval(-np.maximum(upper, t0), fc).sum(axis=1)
        chord2 = 2 - 2 * cosd
        r2 = rmin**2
        lo_t, hi_t = np.clip(lower, -1, 1), np.clip(upper, -1, 1)
        curv = (table.curvature(lo_t.ravel(), hi_t.ravel()).reshape(lo_t.shape) / r2[:, None]).sum(axis=1)
        tilt = _tilt(cells, np.sqrt(chord2))
        kappa = 1 + 2 * tilt + 3 * tilt**2
        slope = (table.slope(lo_t.ravel(), hi_t.ravel()).reshape(lo_t.shape) * (kappa / r2)[:, None]).sum(axis=1)
        b2 = hv.max(axis=1) + (curv + slope) * chord2 / 4
        bound = np.minimum(np.minimum(b1, b2), parent)
        keep = alive & (bound > best_val + 1e-13)
        done = keep & (cosd >= cos_eps)
        if done.any():
            terminal_max = max(terminal_max, float(bound[done].max()))
        split = keep & ~done
        cells, parent = cells[split], bound[split]
        if not cells.shape[0]:
            break
        # longest-edge bisection
        g = G[split]
        gi = g[:, iu[0], iu[1]]
        e = np.argmin(gi, axis=1)
        a, b = iu[0][e], iu[1][e]
        idx = np.arange(cells.shape[0])
        mid = cells[idx, a] + cells[idx, b]
        mid /= np.linalg.norm(mid, axis=1, keepdims=True)
        c1 = cells.copy()
        c2 = cells.copy()
        c1[idx, a] = mid
        c2[idx, b] = mid
        cells = np.concatenate([c1, c2])
        parent = np.concatenate([parent, parent])
    value = max(best_val, terminal_max)
    angles = tuple(sorted(_deg(math.acos(min(1.0, t))) for t in best_pt)) if best_pt is not None else ()
    info = {"eps": eps, "cells": total, "generations": generations}
    return SimplexResult(m, value, "over-estimate", "triangulation", angles, best_val, info)


# ----------------------------------------------------------------------------
# power sums
# ----------------------------------------------------------------------------


class LemmaHypothesisError(ValueError):
    """The power-sum reduction needs ``f_9 > 0``, ``f_6 = f_8 = 0`` (and for m = 3, ``f_7 > -15 f_9 / 7``)."""


def check_powersum_hypotheses(ep: ExtensionPolynomial, m: int) -> None:
    c = list(ep.f.coeffs) + [0] * 10
    if ep.f.degree != 9:
        raise LemmaHypothesisError("f must have degree 9")
    if ep.n != 4 or m not in (3, 4):
        raise LemmaHypothesisError("the power-sum method covers n = 4, m in {3, 4}")
    f6, f7, f8, f9 = c[6], c[7], c[8], c[9]
    if not (f9 > 0 and f6 == 0 and f8 == 0):
        raise LemmaHypothesisError("need f9 > 0 and f6 = f8 = 0")
    if m == 3 and not f7 > -15 * f9 / 7:
        raise LemmaHypothesisError("need f7 > -15 f9 / 7")


def sigma(omega, m: int, z: float):
    """Second power sum on the simplex as a function of the first one."""
    return z * omega**2 / ((m - 1) * z + 1) + 1 - z


def powersum_range(m: int, z: float, t0: float) -> tuple:
    """``(w1, w2)``: the range of ``s1 = sum t_i`` over feasible points."""
    p = (1 + (m - 2) * z) / (m - 1)
    w1 = (math.sqrt((p - t0**2) * (p - z**2)) + z * t0) / p + (m - 1) * t0
    w2 = math.sqrt(m * (m - 1) * z + m)
    return w1, w2


def _two_level(k1: int, k2: int, s1: float, s2: float) -> list:
    """Solutions ``(a, b)`` of ``k1 a + k2 b = s1``, ``k1 a^2 + k2 b^2 = s2``."""
    # a = (s1 - k2 b) / k1  ->  quadratic in b
    A = k2 * k2 / k1 + k2
    B = -2 * s1 * k2 / k1
    C = s1 * s1 / k1 - s2
    disc = B * B - 4 * A * C
    if disc < -1e-14:
        return []
    r = math.sqrt(max(disc, 0.0))
    return [((s1 - k2 * b) / k1, b) for b in ((-B + r) / (2 * A), (-B - r) / (2 * A))]


def _circle_max(fc, s1, s2, t0, fixed=()):
    """Max of ``sum f(-t_i)`` over 3-vectors on ``{sum t = s1, sum t^2 = s2, t_i >= t0}``.

    On the circle ``sum t^3`` equals ``A + B cos(3 phi)``; the objective is a
    cubic in it.  The cubic is recovered by interpolation and maximised over
    the feasible range of ``s3``, which is attained at two-equal points or
    where some ``t_i = t0``.  Returns ``(value, t)`` or ``(-inf, None)``.
    """
    c = s1 / 3
    rho2 = s2 - s1 * s1 / 3
    if rho2 < -1e-14:
        return -math.inf, None
    rho = math.sqrt(max(rho2, 0.0))
    e1 = np.array([2, -1, -1]) / math.sqrt(6)
    e2 = np.array([0, 1, -1]) / math.sqrt(2)

    def point(phi):
        return c + rho * (math.cos(phi) * e1 + math.sin(phi) * e2)

    extra = float(sum(npoly.polyval(-t, fc) for t in fixed))
    if rho < 1e-12:
        t = np.full(3, c)
        if (t < t0 - 1e-12).any():
            return -math.inf, None
        return float(npoly.polyval(-t, fc).sum()) + extra, t
    # feasible set in phi: t_i(phi) >= t0; candidates are crossings and the two-equal points
    cands = [k * math.pi / 3 for k in range(6)]
    for i, ei in enumerate(np.stack([e1, e2], axis=1)):
        # rho (cos phi ei[0] + sin phi ei[1]) >= t0 - c
        amp = math.hypot(*ei)
        base = math.atan2(ei[1], ei[0])
        val = (t0 - c) / (rho * amp)
        if -1 <= val <= 1:
            w = math.acos(val)
            cands += [base + w, base - w]
    pts = [point(p) for p in cands]
    feas = [t for t in pts if (t >= t0 - 1e-12).all()]
    if not feas:
        return -math.inf, None
    s3 = [float((t**3).sum()) for t in feas]
    lo, hi = min(s3), max(s3)
    # cubic in s3: sample four distinct points on the circle
    phis = np.linspace(0, math.pi / 3, 4)
    xs = np.array([float((point(p) ** 3).sum()) for p in phis])
    ys = np.array([float(npoly.polyval(-point(p), fc).sum()) for p in phis])

    if abs(xs[-1] - xs[0]) < 1e-14:
        val = float(ys[0])
        best_s3 = xs[0]
    else:
        scale = xs - xs.mean()
        span = np.abs(scale).max()
        coef = np.polyfit(scale / span, ys, 3)[::-1]
        cubic = Polynomial(tuple(coef))
        val, u = max_on_interval(cubic, (lo - xs.mean()) / span, (hi - xs.mean()) / span)
        best_s3 = xs.mean() + u * span
    # recover a configuration with that s3 among the feasible candidates (closest)
    i = int(np.argmin([abs(v - best_s3) for v in s3]))
    t = feas[i]
    if abs(s3[i] - best_s3) > 1e-9 * max(1.0, abs(best_s3)):
        # interior s3: solve A + B cos(3 phi) = s3 on the circle
        A = 3 * c**3 + 3 * c * rho2
        B = float((point(0.0) ** 3).sum()) - A
        if abs(B) > 0:
            phi = math.acos(max(-1.0, min(1.0, (best_s3 - A) / B))) / 3
            for cand in (phi, -phi, phi + 2 * math.pi / 3, phi - 2 * math.pi / 3):
                q = point(cand)
                if (q >= t0 - 1e-12).all():
                    t = q
                    break
    return float(val) + extra, t


def _p_m3(fc, h0, omega, z, t0):
    return _circle_max(fc, omega, sigma(omega, 3, z), t0)


def _p_m4(fc, h0, omega, z, t0):
    s2 = sigma(omega, 4, z)
    best, arg = -math.inf, None
    for k1, k2 in ((2, 2), (3, 1)):
        for a, b in _two_level(k1, k2, omega, s2):
            t = np.array([a] * k1 + [b] * k2)
            if (t >= t0 - 1e-12).all():
                v = float(npoly.polyval(-t, fc).sum())
                if v > best:
                    best, arg = v, t
    # boundary: one coordinate pinned at t0, the other three on a circle
    v, t3 = _circle_max(fc, omega - t0, s2 - t0 * t0, t0, fixed=(t0,))
    if v > best:
        best, arg = v, np.concatenate([t3, [t0]])
    return best, arg


def h_simplex_powersum(ep: ExtensionPolynomial, m: int, scan: int = 2001) -> SimplexResult:
    """``h_m`` for ``m in {3, 4}`` in four dimensions by a scan over ``s1 = omega``.

    For each ``omega`` the remaining freedom is maximised exactly: for
    ``m = 3`` a cubic in ``s3`` over its feasible range; for ``m = 4`` the
    critical two-level points ``(a,a,b,b)``, ``(a,a,a,b)``, ``(a,b,b,b)``
    plus the boundary ``t_4 = t0`` (a three-point circle problem).  The
    outer maximum is located by a scan and polished with a bounded scalar
    search.
    """
    check_powersum_hypotheses(ep, m)
    h0 = h01(ep)[0]
    fc = np.asarray(ep.f.values, dtype=float)
    z, t0 = ep.z, ep.t0
    w1, w2 = powersum_range(m, z, t0)
    inner = _p_m3 if m == 3 else _p_m4

    def p(om):
        return inner(fc, h0, om, z, t0)

    oms = np.linspace(w1, w2, scan)
    vals = np.array([p(o)[0] for o in oms])
    i = int(np.argmax(vals))
    lo, hi = oms[max(i - 1, 0)], oms[min(i + 1, scan - 1)]
    res = minimize_scalar(lambda o: -p(o)[0], bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    om = res.x if -res.fun > vals[i] else oms[i]
    val, t = p(om)
    value = h0 + val
    angles = tuple(sorted(_deg(math.acos(max(-1.0, min(1.0, x)))) for x in t))
    info = {"omega": float(om), "w1": w1, "w2": w2}
    return SimplexResult(m, value, "exact", "power sums", angles, value, info)
