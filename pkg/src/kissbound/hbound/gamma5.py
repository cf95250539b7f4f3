"""Five points near the antipode in four dimensions: the one-parameter Gram family.

Vertex ``y1`` is at angle ``delta`` from the four others, which form a
4-cycle ``y2 y3 y4 y5`` with sides ``delta`` and diagonals ``alpha = y2y4``,
``beta = y3y5``.  The Gram matrix is singular in R^4, which ties ``beta`` to
``alpha`` through :func:`lambda_angle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .extension import ExtensionPolynomial
from .planar import F_arc, h01, triangle_vertex_angle

__all__ = [
    "lambda_angle",
    "gram_gamma5",
    "psi_lower_bound",
    "dual_multipliers",
    "H5Cell",
    "H5Result",
    "h5_cells",
    "h5_bound_n4",
    "h6_bound_n4",
    "h6_cases",
    "H6Result",
]

_rad = math.radians
_deg = math.degrees


def lambda_angle(alpha: float, z: float = 0.5) -> float:
    """The diagonal ``beta`` paired with ``alpha`` (degrees); an involution."""
    ca = math.cos(_rad(alpha))
    den = ca + 1 - 2 * z * z
    if abs(den) < 1e-15:
        raise ValueError("singular diagonal relation")
    cb = -((1 - 2 * z * z) * ca + 8 * z**3 - 8 * z * z + 1) / den
    if not -1 - 1e-12 <= cb <= 1 + 1e-12:
        raise ValueError(f"no configuration with diagonal {alpha}")
    return _deg(math.acos(max(-1.0, min(1.0, cb))))


def gram_gamma5(alpha: float, z: float = 0.5, beta: float | None = None) -> np.ndarray:
    beta = lambda_angle(alpha, z) if beta is None else beta
    g = np.full((5, 5), z)
    np.fill_diagonal(g, 1.0)
    g[1, 3] = g[3, 1] = math.cos(_rad(alpha))
    g[2, 4] = g[4, 2] = math.cos(_rad(beta))
    return g


def _dual_value(lam, g, t0):
    c = np.concatenate([[1.0], lam])
    return math.sqrt(max(c @ g @ c, 0.0)) - t0 * lam.sum()


def _dual_grad(lam, g, t0):
    c = np.concatenate([[1.0], lam])
    gc = g @ c
    norm = math.sqrt(max(c @ gc, 1e-300))
    return gc[1:] / norm - t0


def dual_multipliers(alpha: float, z: float, t0: float) -> np.ndarray:
    """Multipliers minimising the dual bound on ``y.y1`` at a single diagonal ``alpha``."""
    g = gram_gamma5(alpha, z)
    res = minimize(
        _dual_value,
        x0=np.full(4, 0.5),
        jac=_dual_grad,
        args=(g, t0),
        bounds=[(0, None)] * 4,
        method="L-BFGS-B",
    )
    return np.maximum(res.x, 0.0)


def psi_lower_bound(a_lo: float, a_hi: float, z: float, t0: float, lam=None) -> float | None:
    """Lower bound (degrees) on ``dist(y1, y)`` over ``alpha in [a_lo, a_hi]`` and ``y.yk >= t0``.

    Weak duality: for multipliers ``lam >= 0``,
    ``y.y1 <= |y1 + sum lam_k yk| - t0 sum lam_k``.  Any ``lam`` is valid;
    by default they are optimised at the cell midpoint.  The cosines of both
    diagonals enter with nonnegative weight, so using the largest
    ``cos alpha`` and ``cos beta`` over the cell bounds the whole cell.
    Returns ``None`` when no feasible ``y`` with ``y.y1 >= t0`` exists.
    """
    if lam is None:
        lam = dual_multipliers(0.5 * (a_lo + a_hi), z, t0)
    worst = gram_gamma5(a_lo, z, beta=lambda_angle(a_hi, z))
    bound = _dual_value(np.asarray(lam, dtype=float), worst, t0)
    if bound < t0:
        return None
    return _deg(math.acos(min(1.0, bound)))


def _feasible_psi(ep: ExtensionPolynomial, gamma: float, cap_cos: float) -> tuple | None:
    """Interval of ``psi`` for which the arc ``omega(psi, gamma)`` is nonempty."""
    half = _rad(triangle_vertex_angle(ep.z, gamma)) / 2
    cd, sd = ep.z, math.sqrt(1 - ep.z**2)
    # best point on the circle of radius psi: y.yi = cd cos psi + sd sin psi cos(half)
    a, b = cd, sd * math.cos(half)
    r = math.hypot(a, b)
    if cap_cos > r:
        return None
    phi = math.atan2(b, a)
    w = math.acos(cap_cos / r)
    return _deg(max(phi - w, 0.0)), _deg(phi + w)


class _ArcCache:
    """Memoised ``F(psi, gamma)`` at grid nodes; cells share their corner values."""

    def __init__(self, ep, cap):
        self.ep, self.cap, self.store, self.ranges = ep, cap, {}, {}

    def rng(self, gamma):
        key = round(gamma, 12)
        if key not in self.ranges:
            self.ranges[key] = _feasible_psi(self.ep, gamma, self.cap)
        return self.ranges[key]

    def F(self, psi, gamma):
        key = (round(psi, 12), round(gamma, 12))
        if key not in self.store:
            self.store[key] = F_arc(self.ep, psi, gamma, self.cap)
        return self.store[key]

    def on_cell(self, lo, hi, gamma):
        """``max(F(lo'), F(hi'))`` over the part of ``[lo, hi]`` where the arc exists.

        ``F`` usually increases with ``psi``; taking both ends keeps the bound
        honest on the stretches where it does not.
        """
        r = self.rng(gamma)
        if r is None or r[0] > hi + 1e-12 or r[1] < lo - 1e-12:
            return -math.inf
        a = max(lo, r[0])
        b = min(hi, r[1] - 1e-12)
        if b < a:
            b = a
        return max(self.F(a, gamma), self.F(b, gamma))


@dataclass(frozen=True)
class H5Cell:
    alpha_lo: float
    alpha_hi: float
    psi_lo: float
    psi_hi: float
    value: float


@dataclass
class H5Result:
    """Outcome of the five-point bound.

    ``value`` is ``f(1)`` plus the largest surviving cell bound (or the best
    sampled point value ``lower`` when that is larger).  ``monotone_violations``
    counts cells where ``F`` dropped from the lower to the upper ``psi`` end.
    """

    value: float
    theta0: float
    argmax: H5Cell | None
    lower: float = -math.inf
    cells: list = field(default_factory=list)
    monotone_violations: int = 0
    evaluations: int = 0

    def __float__(self):
        return float(self.value)


def _alpha_grid(ep, theta0, step):
    z = ep.z
    delta = ep.delta
    dstar = 2 * _deg(math.acos(math.sqrt(z)))
    try:
        a0 = max(delta, lambda_angle(min(2 * theta0, 180.0), z))
    except ValueError:
        a0 = delta
    if a0 >= dstar:
        return [a0, a0]
    k = max(1, math.ceil((dstar - a0) / step - 1e-9))
    return list(np.linspace(a0, dstar, k + 1))


def h5_cells(
    ep: ExtensionPolynomial,
    alpha_grid=None,
    psi_step: float = 0.5,
    theta0: float | None = None,
    alpha_tol: float | None = None,
    psi_tol: float | None = None,
    keep_cells: bool = False,
) -> H5Result:
    """Cell bounds ``R = f(-cos psi_lo) + F(psi, alpha_lo) + F(psi, lambda(alpha_hi))``.

    The ``(alpha, psi)`` rectangle starts as ``alpha_grid`` times ``psi``
    cells of width ``psi_step`` between the certified lower bound on ``psi``
    and ``theta0``.  Without tolerances that grid is the answer.  With
    ``alpha_tol``/``psi_tol`` the cells are bisected generation by
    generation; a cell is dropped once its bound falls to the best value
    sampled at a grid node, and refining stops at the tolerances.  A child
    never reports more than its parent.

    ``theta0`` shrinks the cap (used by the six-point split).
    """
    theta0 = ep.theta0 if theta0 is None else theta0
    cap = math.cos(_rad(theta0))
    z = ep.z
    dstar = 2 * _deg(math.acos(math.sqrt(z)))
    needed = _alpha_grid(ep, theta0, 1.0)
    if alpha_grid is None:
        alpha_grid = needed
    alpha_grid = sorted(float(a) for a in alpha_grid)
    if alpha_grid[0] > needed[0] + 1e-9 or alpha_grid[-1] < dstar - 1e-9:
        raise ValueError(f"alpha grid must cover [{needed[0]:.6f}, {dstar:.6f}]")
    h0 = h01(ep)[0]
    cache = _ArcCache(ep, cap)
    lam = {}

    def lam_of(a):
        if a not in lam:
            lam[a] = lambda_angle(a, z)
        return lam[a]

    stats = {"bad": 0}

    def bound(a_lo, a_hi, p_lo, p_hi):
        fa = cache.on_cell(p_lo, p_hi, a_lo)
        fb = cache.on_cell(p_lo, p_hi, lam_of(a_hi))
        if fa == -math.inf or fb == -math.inf:
            return -math.inf
        if cache.F(p_hi, a_lo) < cache.F(p_lo, a_lo) - 1e-12:
            stats["bad"] += 1
        return float(ep.g(p_lo)) + fa + fb

    def sample(a, p):
        # value of the relaxed objective at an actual (alpha, psi) node
        b = lam_of(a)
        r1, r2 = cache.rng(a), cache.rng(b)
        if r1 is None or r2 is None or not (r1[0] <= p <= r1[1] and r2[0] <= p <= r2[1]):
            return -math.inf
        return float(ep.g(p)) + cache.F(p, a) + cache.F(p, b)

    cells = []
    for a_lo, a_hi in zip(alpha_grid, alpha_grid[1:]):
        if a_hi <= a_lo:
            continue
        mult = dual_multipliers(0.5 * (a_lo + a_hi), z, cap)
        psi_l = psi_lower_bound(a_lo, a_hi, z, cap, mult)
        if psi_l is None or psi_l > theta0:
            continue
        k = max(1, math.ceil((theta0 - psi_l) / psi_step - 1e-9))
        psis = np.linspace(psi_l, theta0, k + 1)
        for p_lo, p_hi in zip(psis, psis[1:]):
            cells.append((a_lo, a_hi, float(p_lo), float(p_hi), psi_l, mult, math.inf))

    lower = -math.inf
    refine = alpha_tol is not None or psi_tol is not None
    alpha_tol = math.inf if alpha_tol is None else alpha_tol
    psi_tol = math.inf if psi_tol is None else psi_tol
    final = []
    while cells:
        scored = []
        for a_lo, a_hi, p_lo, p_hi, psi_l, mult, parent in cells:
            r = min(bound(a_lo, a_hi, p_lo, p_hi), parent)
            if r == -math.inf:
                continue
            if refine:
                lower = max(lower, sample(a_lo, p_hi), sample(a_lo, p_lo))
            scored.append((a_lo, a_hi, p_lo, p_hi, psi_l, mult, r))
        nxt = []
        for a_lo, a_hi, p_lo, p_hi, psi_l, mult, r in scored:
            if refine and r <= lower:
                continue
            split_a = a_hi - a_lo > alpha_tol
            split_p = p_hi - p_lo > psi_tol
            if not (split_a or split_p):
                final.append((a_lo, a_hi, p_lo, p_hi, r))
                continue
            a_parts = [(a_lo, 0.5 * (a_lo + a_hi)), (0.5 * (a_lo + a_hi), a_hi)] if split_a else [(a_lo, a_hi)]
            for al, ah in a_parts:
                pl = psi_l
                if split_a:
                    child = psi_lower_bound(al, ah, z, cap, mult)
                    if child is None:
                        continue
                    pl = max(psi_l, child)
                lo = max(p_lo, pl)
                if lo >= p_hi:
                    continue
                if split_p:
                    mid = 0.5 * (p_lo + p_hi)
                    parts = [(p_lo, mid), (mid, p_hi)]
                else:
                    parts = [(p_lo, p_hi)]
                for ql, qh in parts:
                    if qh <= lo:
                        continue
                    nxt.append((al, ah, max(ql, lo), qh, pl, mult, r))
        cells = nxt

    best, arg = -math.inf, None
    for a_lo, a_hi, p_lo, p_hi, r in final:
        if r > best + 1e-13:
            best, arg = r, H5Cell(a_lo, a_hi, p_lo, p_hi, h0 + r)
    value = h0 + max(best, lower)
    kept = [H5Cell(a, b, c, d, h0 + r) for a, b, c, d, r in final] if keep_cells else []
    return H5Result(value, theta0, arg, h0 + lower, kept, stats["bad"], len(cache.store))


def h5_bound_n4(
    ep: ExtensionPolynomial,
    alpha_grid=None,
    psi_step: float = 0.5,
    theta0: float | None = None,
    alpha_tol: float | None = None,
    psi_tol: float | None = None,
) -> float:
    """Safe over-estimate of ``h5`` (four dimensions) from the cell matrix."""
    return h5_cells(ep, alpha_grid, psi_step, theta0, alpha_tol, psi_tol).value


@dataclass
class H6Result:
    value: float
    cases: list  # (theta_lo, theta_hi, h5 part, tail term, case bound)

    def __float__(self):
        return float(self.value)


def h6_cases(
    ep: ExtensionPolynomial,
    split=(50.0,),
    alpha_step: float = 1.0,
    psi_step: float = 0.5,
    alpha_tol: float | None = None,
    psi_tol: float | None = None,
    known: dict | None = None,
) -> H6Result:
    """Six points: split the largest angle ``theta6`` over ``[theta_floor, theta0]``.

    ``theta6 >= theta_floor = arccos(sqrt z)``: otherwise all six project to
    the equatorial 2-sphere with separation above 90 degrees, and at most
    four such points exist.  On a piece ``[a, b]`` the five nearer points
    live in the cap of radius ``b``, giving ``h5(b) + f(-cos a)``.
    ``known`` maps a cap radius to an already computed five-point bound.
    """
    known = known or {}
    floor = _deg(math.acos(math.sqrt(ep.z)))
    pts = [floor] + [s for s in split if floor < s < ep.theta0] + [ep.theta0]
    cases = []
    for a, b in zip(pts, pts[1:]):
        if b in known:
            part = known[b]
        else:
            grid = _alpha_grid(ep, b, alpha_step)
            part = h5_cells(ep, grid, psi_step, b, alpha_tol, psi_tol).value
        tail = float(ep.g(a))
        cases.append((a, b, part, tail, part + tail))
    return H6Result(max(c[-1] for c in cases), cases)


def h6_bound_n4(ep: ExtensionPolynomial, split=(50.0,), **kw) -> float:
    return h6_cases(ep, split, **kw).value
