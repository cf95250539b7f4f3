"""Search for extension polynomials by linear programming on a grid.

The unknowns are the Gegenbauer coefficients ``c_1..c_d`` (``c_0 = 1``) and
``F0``, a bound on the contribution of the points near the antipode.  The
program asks that ``f`` decrease on ``[-1, -t0]``, stay nonpositive on
``[-t0, z]`` and that ``f(1) + m f(b_m) <= f(1) + F0`` at the centres of the
regular simplices; ``E = F0 + f(1)`` is minimised.  With ``t0 = 1`` this is
the classic Delsarte program for ``f(1)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .lpsolve import LinearProgram, LpSolution, audit, solve
from .orthopoly import (
    GegenbauerExpansion,
    Polynomial,
    certify_monotone_decreasing,
    certify_sign,
    from_gegenbauer,
    gegenbauer_values,
    max_on_interval,
)

__all__ = [
    "SearchConfig",
    "SearchResult",
    "SearchInfeasible",
    "simplex_center_products",
    "index_set",
    "grid",
    "build_lp",
    "search",
    "lowered_expansion",
]


class SearchInfeasible(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    n: int
    z: float
    t0: float
    d: int
    N: int = 2000
    #: put the grid cell around ``-t0`` under both the monotone and the sign constraints
    straddle: bool = True

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("n must be >= 3")
        if not self.z < self.t0 <= 1:
            raise ValueError("need z < t0 <= 1")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.N < 10:
            raise ValueError("N must be >= 10")

    @property
    def delsarte(self) -> bool:
        return self.t0 >= 1.0

    @classmethod
    def from_json(cls, text: str) -> "SearchConfig":
        data = json.loads(text)
        return cls(
            int(data["n"]),
            float(data["z"]),
            float(data["t0"]),
            int(data["d"]),
            int(data.get("N", 2000)),
            bool(data.get("straddle", True)),
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def index_set(n: int) -> list:
    """Simplex sizes used in the centre constraints: ``1..n`` and ``2n - 2``."""
    return list(range(1, n + 1)) + [2 * n - 2]


def simplex_center_products(n: int, z: float, m: int) -> float:
    """``b_m = -cos R_m`` where ``R_m`` is the circumradius of the regular m-point configuration."""
    if m not in index_set(n):
        raise ValueError(f"m={m} not in I_n")
    if m == 2 * n - 2 and m > n:
        return -math.sqrt(z)
    return -math.sqrt((1 + (m - 1) * z) / m)


def grid(cfg: SearchConfig) -> np.ndarray:
    a = -1 + (1 + cfg.z) * np.arange(cfg.N + 1) / cfg.N
    a[-1] = cfg.z
    return a


def _straddle(a: np.ndarray, t0: float) -> int:
    """Index ``j*`` with ``a[j*] <= -t0 < a[j*+1]``."""
    return int(np.searchsorted(a, -t0, side="right") - 1)


def build_lp(cfg: SearchConfig) -> LinearProgram:
    """Variables ``(F0, c_1..c_d)``, or ``(c_1..c_d)`` in Delsarte mode.

    With ``straddle`` the cell ``[a_j*, a_j*+1]`` around ``-t0`` carries both
    constraint families.  Without it only pairs inside ``[-1, -t0]`` and
    points inside ``[-t0, z]`` are used; finer nested grids then only add
    constraints, so ``E`` cannot decrease with ``N``.
    """
    a = grid(cfg)
    G = gegenbauer_values(cfg.n, cfg.d, a)[:, 1:]  # constant term is c_0 = 1
    off = 0 if cfg.delsarte else 1
    nv = cfg.d + off
    rows, rel, rhs = [], [], []
    js = _straddle(a, cfg.t0)
    last_pair, first_point = js, max(js, 0)
    if not cfg.straddle:
        last_pair = js - 1
        first_point = js if a[js] >= -cfg.t0 else js + 1
    if not cfg.delsarte:
        # f(a_j) >= f(a_{j+1}) on [-1, -t0]
        for j in range(0, last_pair + 1):
            r = np.zeros(nv)
            r[off:] = G[j] - G[j + 1]
            rows.append(r)
            rel.append(">=")
            rhs.append(0.0)
    # f(a_j) <= 0 on [-t0, z]
    for j in range(first_point, cfg.N + 1):
        r = np.zeros(nv)
        r[off:] = G[j]
        rows.append(r)
        rel.append("<=")
        rhs.append(-1.0)
    if not cfg.delsarte:
        for m in index_set(cfg.n):
            b = simplex_center_products(cfg.n, cfg.z, m)
            r = np.zeros(nv)
            r[0] = -1.0 / m
            r[off:] = gegenbauer_values(cfg.n, cfg.d, b)[0, 1:]
            rows.append(r)
            rel.append("<=")
            rhs.append(-1.0)
    obj = np.ones(nv)
    return LinearProgram(obj, np.array(rows), rel, np.array(rhs))


@dataclass
class SearchResult:
    config: SearchConfig
    expansion: GegenbauerExpansion
    F0: float
    E: float
    status: str  # "certified" or "grid-only"
    certification: dict = field(default_factory=dict)
    lp_residual: float = 0.0

    @property
    def polynomial(self) -> Polynomial:
        return from_gegenbauer(self.expansion)

    def to_json(self) -> str:
        return json.dumps(
            {
                "config": asdict(self.config),
                "gegenbauer": [float(c) for c in self.expansion.coeffs],
                "monomial": [float(c) for c in self.polynomial.coeffs],
                "F0": self.F0,
                "E": self.E,
                "status": self.status,
                "certification": self.certification,
            }
        )


def search(cfg: SearchConfig, coeff_override=None) -> SearchResult:
    """Solve the grid program and re-check its polynomial on the continuum.

    ``coeff_override`` replaces ``c_1..c_d`` (for a hand-rounded polynomial)
    before the checks; ``F0`` is then recomputed from the centre constraints.
    """
    lp = build_lp(cfg)
    sol: LpSolution = solve(lp)
    if not sol.optimal:
        raise SearchInfeasible(f"grid program is {sol.status} for {cfg}")
    off = 0 if cfg.delsarte else 1
    c = np.maximum(sol.x[off:], 0.0)
    F0 = 0.0 if cfg.delsarte else float(sol.x[0])
    if coeff_override is not None:
        c = np.asarray(coeff_override, dtype=float)
        if c.size != cfg.d:
            raise ValueError("override must give c_1..c_d")
    coeffs = (1.0,) + tuple(float(x) for x in c)
    exp = GegenbauerExpansion(cfg.n, coeffs)
    f = from_gegenbauer(exp)
    if not cfg.delsarte:
        centre = [m * float(f(simplex_center_products(cfg.n, cfg.z, m))) for m in index_set(cfg.n)]
        if coeff_override is not None:
            F0 = max(centre + [0.0])
        else:
            F0 = max([F0] + centre)
    f1 = float(f(1.0))
    E = F0 + f1
    cert = {}
    lo = -cfg.t0
    s = certify_sign(f, lo, cfg.z, "nonpositive")
    cert["nonpositive"] = {"ok": s.ok, "margin": s.margin}
    if not cfg.delsarte:
        mono = certify_monotone_decreasing(f, -1.0, lo)
        cert["decreasing"] = {"ok": mono.ok, "margin": mono.margin}
    ok = all(v["ok"] for v in cert.values())
    return SearchResult(cfg, exp, F0, E, "certified" if ok else "grid-only", cert, audit(lp, sol.x))


def lowered_expansion(result: SearchResult, pad: float = 1e-9) -> GegenbauerExpansion | None:
    """Lower ``c_0`` so that ``f`` is nonpositive on ``[-t0, z]`` off the grid too.

    Grid solutions may poke above zero between grid points by ~1e-7.  Taking
    ``c_0 = 1 - eta`` with ``eta`` just above that excess gives a polynomial
    the continuous checks accept, at the price of dividing by ``c_0 < 1``.
    Returns ``None`` when ``f`` is not decreasing on ``[-1, -t0]``, which no
    constant shift repairs.
    """
    cfg = result.config
    f = result.polynomial
    if not cfg.delsarte and not certify_monotone_decreasing(f, -1.0, -cfg.t0).ok:
        return None
    excess, _ = max_on_interval(f, -cfg.t0, cfg.z)
    eta = max(excess, 0.0) * (1 + 1e-6) + pad
    coeffs = list(result.expansion.coeffs)
    coeffs[0] -= eta
    if coeffs[0] <= 0:
        return None
    return GegenbauerExpansion(cfg.n, tuple(coeffs))
