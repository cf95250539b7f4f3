"""Assemble ``h_0 .. h_mu`` and the final bound ``h_max / c_0``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..spherical import DEFAULT_TABLE, AngleCapacityTable, CodeProblem, mu_upper_bound, projected_angle
from .extension import ExtensionPolynomial
from .gamma5 import h5_cells, h6_cases
from .planar import F1_argmax, h01, rhomb_cells, triangle_cells
from .simplex import LemmaHypothesisError, h_simplex_powersum, h_simplex_triangulation

__all__ = ["HEntry", "HReport", "HOptions", "UnsupportedMu", "h_report", "MIN_SLACK"]

#: no conclusion is drawn when the bound is this close to the next integer
MIN_SLACK = 1e-4


class UnsupportedMu(ValueError):
    """No implemented method covers configurations of this many points."""


@dataclass
class HEntry:
    m: int
    value: float
    method: str
    kind: str  # "exact" or "over-estimate"
    witness: dict = field(default_factory=dict)


@dataclass
class HOptions:
    """Grid and tolerance choices for the over-estimating methods."""

    triangle_grid: tuple | None = None
    rhomb_split: tuple | None = None
    eps: float = 0.05
    alpha_step: float = 1.0
    psi_step: float = 0.5
    alpha_tol: float | None = 1 / 64
    psi_tol: float | None = 1 / 128
    h6_split: tuple = (50.0,)
    prefer_powersum: bool = True
    #: stop as soon as some ``h_m / c_0`` reaches this value (the report is then partial)
    stop_above: float | None = None


@dataclass
class HReport:
    n: int
    z: float
    t0: float
    theta0: float
    mu: int
    entries: list
    h_max: float
    c0: float
    bound: float
    slack: float
    projected_angle: float | None = None
    complete: bool = True

    @property
    def h(self) -> list:
        return [e.value for e in self.entries]

    @property
    def size_bound(self) -> int | None:
        """``floor(bound)`` when the slack to the next integer is comfortable, else ``None``."""
        if self.slack < MIN_SLACK:
            return None
        return math.floor(self.bound)


def _pair_entry(ep):
    h0 = h01(ep)[0]
    v, th = F1_argmax(ep, ep.delta)
    return HEntry(2, h0 + v, "pair on an arc", "exact", {"theta": [ep.delta - th, th]})


def _best_cell(cells):
    a, b, w = max(cells, key=lambda c: (c[2], -c[0]))
    return w, {"cell": [a, b]}


def _simplex_entry(ep, m, opts):
    if ep.n == 4 and m in (3, 4) and opts.prefer_powersum:
        try:
            r = h_simplex_powersum(ep, m)
            return HEntry(m, r.value, "power sums", "exact", {"theta": list(r.angles), **r.info})
        except LemmaHypothesisError:
            pass
    r = h_simplex_triangulation(ep, m, opts.eps)
    return HEntry(m, r.value, "triangulation", "over-estimate", {"theta": list(r.angles), "lower": r.lower, **r.info})


def h_report(
    ep: ExtensionPolynomial,
    table: AngleCapacityTable = DEFAULT_TABLE,
    options: HOptions | None = None,
    mu: int | None = None,
) -> HReport:
    """Compute ``mu``, every ``h_m`` up to it, ``h_max`` and ``h_max / c_0``.

    ``mu`` may be supplied when the capacity table does not cover ``n - 1``.
    """
    opts = options or HOptions()
    n = ep.n
    pa = None
    if ep.is_delsarte:
        mu = 0
    elif mu is None:
        mu = mu_upper_bound(CodeProblem(n, ep.z), ep.t0, table)
        pa = projected_angle(ep.z, ep.t0)
    limit = {3: 4, 4: 6}.get(n, n)
    if mu > limit:
        raise UnsupportedMu(f"mu={mu} exceeds the implemented methods for n={n} (max {limit})")
    h0, h1 = h01(ep)
    entries = [HEntry(0, h0, "closed form", "exact", {"theta": []})]
    if mu >= 1:
        entries.append(HEntry(1, h1, "closed form", "exact", {"theta": [0.0]}))
    if mu >= 2:
        entries.append(_pair_entry(ep))
    known = {}
    c0 = ep.c0

    def stop():
        return opts.stop_above is not None and max(e.value for e in entries) / c0 >= opts.stop_above

    complete = True
    for m in range(3, mu + 1):
        if stop():
            complete = False
            break
        if n == 3 and m == 3:
            cells = triangle_cells(ep, opts.triangle_grid)
            w, wit = _best_cell(cells) if cells else (-math.inf, {})
            entries.append(HEntry(3, w, "triangle cells", "over-estimate", {**wit, "cells": len(cells)}))
        elif n == 3 and m == 4:
            cells = rhomb_cells(ep, opts.rhomb_split)
            w, wit = _best_cell(cells) if cells else (-math.inf, {})
            entries.append(HEntry(4, w, "rhomb cells", "over-estimate", {**wit, "cells": len(cells)}))
        elif m <= n:
            entries.append(_simplex_entry(ep, m, opts))
        elif n == 4 and m == 5:
            r = h5_cells(ep, None, opts.psi_step, None, opts.alpha_tol, opts.psi_tol)
            arg = r.argmax
            wit = {"alpha": [arg.alpha_lo, arg.alpha_hi], "psi": [arg.psi_lo, arg.psi_hi]} if arg else {}
            wit["lower"] = r.lower
            known[ep.theta0] = r.value
            entries.append(HEntry(5, r.value, "five-point cells", "over-estimate", wit))
        elif n == 4 and m == 6:
            r = h6_cases(ep, opts.h6_split, opts.alpha_step, opts.psi_step, opts.alpha_tol, opts.psi_tol, known)
            cases = [{"theta6": [a, b], "h5": h5, "tail": t, "bound": v} for a, b, h5, t, v in r.cases]
            entries.append(HEntry(6, r.value, "six-point split", "over-estimate", {"cases": cases}))
        else:  # pragma: no cover - guarded by limit
            raise UnsupportedMu(f"no method for m={m}, n={n}")
    h_max = max(e.value for e in entries)
    bound = h_max / c0
    slack = math.floor(bound) + 1 - bound
    return HReport(n, ep.z, ep.t0, ep.theta0, mu, entries, h_max, c0, bound, slack, pa, complete)
