"""Certificates: the chain of checks behind a kissing-number bound, as JSON."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from ..hbound import AssumptionViolated, ExtensionPolynomial, HOptions, HReport, MIN_SLACK, UnsupportedMu, h_report
from ..orthopoly import FRAGILE_MARGIN, GegenbauerExpansion, Polynomial, to_gegenbauer
from ..spherical import DEFAULT_TABLE, CapacityTableIncomplete, PointConfig, witness_config

__all__ = ["Check", "Certificate", "run_pipeline", "fmt"]

SIG_DIGITS = 12
#: slack allowed when validating a witness code against z
WITNESS_TOL = 1e-12


def fmt(x):
    """Round to 12 significant digits; non-finite values become ``None``."""
    if x is None:
        return None
    if isinstance(x, (list, tuple)):
        return [fmt(v) for v in x]
    if isinstance(x, bool) or isinstance(x, int):
        return x
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.{SIG_DIGITS}g}")


@dataclass
class Check:
    name: str
    ok: bool
    margin: float
    detail: str = ""

    def as_dict(self) -> dict:
        d = {"name": self.name, "status": "pass" if self.ok else "fail", "margin": fmt(self.margin)}
        if self.ok and self.margin < FRAGILE_MARGIN:
            d["fragile"] = True
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class Certificate:
    n: int
    z: float
    monomial: list
    gegenbauer: list
    checks: list = field(default_factory=list)
    mu: int | None = None
    h: list = field(default_factory=list)
    h_max: float | None = None
    bound: float | None = None
    witness: dict | None = None
    conclusion: str | None = None
    report: HReport | None = None

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.ok and c.margin > 0 for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "problem": {"n": self.n, "z": fmt(self.z)},
            "polynomial": {"monomial": fmt(self.monomial), "gegenbauer": fmt(self.gegenbauer)},
            "checks": [c.as_dict() for c in self.checks],
            "mu": self.mu,
            "h": [
                {"m": e.m, "value": fmt(e.value), "method": e.method, "kind": e.kind}
                for e in self.h
            ],
            "h_max": fmt(self.h_max),
            "bound": fmt(self.bound),
            "witness": self.witness,
            "conclusion": self.conclusion,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)


def _mu_margin(n: int, omega: float, mu: int, table) -> float:
    """How far the projected angle sits above the threshold that yields ``mu``."""
    if n - 1 == 2:
        return omega - 360.0 / (mu + 1)
    rows = sorted(table.entries.get(n - 1, ()), key=lambda r: -r[0])
    for thr, cap in rows:
        if omega > thr and cap == mu:
            return omega - thr
    return math.nan


def run_pipeline(
    f: Polynomial,
    n: int,
    z: float,
    t0: float | None = None,
    options: HOptions | None = None,
    witness: str | PointConfig | None = None,
    expansion: GegenbauerExpansion | None = None,
    table=DEFAULT_TABLE,
    label: str | None = None,
) -> Certificate:
    """Validate ``f``, bound ``h_max`` and, when every check passes, state the size bound.

    With a witness configuration of exactly ``floor(bound)`` points the
    conclusion is an equality ``k = ...``; otherwise it is ``k <= ...``.
    A failing check stops the chain; the certificate then has no conclusion.
    """
    exp = expansion if expansion is not None else to_gegenbauer(f, n)
    cert = Certificate(n, z, [float(c) for c in f.coeffs], [float(c) for c in exp.coeffs])
    checks = cert.checks

    neg = [c for c in exp.coeffs[1:] if c < 0]
    adm_margin = float(min(neg)) if neg else float(exp.coeffs[0])
    ok = exp.is_admissible()
    checks.append(Check("admissible", ok, adm_margin, "" if ok else "negative Gegenbauer coefficient"))
    if not ok:
        return cert
    try:
        if expansion is not None:
            ep = ExtensionPolynomial.from_expansion(expansion, z, t0)
        else:
            ep = ExtensionPolynomial.build(f, n, z, t0)
    except AssumptionViolated as exc:
        checks.append(Check("assumption", False, 0.0, str(exc)))
        return cert
    if ep.is_delsarte:
        checks.append(Check("nonpositive on [-1, z]", ep.sign_cert.ok, ep.sign_cert.margin))
    else:
        checks.append(Check("root t0 > z", True, ep.t0 - z, f"t0={ep.t0:.12g}"))
        checks.append(Check("nonpositive on [-t0, z]", ep.sign_cert.ok, ep.sign_cert.margin))
        checks.append(Check("decreasing on [-1, -t0]", ep.monotone_cert.ok, ep.monotone_cert.margin))
    try:
        rep = h_report(ep, table, options)
    except (UnsupportedMu, CapacityTableIncomplete) as exc:
        checks.append(Check("mu", False, 0.0, str(exc)))
        return cert
    cert.report = rep
    cert.mu = rep.mu
    if rep.projected_angle is not None:
        checks.append(Check("mu", True, _mu_margin(n, rep.projected_angle, rep.mu, table), f"projected angle {rep.projected_angle:.6f}"))
    cert.h = list(rep.entries)
    cert.h_max = rep.h_max
    cert.bound = rep.bound
    size = math.floor(rep.bound)
    checks.append(Check("integer slack", rep.complete and rep.slack >= MIN_SLACK, rep.slack))
    if witness is not None:
        cfg = witness_config(witness) if isinstance(witness, str) else witness
        worst = cfg.max_inner_product()
        margin = z + WITNESS_TOL - worst
        ok = margin > 0 and cfg.n == n
        cert.witness = {"name": cfg.name, "points": len(cfg), "max_inner_product": fmt(worst)}
        checks.append(Check("witness code", ok, margin, f"{len(cfg)} points"))
    if not cert.passed:
        return cert
    name = label or f"k({n})"
    if cert.witness is not None and cert.witness["points"] == size:
        cert.conclusion = f"{name}={size}"
    else:
        cert.conclusion = f"{name}<={size}"
    return cert
