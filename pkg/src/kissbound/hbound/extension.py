"""Validated extension polynomials: admissible f with a certified root -t0."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..orthopoly import (
    GegenbauerExpansion,
    MonotoneCertificate,
    Polynomial,
    RootBracket,
    SignCertificate,
    certify_monotone_decreasing,
    certify_sign,
    from_gegenbauer,
    isolate_roots,
    to_gegenbauer,
)

__all__ = ["ExtensionPolynomial", "AssumptionViolated"]


class AssumptionViolated(ValueError):
    """f is not admissible, or is not decreasing then nonpositive on [-1, z]."""


@dataclass(frozen=True)
class ExtensionPolynomial:
    """An admissible ``f`` that decreases on ``[-1, -t0]`` and is nonpositive on ``[-t0, z]``.

    Build instances with :meth:`build`, which runs every check.  ``t0`` is the
    conservative end of the root bracket (the smaller ``t0``, hence the larger
    cap ``theta0``).  When ``f`` is already nonpositive on the whole of
    ``[-1, z]`` there is no root and ``t0 = 1``: the plain Delsarte case.
    """

    f: Polynomial
    n: int
    z: float
    expansion: GegenbauerExpansion
    t0: float
    t0_bracket: RootBracket | None
    sign_cert: SignCertificate
    monotone_cert: MonotoneCertificate | None

    @property
    def theta0(self) -> float:
        """Cap radius ``arccos t0`` in degrees."""
        return math.degrees(math.acos(self.t0))

    @property
    def delta(self) -> float:
        return math.degrees(math.acos(self.z))

    @property
    def c0(self) -> float:
        return float(self.expansion.c0)

    @property
    def is_delsarte(self) -> bool:
        return self.t0 >= 1.0

    def g(self, theta):
        """``f(-cos theta)`` for ``theta`` in degrees (scalar or array)."""
        import numpy as np

        return self.f(-np.cos(np.radians(theta)))

    @classmethod
    def build(cls, f: Polynomial, n: int, z: float, t0: float | None = None) -> "ExtensionPolynomial":
        """Validate ``f`` for dimension ``n`` and cap ``z``.

        ``t0`` may be given to use a smaller cap than the root of ``f``; it
        must not exceed the certified root value.
        """
        return cls._validate(f, n, z, to_gegenbauer(f, n), t0)

    @classmethod
    def from_expansion(cls, expansion: GegenbauerExpansion, z: float, t0: float | None = None) -> "ExtensionPolynomial":
        """Like :meth:`build` but trusts the given Gegenbauer coefficients.

        Converting a float polynomial back to the Gegenbauer basis can turn a
        zero coefficient into ``-1e-17``; starting from the expansion avoids that.
        """
        return cls._validate(from_gegenbauer(expansion), expansion.n, z, expansion, t0)

    @classmethod
    def _validate(cls, f, n, z, expansion, t0):
        if not 0 <= z < 1:
            raise AssumptionViolated("z must lie in [0, 1)")
        if not expansion.is_admissible():
            raise AssumptionViolated("Gegenbauer coefficients are not admissible")
        zq = Fraction(z) if f.is_exact else z
        roots = isolate_roots(f, -1.0, z)
        below = [r for r in roots if r.hi < z]
        if not below:
            cert = certify_sign(f, -1.0, z, "nonpositive")
            if not cert.ok:
                raise AssumptionViolated("f has no root left of z but is positive somewhere")
            return cls(f, n, z, expansion, 1.0, None, cert, None)
        bracket = below[0]
        if bracket.status == "multiplicity uncertain":
            raise AssumptionViolated("the root -t0 is not simple")
        root_t0 = -bracket.hi
        if t0 is None:
            t0 = root_t0
        elif t0 > root_t0:
            raise AssumptionViolated(f"t0={t0} exceeds the certified root value {root_t0}")
        if not t0 > z:
            raise AssumptionViolated("need t0 > z")
        sign = certify_sign(f, bracket.hi, float(zq), "nonpositive")
        if not sign.ok:
            raise AssumptionViolated("f is positive somewhere on [-t0, z]")
        mono = certify_monotone_decreasing(f, -1.0, -t0)
        if not mono.ok:
            raise AssumptionViolated("f is not decreasing on [-1, -t0]")
        return cls(f, n, z, expansion, float(t0), bracket, sign, mono)

    def with_theta0(self, theta0: float) -> "ExtensionPolynomial":
        """Same polynomial with a smaller cap radius (a larger ``t0``)."""
        t0 = math.cos(math.radians(theta0))
        if t0 < self.t0 - 1e-15:
            raise ValueError("the cap can only shrink")
        return ExtensionPolynomial(
            self.f, self.n, self.z, self.expansion, t0, self.t0_bracket, self.sign_cert, self.monotone_cert
        )
