"""Univariate polynomials, Gegenbauer bases and certified sign/root checks.

Polynomials are stored in the monomial basis.  Coefficients are kept either
as :class:`fractions.Fraction` (exact mode) or as binary64 floats.  Exact
polynomials are evaluated in floating point by default; the exact values are
only used where a certificate needs them (Sturm sequences, endpoint signs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

__all__ = [
    "Polynomial",
    "GegenbauerExpansion",
    "RootBracket",
    "SignCertificate",
    "MonotoneCertificate",
    "gegenbauer",
    "gegenbauer_values",
    "to_gegenbauer",
    "from_gegenbauer",
    "isolate_roots",
    "certify_sign",
    "certify_monotone_decreasing",
    "max_on_interval",
    "symmetric_pair",
    "FRAGILE_MARGIN",
]

#: certifications whose margin falls below this are reported as fragile
FRAGILE_MARGIN = 1e-7


def _as_number(x):
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    return float(x)


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial ``sum(coeffs[k] * t**k)``.

    ``coeffs`` is normalised to a tuple with trailing zeros removed, keeping
    at least one entry so the zero polynomial is ``(0,)``.  A polynomial is
    exact when every coefficient is a ``Fraction``.
    """

    coeffs: tuple

    def __post_init__(self):
        cs = list(self.coeffs)
        if not cs:
            raise ValueError("coefficient sequence must not be empty")
        exact = all(isinstance(c, (Fraction, int)) and not isinstance(c, bool) for c in cs)
        if exact:
            cs = [Fraction(c) for c in cs]
        else:
            cs = [float(c) for c in cs]
            if not all(math.isfinite(c) for c in cs):
                raise ValueError("coefficients must be finite")
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def exact(cls, coeffs: Iterable) -> "Polynomial":
        """Build an exact polynomial; strings such as ``"2431/80"`` or ``"53.76"`` are accepted."""
        return cls(tuple(Fraction(c) for c in coeffs))

    @property
    def is_exact(self) -> bool:
        return isinstance(self.coeffs[0], Fraction)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @cached_property
    def values(self) -> np.ndarray:
        """Coefficients as a float64 array (converted once)."""
        return np.array([float(c) for c in self.coeffs], dtype=float)

    def __call__(self, t):
        return npoly.polyval(t, self.values)

    def exact_eval(self, t) -> Fraction:
        """Horner evaluation in rational arithmetic; ``t`` is converted exactly."""
        x = Fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + Fraction(c)
        return acc

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial((self.coeffs[0] * 0,))
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def to_float(self) -> "Polynomial":
        return Polynomial(tuple(float(c) for c in self.coeffs))

    def _binary(self, other, op):
        if not isinstance(other, Polynomial):
            other = Polynomial((_as_number(other),))
        if self.is_exact != other.is_exact:
            a, b = self.to_float().coeffs, other.to_float().coeffs
        else:
            a, b = self.coeffs, other.coeffs
        return op(a, b)

    def __add__(self, other):
        def add(a, b):
            n = max(len(a), len(b))
            z = a[0] * 0
            return Polynomial(tuple((a[i] if i < len(a) else z) + (b[i] if i < len(b) else z) for i in range(n)))

        return self._binary(other, add)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other if isinstance(other, Polynomial) else -_as_number(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            s = _as_number(other)
            if isinstance(s, float) and self.is_exact:
                return Polynomial(tuple(float(c) * s for c in self.coeffs))
            return Polynomial(tuple(c * s for c in self.coeffs))

        def mul(a, b):
            out = [a[0] * 0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                for j, y in enumerate(b):
                    out[i + j] += x * y
            return Polynomial(tuple(out))

        return self._binary(other, mul)

    __rmul__ = __mul__

    def to_json(self) -> list:
        return [float(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "Polynomial":
        return cls(tuple(float(c) for c in data))

    def __repr__(self):
        kind = "exact" if self.is_exact else "float"
        return f"Polynomial({[float(c) for c in self.coeffs]}, {kind})"


# ----------------------------------------------------------------------------
# Gegenbauer family
# ----------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _gegenbauer_exact(n: int, k: int) -> tuple:
    if k == 0:
        return (Fraction(1),)
    if k == 1:
        return (Fraction(0), Fraction(1))
    prev = list(_gegenbauer_exact(n, k - 1))
    prev2 = list(_gegenbauer_exact(n, k - 2))
    out = [Fraction(0)] * (k + 1)
    a = Fraction(2 * k + n - 4, k + n - 3)
    b = Fraction(k - 1, k + n - 3)
    for i, c in enumerate(prev):
        out[i + 1] += a * c
    for i, c in enumerate(prev2):
        out[i] -= b * c
    return tuple(out)


def gegenbauer(n: int, k: int) -> Polynomial:
    """Gegenbauer polynomial ``G_k^{(n)}`` normalised by ``G_k(1) = 1`` (exact coefficients)."""
    if int(n) != n or n < 3:
        raise ValueError(f"dimension must be an integer >= 3, got {n}")
    if int(k) != k or k < 0:
        raise ValueError(f"degree must be a nonnegative integer, got {k}")
    return Polynomial(_gegenbauer_exact(int(n), int(k)))


def gegenbauer_values(n: int, d: int, t) -> np.ndarray:
    """Matrix ``V[j, k] = G_k^{(n)}(t_j)`` for ``k = 0..d``, via the three-term recurrence."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty((t.size, d + 1))
    out[:, 0] = 1.0
    if d >= 1:
        out[:, 1] = t
    for k in range(2, d + 1):
        out[:, k] = ((2 * k + n - 4) * t * out[:, k - 1] - (k - 1) * out[:, k - 2]) / (k + n - 3)
    return out


@dataclass(frozen=True)
class GegenbauerExpansion:
    """Coefficients ``c_0..c_d`` of a polynomial in the ``G_k^{(n)}`` basis."""

    n: int
    coeffs: tuple

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("dimension must be >= 3")
        if not len(self.coeffs):
            raise ValueError("empty expansion")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def c0(self):
        return self.coeffs[0]

    def is_admissible(self) -> bool:
        """``c_0 > 0`` and every higher coefficient nonnegative."""
        return self.coeffs[0] > 0 and all(c >= 0 for c in self.coeffs[1:])

    def to_polynomial(self) -> Polynomial:
        return from_gegenbauer(self)

    def to_json(self) -> list:
        return [float(c) for c in self.coeffs]


def from_gegenbauer(expansion: GegenbauerExpansion) -> Polynomial:
    acc = Polynomial((expansion.coeffs[0] * 0,))
    for k, c in enumerate(expansion.coeffs):
        if c:
            acc = acc + gegenbauer(expansion.n, k) * c
    return acc


def to_gegenbauer(p: Polynomial, n: int) -> GegenbauerExpansion:
    """Expand ``p`` in the ``G_k^{(n)}`` basis by back substitution on leading terms."""
    rest = list(p.coeffs)
    d = len(rest) - 1
    out = [rest[0] * 0] * (d + 1)
    for k in range(d, -1, -1):
        g = gegenbauer(n, k).coeffs
        lead = g[-1] if p.is_exact else float(g[-1])
        ck = rest[k] / lead
        out[k] = ck
        if ck:
            for i, gc in enumerate(g):
                rest[i] -= ck * (gc if p.is_exact else float(gc))
    return GegenbauerExpansion(n, tuple(out))


# ----------------------------------------------------------------------------
# Root isolation
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class RootBracket:
    """Interval known to contain exactly one distinct root.

    ``status`` is ``"simple"`` (strict sign change across the bracket),
    ``"exact"`` (the root is a representable float, ``lo == hi``) or
    ``"multiplicity uncertain"`` (a multiple root: no sign change to certify).
    """

    lo: float
    hi: float
    status: str = "simple"

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, t: float) -> bool:
        return self.lo <= t <= self.hi


def _exact_coeffs(p: Polynomial) -> list:
    return [Fraction(c) for c in p.coeffs]


def _poly_rem(a: list, b: list) -> list:
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    while len(a) - 1 >= db and any(a):
        shift = len(a) - 1 - db
        q = a[-1] / lead
        for i, c in enumerate(b):
            a[i + shift] -= q * c
        a.pop()
        while len(a) > 1 and a[-1] == 0:
            a.pop()
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _sturm_chain(coeffs: list) -> list:
    p0 = list(coeffs)
    p1 = [k * c for k, c in enumerate(p0)][1:] or [Fraction(0)]
    chain = [p0, p1]
    while len(chain[-1]) > 1:
        r = _poly_rem(chain[-2], chain[-1])
        if len(r) == 1 and r[0] == 0:
            break
        chain.append([-c for c in r])
    return chain


def _horner(coeffs: list, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _variations(chain: list, x: Fraction) -> int:
    signs = []
    for q in chain:
        v = _horner(q, x)
        if v:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sturm_count(chain, a: Fraction, b: Fraction) -> int:
    """Distinct roots in ``(a, b]``."""
    return _variations(chain, a) - _variations(chain, b)


def isolate_roots(p: Polynomial, lo: float, hi: float, tol: float = 1e-12, method: str = "sturm") -> list:
    """Brackets around every distinct real root of ``p`` in ``[lo, hi]``.

    ``method="sturm"`` counts roots with a Sturm sequence in rational
    arithmetic (float coefficients are converted exactly, so the count is
    exact for the stored polynomial) and bisects each isolated root down to
    width ``tol``.  ``method="bisect"`` uses companion-matrix candidates
    refined by sign-change bisection.  Roots shared with ``p'`` are reported
    with status ``"multiplicity uncertain"``.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    if all(c == 0 for c in p.coeffs):
        raise ValueError("zero polynomial has no isolated roots")
    if p.degree == 0:
        return []
    if method == "bisect":
        return _isolate_float(p, lo, hi, tol)
    if method != "sturm":
        raise ValueError(f"unknown method {method!r}")

    coeffs = _exact_coeffs(p)
    chain = _sturm_chain(coeffs)
    gcd = chain[-1]
    multiple = len(gcd) > 1
    gchain = _sturm_chain(gcd) if multiple and len(gcd) > 2 else None

    a, b = Fraction(lo), Fraction(hi)
    out = []
    if _horner(coeffs, a) == 0:
        out.append(RootBracket(float(a), float(a), "exact"))
    ftol = Fraction(tol)

    def has_multiple(u, v):
        if not multiple:
            return False
        if len(gcd) == 2:
            r = -gcd[0] / gcd[1]
            return u < r <= v
        return _sturm_count(gchain, u, v) > 0

    stack = [(a, b, _sturm_count(chain, a, b))]
    found = []
    while stack:
        u, v, cnt = stack.pop()
        if cnt == 0:
            continue
        if cnt == 1:
            fu, fv = _horner(coeffs, u), _horner(coeffs, v)
            if fv == 0:
                found.append(RootBracket(float(v), float(v), "exact"))
                continue
            if fu * fv < 0 and not has_multiple(u, v):
                while v - u > ftol:
                    m = (u + v) / 2
                    fm = _horner(coeffs, m)
                    if fm == 0:
                        u = v = m
                        break
                    if (fm > 0) == (fu > 0):
                        u, fu = m, fm
                    else:
                        v = m
                status = "exact" if u == v else "simple"
                found.append(RootBracket(float(u), float(v), status))
                continue
            if v - u <= ftol:
                found.append(RootBracket(float(u), float(v), "multiplicity uncertain"))
                continue
        elif v - u <= ftol:
            found.append(RootBracket(float(u), float(v), "multiplicity uncertain"))
            continue
        m = (u + v) / 2
        stack.append((m, v, _sturm_count(chain, m, v)))
        stack.append((u, m, _sturm_count(chain, u, m)))
    out.extend(sorted(found, key=lambda r: r.lo))
    return out


def _isolate_float(p: Polynomial, lo: float, hi: float, tol: float) -> list:
    c = p.values
    scale = float(np.abs(c).sum())
    roots = np.roots(c[::-1])
    cand = sorted(
        float(r.real)
        for r in roots
        if abs(r.imag) <= 1e-6 * (1 + abs(r.real)) and lo - 1e-9 <= r.real <= hi + 1e-9
    )
    out = []
    for r in cand:
        r = min(max(r, lo), hi)
        if abs(p(r)) <= 1e-15 * scale and (r == lo or r == hi):
            out.append(RootBracket(r, r, "exact"))
            continue
        h = 1e-10 * (1 + abs(r))
        bracket = None
        while h < 1e-3:
            u, v = max(lo, r - h), min(hi, r + h)
            fu, fv = p(u), p(v)
            if fu == 0 or fv == 0 or fu * fv < 0:
                bracket = (u, v, fu)
                break
            h *= 10
        if bracket is None:
            out.append(RootBracket(max(lo, r - 1e-6), min(hi, r + 1e-6), "multiplicity uncertain"))
            continue
        u, v, fu = bracket
        while v - u > tol:
            m = 0.5 * (u + v)
            if m <= u or m >= v:
                break
            fm = p(m)
            if fm == 0:
                u = v = m
                break
            if (fm > 0) == (fu > 0):
                u, fu = m, fm
            else:
                v = m
        out.append(RootBracket(u, v, "exact" if u == v else "simple"))
    merged = []
    for br in out:
        if merged and br.lo <= merged[-1].hi:
            continue
        merged.append(br)
    return merged


# ----------------------------------------------------------------------------
# Maximisation and sign certificates
# ----------------------------------------------------------------------------


def _stationary_points(p: Polynomial, lo: float, hi: float) -> list:
    c = p.values
    if len(c) < 3:
        return []
    dc = npoly.polyder(c)
    full = dc
    # a negligible leading term only moves roots far outside [-1, 1]; it also overflows the companion matrix
    scale = np.abs(dc).max() if dc.size else 0.0
    while len(dc) > 1 and abs(dc[-1]) <= 1e-14 * scale:
        dc = dc[:-1]
    if len(dc) < 2:
        return []
    try:
        roots = np.roots(dc[::-1])
    except np.linalg.LinAlgError:
        # fall back to sign changes of p' on a fine grid
        t = np.linspace(lo, hi, 4097)
        v = npoly.polyval(t, full)
        idx = np.flatnonzero(np.sign(v[:-1]) != np.sign(v[1:]))
        return [float(0.5 * (t[i] + t[i + 1])) for i in idx if lo < 0.5 * (t[i] + t[i + 1]) < hi]
    dc = full
    keep = np.abs(roots.imag) <= 1e-7 * (1 + np.abs(roots.real))
    x = roots.real[keep]
    if x.size == 0:
        return []
    ddc = npoly.polyder(dc)
    for _ in range(3):
        # Newton polish, vectorised; a step is skipped where it would jump far
        d1 = npoly.polyval(x, dc)
        d2 = npoly.polyval(x, ddc)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(d2 != 0, d1 / d2, 0.0)
        step = np.where(np.isfinite(step) & (np.abs(step) <= 1e-3), step, 0.0)
        x = x - step
    return [float(t) for t in x if lo < t < hi]


def max_on_interval(p: Polynomial, lo: float, hi: float) -> tuple:
    """Global maximum of ``p`` on ``[lo, hi]`` as ``(value, argmax)``.

    Candidates are both endpoints and every real stationary point inside the
    interval; near-real complex roots of ``p'`` are kept too, which can only
    add feasible candidates.  Ties go to the smaller argument.
    """
    if hi < lo:
        raise ValueError("need lo <= hi")
    pts = [lo, hi] + _stationary_points(p, lo, hi)
    pts = np.array(sorted(set(pts)))
    vals = p(pts)
    best = float(vals.max())
    tie = 1e-13 * max(1.0, abs(best))
    idx = int(np.flatnonzero(vals >= best - tie)[0])
    return float(vals[idx]), float(pts[idx])


def min_on_interval(p: Polynomial, lo: float, hi: float) -> tuple:
    v, t = max_on_interval(-p, lo, hi)
    return -v, t


@dataclass(frozen=True)
class SignCertificate:
    """Outcome of a sign check on a closed interval.

    ``margin`` is the smallest slack of the claimed sign at the interior
    stationary points and at endpoints that are not roots; it measures how
    close ``p`` comes to violating the claim away from its known zeros.
    """

    ok: bool
    margin: float
    roots: tuple = ()

    @property
    def fragile(self) -> bool:
        return self.ok and self.margin < FRAGILE_MARGIN

    def __bool__(self):
        return self.ok


def certify_sign(p: Polynomial, lo: float, hi: float, sign: str = "nonpositive") -> SignCertificate:
    """Certify ``p <= 0`` (or ``>= 0``) on ``[lo, hi]``.

    The roots in the interval are isolated, the interval is cut at them and
    the sign is checked at the middle of every piece and at the endpoints.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    if sign not in ("nonpositive", "nonnegative"):
        raise ValueError(f"unknown sign {sign!r}")
    s = -1.0 if sign == "nonpositive" else 1.0
    if all(c == 0 for c in p.coeffs):
        return SignCertificate(True, 0.0)
    roots = tuple(isolate_roots(p, lo, hi)) if p.degree > 0 else ()

    def signed(t):
        if p.is_exact:
            return s * float(p.exact_eval(t)) if p.exact_eval(t) != 0 else 0.0
        return s * float(p(t))

    tol = 0.0 if p.is_exact else 1e-12 * float(np.abs(p.values).sum())
    cuts = [lo] + [r.mid for r in roots if lo < r.mid < hi] + [hi]
    ok = True
    for u, v in zip(cuts, cuts[1:]):
        if v > u and signed(0.5 * (u + v)) < -tol:
            ok = False
    for end in (lo, hi):
        if signed(end) < -tol:
            ok = False

    # roots just outside the interval count too: an endpoint placed on a known root has no slack
    nearby = isolate_roots(p, lo - 1e-5, hi + 1e-5) if p.degree > 0 else ()
    near_root = lambda t: any(abs(t - r.mid) <= 1e-5 for r in nearby)  # noqa: E731
    slacks = [signed(t) for t in _stationary_points(p, lo, hi) if not near_root(t)]
    slacks += [signed(t) for t in (lo, hi) if not near_root(t)]
    margin = min(slacks) if slacks else 0.0
    if not ok:
        margin = min(margin, 0.0)
    return SignCertificate(ok, float(margin), roots)


@dataclass(frozen=True)
class MonotoneCertificate:
    ok: bool
    margin: float
    drop: float

    @property
    def fragile(self) -> bool:
        return self.ok and self.margin < FRAGILE_MARGIN

    def __bool__(self):
        return self.ok


def certify_monotone_decreasing(p: Polynomial, lo: float, hi: float) -> MonotoneCertificate:
    """Certify ``p`` decreasing on ``[lo, hi]``: ``p' <= 0`` there and ``p(lo) > p(hi)``.

    ``margin`` is the sign margin of ``p'``; ``drop`` is ``p(lo) - p(hi)``.
    """
    dp = p.derivative()
    cert = certify_sign(dp, lo, hi, "nonpositive")
    drop = float(p.exact_eval(lo) - p.exact_eval(hi)) if p.is_exact else float(p(lo) - p(hi))
    return MonotoneCertificate(cert.ok and drop > 0, min(cert.margin, drop), drop)


# ----------------------------------------------------------------------------
# Composition helper
# ----------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _pair_nodes(d: int):
    # Chebyshev points and the inverse monomial Vandermonde matrix on them
    s = np.cos(np.pi * (np.arange(d + 1) + 0.5) / (d + 1))
    return s, np.sqrt(1 - s * s), np.linalg.inv(np.vander(s, d + 1, increasing=True))


def symmetric_pair(p: Polynomial, c0: float, c1: float, b: float) -> Polynomial:
    """Polynomial ``q(s) = p(c0 + c1*s + b*w) + p(c0 + c1*s - b*w)`` with ``w**2 = 1 - s**2``.

    Odd powers of ``w`` cancel, so ``q`` is a polynomial in ``s`` of degree at
    most ``deg p``.  This is how a sum over two points placed symmetrically on
    a circle becomes a one-variable polynomial in ``s = cos(u)``.  The
    coefficients are recovered by interpolation at Chebyshev points.
    """
    c = p.values
    d = len(c) - 1
    s, w, inv = _pair_nodes(d)
    lin = c0 + c1 * s
    vals = npoly.polyval(lin + b * w, c) + npoly.polyval(lin - b * w, c)
    return Polynomial(tuple(inv @ vals))
