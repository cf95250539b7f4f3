"""The two certified extension polynomials, stored with exact rational coefficients."""

from __future__ import annotations

from .orthopoly import Polynomial

# degree-9 polynomial used for three dimensions (z = 1/2), coefficients of t^0..t^9
K3_POLY = Polynomial.exact(
    ["-1/200", "1/10", "-213/100", "-83/10", "343/40", "18333/400", "0", "-1287/20", "0", "2431/80"]
)

# degree-9 polynomial used for four dimensions (z = 1/2)
K4_POLY = Polynomial.exact(
    ["-0.016", "-0.434", "-4.128", "-9.832", "16.384", "70.56", "0", "-107.52", "0", "53.76"]
)

NAMED = {"k3poly": (3, K3_POLY), "k4poly": (4, K4_POLY)}
