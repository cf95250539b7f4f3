import dataclasses
import math
import types

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kissbound.hbound import (
    F1,
    F2,
    REFERENCE_RHOMB_SPLIT,
    REFERENCE_TRIANGLE_GRID,
    ExtensionPolynomial,
    F1_argmax,
    F_arc,
    LemmaHypothesisError,
    UnsupportedMu,
    arc_max,
    check_powersum_hypotheses,
    circumradius,
    h01,
    h2,
    h3_triangle_n3,
    h4_rhomb_n3,
    h5_cells,
    h6_cases,
    h_report,
    h_simplex_powersum,
    h_simplex_triangulation,
    lambda_angle,
    powersum_range,
    regular_simplex,
    rho,
    rhomb_cells,
    sigma,
    triangle_cells,
)
from kissbound.hbound.gamma5 import _alpha_grid
from kissbound.orthopoly import Polynomial
from kissbound.polysearch import SearchConfig, lowered_expansion, search


# ---------------------------------------------------------------- closed forms


def test_h01_k3(ep3):
    h0, h1 = h01(ep3)
    assert abs(h0 - 10.11) < 1e-9 and abs(h1 - 12.88) < 1e-9


def test_h01_k4(ep4):
    h0, h1 = h01(ep4)
    assert abs(h0 - 18.774) < 1e-9 and abs(h1 - 24.48) < 1e-9


def test_h01_vanishing_at_minus_one():
    stub = types.SimpleNamespace(f=Polynomial.exact(["1", "1"]))
    h0, h1 = h01(stub)
    assert h0 == h1 == 2.0


# ---------------------------------------------------------------- pairs


def _brute_F1(ep, psi, samples=1_000_000):
    th = np.linspace(psi / 2, min(ep.theta0, psi), samples)
    return float(np.max(ep.g(th) + ep.g(psi - th)))


def test_F1_k3_brute_force(ep3):
    exact = F1(ep3, 60.0)
    brute = _brute_F1(ep3, 60.0)
    assert exact >= brute - 1e-12
    assert exact - brute < 1e-8
    assert exact == pytest.approx(2.7649, abs=5e-4)


def test_F1_k4_symmetric_maximum(ep4):
    val, theta = F1_argmax(ep4, 60.0)
    assert theta == pytest.approx(30.0, abs=1e-9)
    assert val == pytest.approx(2 * float(ep4.g(30.0)), abs=1e-10)
    assert _brute_F1(ep4, 60.0) <= val + 1e-12


@pytest.mark.parametrize("name", ["ep3", "ep4"])
def test_F1_decreasing(name, request):
    ep = request.getfixturevalue(name)
    psis = np.linspace(ep.delta, 2 * ep.theta0, 60)
    vals = [F1(ep, p) for p in psis]
    assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


def test_F1_range_checked(ep3):
    with pytest.raises(ValueError):
        F1(ep3, 50.0)
    with pytest.raises(ValueError):
        F1(ep3, 2 * ep3.theta0 + 1)


def test_h2_values(ep3, ep4):
    assert h2(ep3) == pytest.approx(12.8749, abs=5e-4)
    assert h2(ep4) == pytest.approx(24.8644, abs=5e-4)


def test_h2_constant_polynomial(ep3):
    const = dataclasses.replace(ep3, f=Polynomial.exact(["2"]))
    assert h2(const) == pytest.approx(6.0, abs=1e-12)


def test_h1_h2_order(ep3, ep4):
    assert h01(ep4)[1] < h2(ep4)
    # in three dimensions the antipodal pair beats two points at 60 degrees: 12.88 > 12.8749
    assert h01(ep3)[1] > h2(ep3)


# ---------------------------------------------------------------- triangles (n = 3)

REFERENCE_CELLS = (12.9425, 12.9648, 12.9508, 12.9606, 12.9519)


def test_triangle_cells_reference_grid(ep3):
    cells = triangle_cells(ep3, REFERENCE_TRIANGLE_GRID)
    assert cells[0][0] == pytest.approx(math.degrees(math.acos(math.sqrt(2 / 3))), abs=1e-12)
    assert len(cells) == 5
    for (_, _, w), ref in zip(cells, REFERENCE_CELLS):
        assert w == pytest.approx(ref, abs=1e-3)
    assert h3_triangle_n3(ep3, REFERENCE_TRIANGLE_GRID) < 13


def _uniform_grid(ep, cells):
    return tuple(np.linspace(circumradius(ep.z), ep.theta0, cells + 1)[1:-1])


def test_triangle_refinement_monotone(ep3):
    # nested grids: every coarse breakpoint is kept
    vals = [h3_triangle_n3(ep3, _uniform_grid(ep3, k)) for k in (12, 24, 48)]
    assert vals[0] >= vals[1] >= vals[2]


def test_triangle_fine_grid_approaches_h3(ep3):
    vals = [h3_triangle_n3(ep3, _uniform_grid(ep3, k)) for k in (24, 96)]
    assert all(v > 12.8721 for v in vals)
    assert vals[0] - 12.8721 < 5e-3
    assert vals[1] - 12.8721 < 1.5e-3


def test_triangle_degenerate_grid(ep3):
    coarse = h3_triangle_n3(ep3, ())
    assert coarse >= h3_triangle_n3(ep3, REFERENCE_TRIANGLE_GRID)
    assert len(triangle_cells(ep3, ())) == 1


def test_F2_is_F_arc_with_equilateral_base(ep3):
    for psi in np.linspace(circumradius(0.5), ep3.theta0, 7):
        a = F_arc(ep3, psi, 60.0, cap_cos=math.cos(math.radians(psi)))
        assert F2(ep3, psi) == pytest.approx(10.11 + a, abs=1e-12)
        # the full cap only enlarges the arc
        assert F_arc(ep3, psi, 60.0) + 10.11 >= F2(ep3, psi) - 1e-12


# ---------------------------------------------------------------- rhombs (n = 3)


def test_rhomb_cases(ep3):
    cells = rhomb_cells(ep3, REFERENCE_RHOMB_SPLIT)
    assert [round(c[1], 9) for c in cells] == [77.0, 90.0]
    assert cells[0][2] == pytest.approx(12.9171, abs=1e-3)
    assert cells[1][2] == pytest.approx(12.9182, abs=1e-3)
    assert h4_rhomb_n3(ep3, REFERENCE_RHOMB_SPLIT) < 13


def test_rho_fixed_point():
    assert rho(90.0) == pytest.approx(90.0, abs=1e-12)


@given(d=st.floats(60.0, 120.0, exclude_min=True, exclude_max=True))
def test_rho_involution(d):
    assert rho(rho(d)) == pytest.approx(d, abs=1e-10)


def test_rho_out_of_range():
    with pytest.raises(ValueError):
        rho(130.0)


# ---------------------------------------------------------------- five and six points (n = 4)


def test_lambda_values():
    assert lambda_angle(90.0) == pytest.approx(90.0, abs=1e-12)
    assert lambda_angle(60.0) == pytest.approx(math.degrees(math.acos(-0.25)), abs=1e-10)
    assert lambda_angle(60.0) == pytest.approx(104.4775, abs=1e-4)


@given(a=st.floats(60.1, 104.4))
def test_lambda_involution(a):
    assert lambda_angle(lambda_angle(a)) == pytest.approx(a, abs=1e-10)


def test_lambda_domain():
    # a real partner diagonal exists only up to lambda(60)
    with pytest.raises(ValueError):
        lambda_angle(110.0)


def test_lambda_singular():
    with pytest.raises(ValueError):
        lambda_angle(120.0)


@settings(max_examples=200, deadline=None)
@given(psi=st.floats(20.0, 52.5), g1=st.floats(60.0, 120.0), g2=st.floats(60.0, 120.0))
def test_F_arc_decreasing_in_gamma(ep4, psi, g1, g2):
    ga, gb = sorted((g1, g2))
    assert F_arc(ep4, psi, ga) >= F_arc(ep4, psi, gb) - 1e-12


@settings(max_examples=200, deadline=None)
@given(psi=st.floats(20.0, 52.5), gamma=st.floats(62.42, 120.0))
def test_F_arc_endpoint_for_wide_base(ep4, psi, gamma):
    r = arc_max(ep4, psi, gamma)
    if r.value > -math.inf:
        assert r.u == pytest.approx(r.u_max, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(psi=st.floats(0.0, 1.0), gamma=st.floats(60.0, 120.0))
def test_pair_sums_below_twice_f_minus_one(ep3, ep4, psi, gamma):
    for ep in (ep3, ep4):
        top = 2 * float(ep.f(-1.0))
        assert F_arc(ep, psi * ep.theta0, gamma) <= top + 1e-12
        assert F1(ep, ep.delta + psi * (2 * ep.theta0 - ep.delta)) <= top + 1e-12


def test_h5_default_grid(ep4):
    r = h5_cells(ep4)
    assert 24.6856 <= r.value < 25


def test_h5_grid_refinement_monotone(ep4):
    vals = []
    for a_step, p_step in ((2.0, 1.0), (1.0, 0.5), (0.5, 0.25)):
        vals.append(h5_cells(ep4, _alpha_grid(ep4, ep4.theta0, a_step), p_step).value)
    assert vals[0] >= vals[1] >= vals[2] >= 24.6856


def test_h5_grid_must_cover(ep4):
    with pytest.raises(ValueError):
        h5_cells(ep4, alpha_grid=[70.0, 80.0, 90.0])


def test_h5_refined_from_report(cert4):
    e5 = cert4.report.entries[5]
    assert e5.kind == "over-estimate"
    assert 24.6856 <= e5.value <= 24.90
    # the best sampled point is a genuine lower value
    assert e5.witness["lower"] <= e5.value
    assert e5.witness["lower"] >= 24.6856 - 1e-3


def test_h6_split_terms(ep4, cert4):
    assert float(ep4.g(50.0)) == pytest.approx(0.0906, abs=1e-4)
    assert float(ep4.g(45.0)) == pytest.approx(0.4533, abs=1e-4)
    cases = cert4.report.entries[6].witness["cases"]
    assert [round(c["theta6"][0], 6) for c in cases] == [45.0, 50.0]
    low, high = cases
    # five points restricted to the 50 degree cap
    assert low["h5"] == pytest.approx(23.9181, abs=2e-3)
    assert high["h5"] == cert4.report.entries[5].value
    assert 24.68 < cert4.report.entries[6].value < 24.99


def test_h6_reuses_known_h5(ep4):
    r = h6_cases(ep4, split=(), known={ep4.theta0: 1.0})
    assert len(r.cases) == 1
    assert r.value == pytest.approx(1.0 + float(ep4.g(45.0)), abs=1e-12)


# ---------------------------------------------------------------- simplex methods


def test_regular_simplex_gram():
    y = regular_simplex(4, 0.5)
    g = y @ y.T
    assert np.allclose(np.diag(g), 1.0) and np.allclose(g[np.triu_indices(4, 1)], 0.5)


def test_powersum_values(ep4):
    r3 = h_simplex_powersum(ep4, 3)
    assert r3.value == pytest.approx(24.8345, abs=5e-4)
    assert r3.angles[0] == pytest.approx(30.0715, abs=1e-3)
    assert r3.angles[1] == pytest.approx(30.0715, abs=1e-3)
    assert r3.angles[2] == pytest.approx(ep4.theta0, abs=1e-5)
    r4 = h_simplex_powersum(ep4, 4)
    assert r4.value == pytest.approx(24.818, abs=5e-4)
    assert r4.angles[:2] == pytest.approx((30.2310, 30.2310), abs=1e-3)
    assert r4.angles[2:] == pytest.approx((51.6765, 51.6765), abs=1e-3)


def test_powersum_hypotheses(ep3, ep4):
    c = ep4.f.coeffs
    assert float(c[7]) == -107.52 and float(c[9]) == 53.76
    assert float(c[7]) > -15 * float(c[9]) / 7
    check_powersum_hypotheses(ep4, 3)
    with pytest.raises(LemmaHypothesisError):
        check_powersum_hypotheses(ep3, 3)
    with pytest.raises(LemmaHypothesisError):
        check_powersum_hypotheses(ep4, 2)
    bad = dataclasses.replace(ep4, f=ep4.f + Polynomial.exact(["0"] * 6 + ["1"]))
    with pytest.raises(LemmaHypothesisError):
        check_powersum_hypotheses(bad, 4)


@pytest.mark.parametrize("m", [3, 4])
def test_triangulation_matches_powersum(ep4, m):
    tri = h_simplex_triangulation(ep4, m, 0.05)
    ps = h_simplex_powersum(ep4, m)
    assert abs(tri.value - ps.value) <= 5e-3
    assert tri.value >= ps.value - 1e-9


def test_triangulation_pair_matches_h2(ep4):
    assert h_simplex_triangulation(ep4, 2, 0.1).value == pytest.approx(h2(ep4), abs=1e-4)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_triangulation_refinement_monotone(ep4, m):
    vals = [h_simplex_triangulation(ep4, m, eps).value for eps in (0.2, 0.1, 0.05)]
    assert vals[0] >= vals[1] >= vals[2]


def test_triangulation_rejects_large_m(ep4):
    with pytest.raises(ValueError):
        h_simplex_triangulation(ep4, 5)


@settings(max_examples=100, deadline=None)
@given(m=st.sampled_from([2, 3, 4]), seed=st.integers(0, 2**32 - 1))
def test_sigma_identity(m, seed):
    z = 0.5
    y = np.random.default_rng(seed).standard_normal(m)
    y /= np.linalg.norm(y)
    t = regular_simplex(m, z) @ y
    assert float(np.sum(t * t)) == pytest.approx(sigma(t.sum(), m, z), abs=1e-12)
    assert t.sum() <= powersum_range(m, z, 0.6)[1] + 1e-12


# ---------------------------------------------------------------- report


def test_report_k3(cert3):
    rep = cert3.report
    assert rep.mu == 4 and rep.complete
    assert [e.m for e in rep.entries] == [0, 1, 2, 3, 4]
    assert rep.h_max == max(rep.h) < 13
    assert [e.kind for e in rep.entries[3:]] == ["over-estimate"] * 2


def test_report_k4(cert4):
    rep = cert4.report
    assert rep.mu == 6 and rep.h_max < 25
    assert {e.m: e.method for e in rep.entries}[3] == "power sums"
    assert rep.bound == pytest.approx(rep.h_max / rep.c0)


def test_report_delsarte_case():
    res = search(SearchConfig(4, 0.5, 1.0, 9))
    exp = lowered_expansion(res)
    ep = ExtensionPolynomial.from_expansion(exp, 0.5)
    assert ep.is_delsarte
    rep = h_report(ep)
    assert rep.mu == 0
    assert rep.h_max == rep.entries[0].value == pytest.approx(float(ep.f(1.0)))


def test_report_unsupported_mu(ep3):
    with pytest.raises(UnsupportedMu):
        h_report(ep3, mu=5)


# ---------------------------------------------------------------- sandwich


@pytest.mark.parametrize("which", ["cert3", "cert4"])
def test_sandwich(which, request, configurations, rng):
    cert = request.getfixturevalue(which)
    rep = cert.report
    f = request.getfixturevalue("ep3" if rep.n == 3 else "ep4").f
    for entry in rep.entries[1:]:
        samples = configurations(f, rep.n, rep.t0, rep.z, entry.m, 1000, rng)
        assert len(samples) == 1000
        worst = max(h for _, h in samples)
        assert worst <= entry.value + 1e-9, (entry.m, worst, entry.value)
