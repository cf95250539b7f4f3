"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from kissbound.cli.pipelines import angle_bound, delsarte
from kissbound.hbound import (
    REFERENCE_RHOMB_SPLIT,
    REFERENCE_TRIANGLE_GRID,
    circumradius,
    h3_triangle_n3,
    h5_cells,
    h_simplex_powersum,
    h_simplex_triangulation,
    lambda_angle,
    rho,
    rhomb_cells,
    triangle_cells,
)
from kissbound.hbound.gamma5 import _alpha_grid
from kissbound.orthopoly import Polynomial, from_gegenbauer, isolate_roots, to_gegenbauer
from kissbound.polys import K3_POLY, K4_POLY
from kissbound.polysearch import SearchConfig, search
from kissbound.spherical import lemma_sum, sample_sphere, witness_config


def close(x, ref, tol):
    return x is not None and abs(x - ref) <= tol


def test_criterion_1_verify_k3(cert3, ep3, report_line):
    rep = cert3.report
    h = {e.m: e.value for e in rep.entries}
    h0 = K3_POLY.exact_eval(1)
    h1 = h0 + K3_POLY.exact_eval(-1)
    cells = [w for _, _, w in triangle_cells(ep3, REFERENCE_TRIANGLE_GRID)]
    rhombs = [w for _, _, w in rhomb_cells(ep3, REFERENCE_RHOMB_SPLIT)]
    br = ep3.t0_bracket
    checks = [
        ("f(1) = 10.11", abs(h0 - Fraction("10.11")) <= 1e-9 and close(h[0], 10.11, 1e-9)),
        ("f(1)+f(-1) = 12.88", abs(h1 - Fraction("12.88")) <= 1e-9 and close(h[1], 12.88, 1e-9)),
        ("h2 = 12.8749", close(h[2], 12.8749, 5e-4)),
        ("five triangle cells", len(cells) == 5 and all(close(w, r, 1e-3) for w, r in zip(cells, (12.9425, 12.9648, 12.9508, 12.9606, 12.9519)))),
        ("rhomb cases", len(rhombs) == 2 and close(rhombs[0], 12.9171, 1e-3) and close(rhombs[1], 12.9182, 1e-3)),
        ("t0 bracket near 0.5907", close(-br.lo, 0.5907, 5e-4) and close(-br.hi, 0.5907, 5e-4)),
        ("projected angle 76.582", close(rep.projected_angle, 76.582, 0.01)),
        ("h_max < 13 with margin > 0.03", 13 - rep.h_max > 0.03),
        ("conclusion", cert3.conclusion == "k(3)=12"),
    ]
    assert report_line(1, checks)


def test_criterion_2_verify_k4(cert4, ep4, report_line):
    rep = cert4.report
    h = {e.m: e for e in rep.entries}
    roots = isolate_roots(K4_POLY, -1.0, 1.0)
    geg = [1, 2, 6.12, 3.484, 5.12, 0, 0, 0, 0, 1.05]
    tri3 = h_simplex_triangulation(ep4, 3, 0.05).value
    tri4 = h_simplex_triangulation(ep4, 4, 0.05).value
    ps3 = h_simplex_powersum(ep4, 3).value
    ps4 = h_simplex_powersum(ep4, 4).value
    checks = [
        ("h0 = 18.774", close(h[0].value, 18.774, 1e-9)),
        ("h1 = 24.48", close(h[1].value, 24.48, 1e-9)),
        ("Gegenbauer expansion", len(cert4.gegenbauer) == 10 and all(close(a, b, 1e-9) for a, b in zip(cert4.gegenbauer, geg))),
        ("roots", len(roots) == 2 and close(roots[0].mid, -0.60794, 5e-5) and close(roots[1].mid, 0.5, 1e-9)),
        ("h2 = 24.8644", close(h[2].value, 24.8644, 5e-4)),
        ("h3 both methods", close(tri3, 24.8345, 5e-3) and close(ps3, 24.8345, 5e-3) and close(h[3].value, 24.8345, 5e-3)),
        ("h4 both methods", close(tri4, 24.818, 5e-3) and close(ps4, 24.818, 5e-3) and close(h[4].value, 24.818, 5e-3)),
        ("h5 in [24.6856, 24.90]", 24.6856 <= h[5].value <= 24.90),
        ("h6 in (24.68, 24.99)", 24.68 < h[6].value < 24.99),
        ("h_max < 25 with margin > 0.06", 25 - rep.h_max > 0.06),
        ("mu = 6", rep.mu == 6 and cert4.mu == 6),
        ("conclusion", cert4.conclusion == "k(4)=24"),
    ]
    assert report_line(2, checks)


def test_criterion_3_polysearch(report_line):
    e4 = search(SearchConfig(4, 0.5, 0.6058, 9, 2000)).E
    e9 = search(SearchConfig(9, 0.5, 0.54, 11, 2000)).E
    e10 = search(SearchConfig(10, 0.5, 0.586, 11, 2000)).E
    checks = [
        (f"n=4 E={e4:.5f}", close(e4, 24.7895, 0.05)),
        (f"n=9 E={e9:.4f}", close(e9, 366.7822, 1.0)),
        (f"n=10 E={e10:.4f}", close(e10, 570.5240, 1.5)),
    ]
    assert report_line(3, checks)


def test_criterion_4_delsarte(report_line):
    c4 = delsarte(4, 0.5, 9, 2000)
    c8 = delsarte(8, 0.5, 6, 2000)
    checks = [
        (f"n=4 bound={c4.bound:.5f}", close(c4.bound, 25.5585, 0.02)),
        (f"n=8 bound={c8.bound:.5f}", close(c8.bound, 240.0, 0.5)),
    ]
    assert report_line(4, checks)


def _brute_max(cfg):
    return max(float(np.dot(p, q)) for p, q in itertools.combinations(cfg.points, 2))


def test_criterion_5_witnesses(report_line):
    cell = witness_config("cell24")
    ico = witness_config("icosahedron")
    mc, mi = _brute_max(cell), _brute_max(ico)
    checks = [
        ("cell24 has 24 points", len(cell) == 24 and cell.n == 4),
        ("cell24 max product 1/2", mc == 0.5 or close(mc, 0.5, 1e-15)),
        ("cell24 valid at 1/2", mc <= 0.5 + 1e-12),
        ("icosahedron max product 1/sqrt5", close(mi, 1 / math.sqrt(5), 1e-12)),
        ("icosahedron valid at 1/2", len(ico) == 12 and mi <= 0.5),
    ]
    assert report_line(5, checks)


def test_criterion_6_properties(ep3, ep4, cert3, cert4, configurations, rng, report_line):
    checks = []
    # Lemma 1 sampled on two dimensions
    ok = True
    for n in (3, 4):
        for _ in range(100):
            size = int(rng.integers(2, 30))
            pts = sample_sphere(rng, size, n)
            ok &= all(lemma_sum(pts, k) >= -1e-9 * size * size for k in range(10))
    checks.append(("Lemma 1 nonnegativity", ok))
    # basis roundtrips
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(3, 6))
        p = Polynomial(tuple(rng.uniform(-10, 10, int(rng.integers(1, 13)))))
        back = from_gegenbauer(to_gegenbauer(p, n))
        a, b = np.zeros(13), np.zeros(13)
        a[: len(p.coeffs)] = p.coeffs
        b[: len(back.coeffs)] = back.coeffs
        worst = max(worst, float(np.abs(a - b).max()))
    checks.append(("basis roundtrips", worst <= 1e-9))
    # involutions
    lam_err = max(abs(lambda_angle(lambda_angle(a)) - a) for a in np.linspace(60.1, 104.4, 200))
    rho_err = max(abs(rho(rho(d)) - d) for d in np.linspace(60.1, 119.9, 200))
    checks.append(("lambda involution", lam_err <= 1e-10))
    checks.append(("rho involution", rho_err <= 1e-10))
    # grid refinement, three levels each
    h3 = [h3_triangle_n3(ep3, tuple(np.linspace(circumradius(0.5), ep3.theta0, k + 1)[1:-1])) for k in (12, 24, 48)]
    checks.append(("h3 refinement", h3[0] >= h3[1] >= h3[2]))
    h5 = [h5_cells(ep4, _alpha_grid(ep4, ep4.theta0, a), p).value for a, p in ((2.0, 1.0), (1.0, 0.5), (0.5, 0.25))]
    checks.append(("h5 refinement", h5[0] >= h5[1] >= h5[2]))
    tri = [h_simplex_triangulation(ep4, 3, eps).value for eps in (0.2, 0.1, 0.05)]
    checks.append(("triangulation refinement", tri[0] >= tri[1] >= tri[2]))
    # sandwich
    for cert, ep in ((cert3, ep3), (cert4, ep4)):
        rep = cert.report
        for entry in rep.entries[1:]:
            samples = configurations(ep.f, rep.n, rep.t0, rep.z, entry.m, 1000, rng)
            top = max(v for _, v in samples)
            checks.append((f"sandwich n={rep.n} m={entry.m}", len(samples) == 1000 and top <= entry.value + 1e-9))
    assert report_line(6, checks)


@pytest.mark.slow
def test_criterion_7_angle_bounds(report_line):
    targets = ((3, 13, 59.5), (4, 25, 59.9), (4, 24, 60.6))
    checks = []
    for n, M, limit in targets:
        ab = angle_bound(n, M)
        got = "none" if ab.angle is None else f"{ab.angle:.3f}"
        checks.append((f"phi_{n}({M}) = {got} (need <= {limit})", ab.angle is not None and ab.angle <= limit))
    assert report_line(7, checks)
