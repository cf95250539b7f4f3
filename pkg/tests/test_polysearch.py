import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kissbound.orthopoly import gegenbauer_values, to_gegenbauer
from kissbound.polysearch import (
    SearchConfig,
    SearchResult,
    build_lp,
    grid,
    index_set,
    lowered_expansion,
    search,
    simplex_center_products,
)


@pytest.fixture(scope="module")
def res4():
    return search(SearchConfig(4, 0.5, 0.6058, 9, 2000))


def test_center_products():
    for z in (0.0, 0.3, 0.5):
        assert simplex_center_products(4, z, 1) == pytest.approx(-1.0, abs=1e-15)
    assert simplex_center_products(4, 0.5, 4) == pytest.approx(-math.sqrt(5 / 8), abs=1e-15)
    assert simplex_center_products(4, 0.5, 6) == pytest.approx(-math.sqrt(0.5), abs=1e-15)
    with pytest.raises(ValueError):
        simplex_center_products(4, 0.5, 5)


def test_center_products_geometry():
    # the centre of m points with pairwise products z, as seen from each vertex
    for m in (2, 3, 4):
        g = 0.5 * np.eye(m) + 0.5
        w, v = np.linalg.eigh(g)
        y = v * np.sqrt(w)
        c = y.sum(axis=0)
        c /= np.linalg.norm(c)
        assert -float(y[0] @ c) == pytest.approx(simplex_center_products(4, 0.5, m), abs=1e-12)


def test_index_set():
    assert index_set(4) == [1, 2, 3, 4, 6]
    assert index_set(3) == [1, 2, 3, 4]


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(2, 0.5, 0.6, 9)
    with pytest.raises(ValueError):
        SearchConfig(4, 0.5, 0.5, 9)
    with pytest.raises(ValueError):
        SearchConfig(4, 0.5, 0.6, 0)
    with pytest.raises(ValueError):
        SearchConfig(4, 0.5, 0.6, 9, N=5)


def test_config_json_roundtrip():
    cfg = SearchConfig(4, 0.5, 0.6058, 9, 1500, straddle=False)
    assert SearchConfig.from_json(cfg.to_json()) == cfg
    assert SearchConfig.from_json('{"n": 4, "z": 0.5, "t0": 1, "d": 6}').N == 2000


def test_grid_endpoints():
    for N in (10, 333, 2000):
        a = grid(SearchConfig(4, 0.5, 0.6, 9, N))
        assert a[0] == -1.0 and a[-1] == 0.5 and len(a) == N + 1
        assert np.all(np.diff(a) > 0)


def test_lp_shape():
    cfg = SearchConfig(4, 0.5, 0.6058, 9, 2000)
    lp = build_lp(cfg)
    assert lp.A.shape[1] == 10
    assert lp.A.shape[0] > 2000


def test_straddling_index_in_both_families():
    cfg = SearchConfig(4, 0.5, 0.6058, 9, 2000)
    a = grid(cfg)
    js = int(np.searchsorted(a, -cfg.t0, side="right") - 1)
    assert a[js] <= -cfg.t0 < a[js + 1]
    lp = build_lp(cfg)
    G = gegenbauer_values(4, 9, a)[:, 1:]
    mono = [r[1:] for r, rel in zip(lp.A, lp.relations) if rel == ">="]
    sign = [r[1:] for r, rel, b in zip(lp.A, lp.relations, lp.rhs) if rel == "<=" and r[0] == 0]
    assert any(np.allclose(r, G[js] - G[js + 1]) for r in mono)
    assert any(np.allclose(r, G[js]) for r in sign)
    # without straddling neither family reaches across -t0
    plain = build_lp(SearchConfig(4, 0.5, 0.6058, 9, 2000, straddle=False))
    assert plain.A.shape[0] == lp.A.shape[0] - 2


def test_search_k4_remark(res4):
    assert res4.E == pytest.approx(24.7895, abs=0.05)
    assert res4.lp_residual <= 1e-9


def test_search_invariants(res4):
    exp = res4.expansion
    assert exp.coeffs[0] == 1.0 and exp.is_admissible()
    assert res4.E == pytest.approx(res4.F0 + 1 + sum(exp.coeffs[1:]), abs=1e-9)
    f = res4.polynomial
    assert res4.E == pytest.approx(res4.F0 + float(f(1.0)), abs=1e-9)
    # F0 covers every centre configuration
    for m in index_set(4):
        assert res4.F0 >= m * float(f(simplex_center_products(4, 0.5, m))) - 1e-12


def test_lowered_expansion_certifies(res4):
    exp = lowered_expansion(res4)
    assert exp is not None and exp.coeffs[0] < 1
    assert 1 - exp.coeffs[0] < 1e-5
    from kissbound.hbound import ExtensionPolynomial

    ep = ExtensionPolynomial.from_expansion(exp, 0.5)
    assert ep.sign_cert.ok and ep.monotone_cert.ok


def test_delsarte_values():
    r4 = search(SearchConfig(4, 0.5, 1.0, 9, 2000))
    assert r4.F0 == 0.0
    assert r4.E == pytest.approx(25.5585, abs=0.02)
    r8 = search(SearchConfig(8, 0.5, 1.0, 6, 2000))
    assert r8.E == pytest.approx(240.0, abs=0.5)


@pytest.mark.parametrize("cfg", [(4, 0.5, 0.6058, 9), (3, 0.5, 0.6, 9), (4, 0.5, 1.0, 9)])
def test_E_nondecreasing_in_N(cfg):
    # nested grids with interior-only constraints: finer grids only add rows
    vals = [search(SearchConfig(*cfg, N, straddle=False)).E for N in (250, 500, 1000, 2000)]
    assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))


def test_coeff_override(res4):
    c = np.round(np.asarray(res4.expansion.coeffs[1:]), 2)
    r = search(res4.config, coeff_override=c)
    assert np.allclose(r.expansion.coeffs[1:], c)
    f = r.polynomial
    assert r.F0 == pytest.approx(max(m * float(f(simplex_center_products(4, 0.5, m))) for m in index_set(4)))
    with pytest.raises(ValueError):
        search(res4.config, coeff_override=[1.0, 2.0])


def test_override_reproduces_known_polynomial():
    from kissbound.polys import K4_POLY

    exp = to_gegenbauer(K4_POLY, 4)
    c = [float(x) for x in exp.coeffs[1:]]
    c = [x / float(exp.coeffs[0]) for x in c]
    r = search(SearchConfig(4, 0.5, 0.6058, 9), coeff_override=c)
    assert r.status == "certified"
    # E = h1 of the normalised polynomial; F0 is set by the pair centre
    assert r.E * float(exp.coeffs[0]) == pytest.approx(24.8644, abs=5e-4)


def test_result_json(res4):
    import json

    data = json.loads(res4.to_json())
    assert data["config"]["n"] == 4 and data["status"] in ("certified", "grid-only")
    assert len(data["gegenbauer"]) == 10


@settings(max_examples=15, deadline=None)
@given(t0=st.floats(0.56, 0.7), d=st.integers(5, 9))
def test_search_always_admissible(t0, d):
    r = search(SearchConfig(4, 0.5, t0, d, 300))
    assert isinstance(r, SearchResult)
    assert r.expansion.is_admissible()
    assert r.E >= float(r.polynomial(1.0))
