import numpy as np
import pytest

from conftest import GRAPH_K_AT_POINT, generated, graph_surface, random_imh0
from lorspin.errors import DegenerateMetric, GaussMapNotRegular
from lorspin.lorentz import ONE, ONE_A, QI, SIGMA, SIGMA_I_ONE, QuatAC, h_form, imh0_element
from lorspin.spin import random_unit
from lorspin.surface import (
    MetricField,
    NullChart,
    SecondFundamentalForm,
    analyze_immersion,
    christoffel,
    curvatures,
    degenerate_cross_check,
    delta_invariant,
    fundamental_residuals,
    gauss_map_from_spin_frame,
    interior,
    lies_in_a_line,
    max_interior,
    pullback_check,
)
from lorspin.report import empirical_orders


def test_chart_coordinates():
    c = NullChart.square(5, 1.0, (1.0, -1.0))
    assert c.h == 0.25 and c.shape == (5, 5)
    U, V = c.uv()
    S, T = c.grid()
    assert np.allclose(U, (S + T) / 2) and np.allclose(V, (S - T) / 2)
    f = S ** 2 + 3 * T
    assert np.allclose(c.d_ds(f), 2 * S) and np.allclose(c.d_dt(f), 3.0)


def test_christoffel_examples():
    c = NullChart.square(41, 1.0, (-0.5, -0.5))
    U, V = c.uv()
    ones = np.ones(c.shape)
    flat = christoffel(MetricField.from_lambda_mu(c, ones, ones))
    assert all(np.max(np.abs(g)) == 0 for g in flat.values())
    g = christoffel(MetricField.from_lambda_mu(c, np.exp(U), ones))
    assert max_interior(g["u_uu"] - 1.0) < 1e-3
    for key in ("u_uv", "v_uv", "v_vv"):
        assert max_interior(g[key]) < 1e-12
    g = christoffel(MetricField.from_lambda_mu(c, ones, 1 + V ** 2))
    assert max_interior(g["v_vv"] - 2 * V / (1 + V ** 2)) < 1e-3


def test_degenerate_metric_is_rejected():
    c = NullChart.square(9, 1.0)
    with pytest.raises(DegenerateMetric):
        christoffel(MetricField.from_lambda_mu(c, np.zeros(c.shape), np.ones(c.shape)))


def _frame(shape):
    # e2 = d_s, e3 = d_t for the metric -ds^2 + dt^2
    fr = np.zeros(shape + (2, 2))
    fr[..., 0, 0] = fr[..., 1, 1] = 1.0
    return fr


def test_extrinsic_curvature_examples():
    c = NullChart.square(9, 1.0)
    z = np.zeros(c.shape + (2,))
    e1 = np.zeros(c.shape + (2,))
    e1[..., 1] = 1.0
    flat = MetricField(c, -np.ones(c.shape), np.zeros(c.shape), np.ones(c.shape))
    cur = curvatures(flat, SecondFundamentalForm(z, z, z, _frame(c.shape)))
    assert np.max(np.abs(cur.K)) == 0 and np.max(np.abs(cur.K_N)) == 0
    cur = curvatures(flat, SecondFundamentalForm(z, e1, z, _frame(c.shape)))
    assert np.allclose(cur.K_extrinsic, 1.0)


def test_fundamental_residuals_flat_and_violating():
    c = NullChart.square(17, 1.0)
    z = np.zeros(c.shape + (2,))
    flat = MetricField(c, -np.ones(c.shape), np.zeros(c.shape), np.ones(c.shape))
    res = fundamental_residuals(flat, SecondFundamentalForm(z, z, z, _frame(c.shape))).max()
    assert max(res.values()) <= 1e-10
    # B(e2, e2) = t e0, the rest zero: Gauss holds (0 = 0), Codazzi fails
    _, T = c.grid()
    b22 = np.zeros(c.shape + (2,))
    b22[..., 0] = T
    res = fundamental_residuals(flat, SecondFundamentalForm(b22, z, z, _frame(c.shape))).max()
    assert res["gauss"] <= 1e-12
    assert res["codazzi"] > 0.5


def test_graph_surface_curvature_oracle():
    errs, hs = [], []
    for n in (33, 65, 129):
        c = NullChart.square(n, 0.6, (0.0, -0.1))
        geo = analyze_immersion(graph_surface(c), c)
        i, j = np.argmin(abs(c.s - 0.3)), np.argmin(abs(c.t - 0.2))
        assert (c.s[i], c.t[j]) == pytest.approx((0.3, 0.2))
        # second derivatives of a quadratic F are exact, so the Gauss-equation K is too
        assert geo.K[i, j] == pytest.approx(GRAPH_K_AT_POINT, abs=1e-12)
        errs.append(abs(geo.K_intrinsic[i, j] - GRAPH_K_AT_POINT))
        hs.append(c.h)
        res = fundamental_residuals(geo.metric, geo.B, geo.normal_conn).max(2)
        assert max(res.values()) <= 20 * c.h ** 2
    assert all(abs(o - 2) < 0.3 for o in empirical_orders(errs, hs))


def test_gauss_map_examples(rng):
    assert gauss_map_from_spin_frame(ONE).isclose(QI.times_i())
    v = 0.7
    g = QuatAC.from_coeffs(np.cosh(v)) + SIGMA_I_ONE * QI * np.sinh(v)
    assert gauss_map_from_spin_frame(g).isclose(QI.times_i(), tol=1e-13)
    for _ in range(50):
        G = gauss_map_from_spin_frame(random_unit(rng))
        assert h_form(G, G).isclose(-ONE_A, tol=1e-9)


def test_delta_from_profiles():
    assert np.all(delta_invariant(profile=(np.ones(5), np.ones(5))).Delta_sign == 1)
    assert np.all(delta_invariant(profile=(np.ones(5), -np.ones(5))).Delta_sign == -1)


def test_constant_gauss_map():
    c = NullChart.square(9, 1.0)
    G = QuatAC(np.broadcast_to(QI.times_i().data, c.shape + (2, 4)).copy())
    d = delta_invariant(G, chart=c, check_regular=False)
    assert np.all(d.Delta_sign == 0) and np.max(np.abs(d.delta_form)) == 0
    with pytest.raises(GaussMapNotRegular):
        delta_invariant(G, chart=c)
    m = MetricField(c, -np.ones(c.shape), np.zeros(c.shape), np.ones(c.shape))
    r = pullback_check(G, np.zeros(c.shape), np.zeros(c.shape), m)
    assert np.max(np.abs(r.plus)) == 0 and np.max(np.abs(r.minus)) == 0


def test_delta_sign_invariant_under_chart_flips():
    res = generated(33)
    geo = analyze_immersion(res.F, res.chart)
    base = delta_invariant(geo.G, geo.metric).Delta_sign
    assert np.all(interior(base) == 1)
    # s -> -s, t -> -t and the swap s <-> t all belong to the chart group
    for flip in (lambda a: a[::-1], lambda a: a[:, ::-1], lambda a: np.swapaxes(a, 0, 1)):
        F2 = flip(res.F)
        geo2 = analyze_immersion(F2, res.chart)
        assert np.array_equal(interior(delta_invariant(geo2.G, geo2.metric).Delta_sign), interior(flip(base)))


def test_degenerate_cross_check_cases(rng):
    x = random_imh0(rng)
    assert degenerate_cross_check(x, x.scale(ONE_A * 2 + SIGMA)) == "scalarMultiple"
    iI = imh0_element(1)
    assert degenerate_cross_check(iI.scale(ONE_A + SIGMA), iI.scale(ONE_A - SIGMA)) == "sigmaRelation"
    assert degenerate_cross_check(iI, imh0_element(0, 1)) == "independent"


def test_pullback_identity_orders():
    """Residual of G*omega = (K + sigma K_N) omega_M shrinks at least linearly."""
    for make in ("graph", "flat"):
        vals, hs = [], []
        for n in (33, 65, 129):
            if make == "graph":
                c = NullChart.square(n, 0.6, (0.0, -0.1))
                geo = analyze_immersion(graph_surface(c), c)
            else:
                res = generated(n)
                c = res.chart
                geo = analyze_immersion(res.F, c)
            r = pullback_check(geo.G, geo.K, geo.K_N, geo.metric)
            vals.append(max(max_interior(r.plus, 2), max_interior(r.minus, 2)))
            hs.append(c.h)
        assert vals[-1] <= 1e-3 * hs[-1]
        assert min(empirical_orders(vals, hs)) >= 1.0


def test_flat_gauss_map_images_lie_in_a_line():
    res = generated(33)
    G = gauss_map_from_spin_frame(res.spinor.g)
    c = res.chart
    G_s, G_t = QuatAC(c.d_ds(G.data)), QuatAC(c.d_dt(G.data))
    assert np.all(lies_in_a_line(G_s, G_t, tol=1e-8))
    # the non-flat graph surface has a regular Gauss map
    c = NullChart.square(33, 0.6, (0.0, -0.1))
    geo = analyze_immersion(graph_surface(c), c)
    Gs, Gt = QuatAC(c.d_ds(geo.G.data)), QuatAC(c.d_dt(geo.G.data))
    assert not np.any(interior(lies_in_a_line(Gs, Gt, tol=1e-8)))
