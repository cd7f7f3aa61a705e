import json

import numpy as np
import pytest

from conftest import flat_config, generated
from lorspin.dirac import ImmersionResult
from lorspin.errors import SchemaError, ZeroCrossing
from lorspin.pipeline import GenerationConfig, generate
from lorspin.report import convergence_orders, failures, invariant_report, tolerance_for
from lorspin.surface import NullChart

HELIX_RULING = {
    "gamma_prime": [{"kind": "poly", "data": [1]}, 0, 0, {"kind": "poly", "data": [1]}],
    "T": [{"kind": "poly", "data": [1, 0.5]}, {"kind": "poly", "data": [-1, -0.5]}, 0, 0],
}


def cfg(**data):
    base = {"branch": "delta_pos_1", "grid": {"n": 17, "extent": 1.0}}
    base.update(data)
    return GenerationConfig.from_dict(base)


@pytest.mark.parametrize("bad", [
    [],
    {"grid": {"n": 17, "extent": 1.0}},
    {"branch": "delta_pos_3", "grid": {"n": 17, "extent": 1.0}},
    {"branch": "delta_pos_1", "grid": {"n": 5, "extent": 1.0}},
    {"branch": "delta_pos_1", "grid": {"n": 17.0, "extent": 1.0}},
    {"branch": "delta_pos_1", "grid": {"n": 17, "extent": -1.0}},
    {"branch": "delta_pos_1", "grid": {"n": 17, "extent": 1.0}, "colour": 1},
    {"branch": "delta_pos_1", "grid": {"n": 17, "extent": 1.0}, "psi1": {"kind": "spline", "data": [1]}},
    {"branch": "delta_pos_1", "grid": {"n": 17, "extent": 1.0}, "g0": [1, 1, 0]},
    {"branch": "delta_pos_1", "grid": {"n": 17, "extent": 1.0}, "sign": -1},
    {"branch": "delta_pos_1", "grid": {"n": 17, "extent": 1.0}, "base": [0, 0, "x", 0]},
    {"branch": "delta_neg_1", "grid": {"n": 17, "extent": 1.0}, "lambda0": 2.0},
    {"branch": "delta_neg_1", "grid": {"n": 17, "extent": 1.0}, "pseudoanalytic": {"exponential": [1]}},
    {"branch": "delta_neg_1", "grid": {"n": 17, "extent": 1.0}, "pseudoanalytic": {"b": 0.1, "exponential": [0]}},
    {"branch": "delta_neg_1", "grid": {"n": 17, "extent": 1.0}, "pseudoanalytic": {"b": 0.1, "seed": [1], "exponential": [1]}},
    {"branch": "quasi_umbilic", "grid": {"n": 17, "extent": 1.0}},
    {"branch": "quasi_umbilic", "grid": {"n": 17, "extent": 1.0}, "ruling": {"gamma_prime": [1, 1], "T": [1, -1, 0, 0]}},
])
def test_schema_errors(bad):
    with pytest.raises(SchemaError):
        GenerationConfig.from_dict(bad)


def test_config_round_trip():
    c = cfg(psi1={"kind": "poly", "data": [0, 1]}, g0=[1, 1, 0, 0, 0, 0, 0, 0], base=[1, 2, 3, 4], sign=1)
    again = GenerationConfig.from_dict(json.loads(json.dumps(c.to_dict())))
    assert again.to_dict() == c.to_dict()


def test_constant_b_fixes_the_conformal_map():
    c = GenerationConfig.from_dict({"branch": "delta_neg_1", "grid": {"n": 17, "extent": 1.0},
                                    "pseudoanalytic": {"b": [0.1, 0.2]}})
    assert c.psi1["data"] == [0.0, -0.4] and c.psi2["data"] == pytest.approx([0.0, 0.8])


def test_inconsistent_b_is_a_schema_error():
    c = GenerationConfig.from_dict({"branch": "delta_neg_1", "grid": {"n": 17, "extent": 1.0},
                                    "psi1": {"kind": "poly", "data": [0, 1]}, "pseudoanalytic": {"b": 0.1}})
    with pytest.raises(SchemaError):
        generate(c)


def test_zero_psi_is_flat():
    r = generate(cfg())
    rep = invariant_report(r)
    assert rep["K"] <= 1e-10 and rep["K_N"] <= 1e-10
    assert not failures(rep)


def test_zero_crossing_from_config():
    with pytest.raises(ZeroCrossing) as info:
        generate(cfg(lambda0={"kind": "poly", "data": [-0.5, 2]}))
    assert info.value.location == (0.0, 0.25)


@pytest.mark.parametrize("branch, extra", [
    ("delta_pos_1", {}),
    ("delta_pos_2", {}),
    ("delta_neg_1", {"pseudoanalytic": {"b": 0.1, "exponential": [1, [0, 0.3]]}}),
    ("delta_neg_2", {"pseudoanalytic": {"b": 0.0, "seed": [1, [0, 0.2]]}}),
    ("quasi_umbilic", {"ruling": HELIX_RULING}),
])
def test_every_branch_passes_its_report(branch, extra):
    r = generated(65, branch, **extra)
    rep = invariant_report(r)
    assert failures(rep) == {}
    frac = rep["delta_sign"]["negative_fraction" if branch.startswith("delta_neg") else "positive_fraction"]
    if branch != "quasi_umbilic":
        assert frac == 1.0
    else:
        assert rep["delta_sign"]["zero"] > 0


def test_report_is_finite_and_complete():
    rep = invariant_report(generated(33))
    for key in ("K", "K_N", "gauss", "codazzi", "ricci", "dxi", "path_defect", "dirac", "killing",
                "metric_mismatch", "F_consistency", "spin_norm_drift", "gauss_map_norm"):
        assert np.isfinite(rep[key]), key
    json.dumps(rep, allow_nan=False)


def test_f_only_report():
    r = generated(33)
    bare = ImmersionResult(r.chart, r.F, None, None, kind=r.kind)
    rep = invariant_report(bare)
    assert "dirac" not in rep and "path_defect" not in rep
    assert rep["K"] == pytest.approx(invariant_report(r)["K"])


def test_failures_policy():
    rep = {"grid": {"h_s": 0.01, "h_t": 0.01}, "diameter": 2.0, "kind": "flat_delta_pos",
           "K": 1e-4, "dirac": 1e-5, "gauss_map_norm": 0.0}
    bound = tolerance_for(rep, "K")
    assert bound == pytest.approx(1e-6 + 20 * 1e-4 * 2.0)
    assert failures(rep) == {}
    rep["K"] = 1e-2
    assert set(failures(rep)) == {"K"}
    assert failures(rep, factor=10.0) == {}
    rep["kind"] = "imported"
    assert failures(rep) == {}
    rep["gauss_map_norm"] = 1e-6
    assert set(failures(rep)) == {"gauss_map_norm"}


def test_convergence_orders():
    coarse = {"grid": {"h_s": 0.02, "h_t": 0.02}, "K": 4e-4, "dxi": 0.0}
    fine = {"grid": {"h_s": 0.01, "h_t": 0.01}, "K": 1e-4, "dxi": 0.0}
    assert convergence_orders(coarse, fine) == {"K": pytest.approx(2.0)}
    with pytest.raises(ValueError):
        convergence_orders(fine, coarse)


def test_chart_of_config_grid():
    c = flat_config(17, extent=2.0, grid={"n": 17, "extent_s": 2.0, "extent_t": 1.0, "origin": [1.0, -1.0]})
    chart = c.grid.chart()
    assert isinstance(chart, NullChart)
    assert chart.h_s == 0.125 and chart.h_t == 0.0625 and chart.origin == (1.0, -1.0)
