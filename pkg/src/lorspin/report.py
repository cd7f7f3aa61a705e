"""Invariant reports for generated or imported immersions, tolerance policy and convergence orders."""
from __future__ import annotations

import math

import numpy as np

from .dirac import (
    ImmersionResult,
    XiForm,
    dirac_residual,
    exterior_derivative,
    extract_B,
    integrate_immersion,
    killing_residual,
    xi_and_closedness,
)
from .errors import DegenerateMetric, LorspinError
from .lorentz import h_form
from .surface import (
    NullChart,
    analyze_immersion,
    delta_invariant,
    fundamental_residuals,
    gauss_map_from_spin_frame,
    interior,
    max_interior,
)

# Residuals whose size is controlled by the grid; the tolerance policy
# applies to these.  K and K_N only count for surfaces declared flat.
SCALED_KEYS = ("gauss", "codazzi", "ricci", "dxi", "path_defect", "dirac", "killing", "metric_mismatch",
               "F_consistency")
FLAT_KEYS = ("K", "K_N")
ORDER_KEYS = ("K", "K_N", "dxi", "path_defect", "metric_mismatch", "dirac", "gauss", "codazzi", "ricci")
FLAT_KINDS = ("flat_delta_pos", "flat_delta_neg", "quasi_umbilic")

ABS_TOL = 1e-6
H2_FACTOR = 20.0
EDGE = 2


def _hist(signs: np.ndarray) -> dict:
    signs = interior(signs, EDGE)
    total = max(signs.size, 1)
    return {
        "positive": int(np.sum(signs > 0)),
        "negative": int(np.sum(signs < 0)),
        "zero": int(np.sum(signs == 0)),
        "negative_fraction": float(np.sum(signs < 0)) / total,
        "positive_fraction": float(np.sum(signs > 0)) / total,
    }


def _metric_mismatch(geo_metric, expected, crop) -> float:
    return max(max_interior(geo_metric.g_ss - expected.g_ss[crop], EDGE),
               max_interior(geo_metric.g_st - expected.g_st[crop], EDGE),
               max_interior(geo_metric.g_tt - expected.g_tt[crop], EDGE))


def _geometry(F: np.ndarray, chart: NullChart):
    """Analyse F on the full grid, or without its edge band if one-sided
    differences there make the sampled metric degenerate."""
    full = (slice(None), slice(None))
    try:
        return analyze_immersion(F, chart), chart, full, None
    except DegenerateMetric as exc:
        if min(chart.shape) <= 2 * EDGE + 3:
            raise
        crop = (slice(EDGE, -EDGE), slice(EDGE, -EDGE))
        sub = NullChart(chart.n_s - 2 * EDGE, chart.n_t - 2 * EDGE, chart.h_s, chart.h_t,
                        (float(chart.s[EDGE]), float(chart.t[EDGE])))
        F_s, F_t = chart.d_ds(F)[crop], chart.d_dt(F)[crop]
        return analyze_immersion(F[crop], sub, F_s, F_t), sub, crop, str(exc)


def invariant_report(result: ImmersionResult) -> dict:
    """Every residual the package knows how to evaluate on this result.

    The F-only part (curvatures, structure equations, Gauss map, Delta) runs
    on any sampled immersion; the spinor part needs result.spinor.
    """
    chart = result.chart
    geo, geo_chart, crop, geo_note = _geometry(result.F, chart)
    res = fundamental_residuals(geo.metric, geo.B, geo.normal_conn).max(width=EDGE)
    delta = delta_invariant(geo.G, geo.metric, check_regular=False)
    gg = h_form(geo.G, geo.G)
    report = {
        "grid": {"n_s": chart.n_s, "n_t": chart.n_t, "h_s": chart.h_s, "h_t": chart.h_t,
                 "origin": list(chart.origin)},
        "kind": result.kind,
        "K": max_interior(geo.K, EDGE),
        "K_mean": float(np.mean(np.abs(interior(geo.K, EDGE)))),
        "K_N": max_interior(geo.K_N, EDGE),
        "K_N_mean": float(np.mean(np.abs(interior(geo.K_N, EDGE)))),
        "mean_curvature_sq": max_interior(geo.mean_curvature_sq, EDGE),
        "gauss": res["gauss"],
        "codazzi": res["codazzi"],
        "ricci": res["ricci"],
        "gauss_map_norm": float(max(np.max(np.abs(gg.plus + 1)), np.max(np.abs(gg.minus + 1)))),
        "delta_sign": _hist(delta.Delta_sign),
        "Delta": max_interior(delta.Delta, EDGE),
        "diameter": result.diameter,
    }
    if geo_note is not None:
        report["edge_band_dropped"] = geo_note
    if result.spinor is not None:
        phi = result.spinor
        xi, dxi = xi_and_closedness(phi)
        report["dxi"] = float(np.max(np.abs(dxi), initial=0.0))
        primitive = integrate_immersion(xi, base=result.F[0, 0], closed_tol=math.inf, dxi=dxi)
        report["path_defect"] = primitive.report["path_defect"]
        # the stored points must be the primitive of the spinor's xi
        report["F_consistency"] = float(np.max(np.abs(primitive.F - result.F)))
        report["spin_norm_drift"] = phi.normalization_defect()
        if result.mean_curvature is not None:
            report["dirac"] = max_interior(dirac_residual(phi, result.mean_curvature), 1)
        try:
            B = extract_B(phi, tol=1e-6)
            report["killing"] = max_interior(killing_residual(phi, B), 1)
            report["B_asymmetry"] = max_interior(B.asymmetry, 1)
            G_spin = gauss_map_from_spin_frame(phi.g, tol=1e-6)
            gs = h_form(G_spin, G_spin)
            report["gauss_map_norm_spin"] = float(max(np.max(np.abs(gs.plus + 1)), np.max(np.abs(gs.minus + 1))))
        except LorspinError as exc:
            report["spinor_error"] = str(exc)
    else:
        # tangents sampled from F: only the discrete closedness is meaningful
        xi = XiForm(geo_chart, geo.F_s, geo.F_t)
        report["dxi"] = float(np.max(np.abs(interior(exterior_derivative(xi), EDGE)), initial=0.0))
    expected = result.fields.get("expected_metric")
    if expected is not None:
        report["metric_mismatch"] = _metric_mismatch(geo.metric, expected, crop)
    return _finite(report)


def _finite(report: dict) -> dict:
    for key, val in report.items():
        if isinstance(val, float) and not math.isfinite(val):
            report[key] = float("inf")
    return report


def tolerance_for(report: dict, key: str, factor: float = 1.0) -> float:
    """Absolute floor plus a bound proportional to h^2 (and to the size of the surface)."""
    h = max(report["grid"]["h_s"], report["grid"]["h_t"])
    scale = max(1.0, report.get("diameter", 1.0))
    return factor * (ABS_TOL + H2_FACTOR * h * h * scale)


def failures(report: dict, factor: float = 1.0) -> dict:
    """Residuals above the tolerance policy, with their bounds."""
    keys = list(SCALED_KEYS)
    if report.get("kind") in FLAT_KINDS:
        keys += list(FLAT_KEYS)
    out = {}
    for key in keys:
        if key in report:
            bound = tolerance_for(report, key, factor)
            if not report[key] <= bound:
                out[key] = {"value": report[key], "bound": bound}
    if "gauss_map_norm" in report and report["gauss_map_norm"] > 1e-9 * factor:
        out["gauss_map_norm"] = {"value": report["gauss_map_norm"], "bound": 1e-9 * factor}
    return out


def convergence_orders(coarse: dict, fine: dict, keys=ORDER_KEYS) -> dict:
    """log(r_coarse / r_fine) / log(h_coarse / h_fine) for residuals present in both."""
    hc = max(coarse["grid"]["h_s"], coarse["grid"]["h_t"])
    hf = max(fine["grid"]["h_s"], fine["grid"]["h_t"])
    if not hc > hf:
        raise ValueError("the first report must be the coarser grid")
    out = {}
    for key in keys:
        a, b = coarse.get(key), fine.get(key)
        if a is None or b is None or a <= 0 or b <= 0:
            continue
        out[key] = math.log(a / b) / math.log(hc / hf)
    return out


def empirical_orders(values, hs) -> list[float]:
    """Successive orders from residuals measured on a sequence of grids."""
    return [math.log(values[k] / values[k + 1]) / math.log(hs[k] / hs[k + 1]) for k in range(len(values) - 1)]


__all__ = ["invariant_report", "failures", "tolerance_for", "convergence_orders", "empirical_orders",
           "SCALED_KEYS", "FLAT_KEYS", "FLAT_KINDS"]
