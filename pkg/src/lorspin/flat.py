"""Flat Lorentzian surfaces with flat normal bundle built from conformal data.

Delta > 0: (psi1, psi2, lambda0, mu0) -> hyperbolic solve for (lambda, mu),
spin frame g, null frame (N1, N2), xi, F.
Delta < 0: a solution f = rho - i nu of d f / d zbar = b conj(f) replaces
(lambda, mu).
Delta = 0: ruled surfaces gamma(s) + t T(s) with lightlike gamma' and T.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from numpy.polynomial import Polynomial
from scipy.interpolate import CubicSpline
from scipy.sparse.linalg import MatrixRankWarning, spsolve

from .dirac import (
    ImmersionResult,
    SpinorField,
    XiForm,
    immersion_from_spinor,
    orthonormal_frame_from_null,
)
from .errors import DegenerateRuling, InputError, NotUnitSpinor, SingularSystem, ZeroCrossing
from .lorentz import QuatAC, h_form, quat_exp, norm22
from .spin import check_unit, renormalize
from .surface import MetricField, NullChart, analyze_immersion, delta_invariant, max_interior

SQRT2 = np.sqrt(2.0)

BRANCH_FORMS = {
    "delta_pos_1": ("A", "A"),
    "delta_pos_2": ("B", "B"),
    "delta_neg_1": ("A", "B"),
    "delta_neg_2": ("B", "A"),
}

# Sign of N1 for which the assembled spinor solves the Dirac equation: it is
# fixed by the form used on the first null component.
BRANCH_SIGN = {"delta_pos_1": 1, "delta_pos_2": -1, "delta_neg_1": 1, "delta_neg_2": -1}


def branch_sign(branch: str, sign: int | None = None) -> int:
    if branch not in BRANCH_SIGN:
        raise InputError(f"unknown branch {branch!r}")
    expected = BRANCH_SIGN[branch]
    if sign is None:
        return expected
    if sign not in (1, -1):
        raise InputError("sign must be +1 or -1")
    if sign != expected:
        raise InputError(f"branch {branch} only yields a Dirac solution with N1 sign {expected:+d}")
    return sign


class Profile:
    """A real function of one variable with its derivative.

    Built from polynomial coefficients (lowest degree first), from samples
    (cubic spline) or from a pair of callables.
    """

    def __init__(self, func, deriv, description=None):
        self._f = func
        self._df = deriv
        self.description = description

    @classmethod
    def poly(cls, coeffs) -> "Profile":
        p = Polynomial(np.asarray(coeffs, float))
        return cls(p, p.deriv(), {"kind": "poly", "data": [float(c) for c in np.atleast_1d(coeffs)]})

    @classmethod
    def constant(cls, value: float) -> "Profile":
        return cls.poly([value])

    @classmethod
    def samples(cls, x, y) -> "Profile":
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        if x.ndim != 1 or x.shape != y.shape or len(x) < 4:
            raise InputError("sample profiles need matching 1-d arrays of length >= 4")
        if np.any(np.diff(x) <= 0):
            raise InputError("sample abscissae must be strictly increasing")
        spline = CubicSpline(x, y, extrapolate=True)
        return cls(spline, spline.derivative(), {"kind": "samples", "data": [x.tolist(), y.tolist()]})

    @classmethod
    def from_spec(cls, spec) -> "Profile":
        if isinstance(spec, (int, float)):
            return cls.constant(float(spec))
        if not isinstance(spec, dict) or "kind" not in spec or "data" not in spec:
            raise InputError(f"profile spec must be a number or {{kind, data}}, got {spec!r}")
        if spec["kind"] == "poly":
            data = spec["data"]
            if not isinstance(data, list) or not data:
                raise InputError("poly profile needs a non-empty coefficient list")
            return cls.poly(data)
        if spec["kind"] == "samples":
            data = spec["data"]
            if not isinstance(data, list) or len(data) != 2:
                raise InputError("samples profile needs [x_values, y_values]")
            return cls.samples(*data)
        raise InputError(f"unknown profile kind {spec['kind']!r}")

    def __call__(self, x):
        return np.asarray(self._f(x), float)

    def deriv(self, x):
        return np.asarray(self._df(x), float)


@dataclass
class ConformalMap:
    """psi = (1+sigma)/2 psi1(s) + (1-sigma)/2 psi2(t)."""

    psi1: Profile
    psi2: Profile

    @classmethod
    def zero(cls) -> "ConformalMap":
        return cls(Profile.constant(0.0), Profile.constant(0.0))

    def on_chart(self, chart: NullChart):
        S, T = chart.grid()
        return self.psi1(S), self.psi2(T)

    def thetas(self, chart: NullChart):
        p1, p2 = self.on_chart(chart)
        return (p1 + p2) / 2, (p1 - p2) / 2


@dataclass
class HyperbolicSolution:
    chart: NullChart
    lam: np.ndarray | None = None
    mu: np.ndarray | None = None
    nu: np.ndarray | None = None
    rho: np.ndarray | None = None


def _require_equal_spacing(chart: NullChart):
    if not np.isclose(chart.h_s, chart.h_t, rtol=1e-12, atol=0):
        raise InputError("characteristic solver needs h_s == h_t")


def solve_hyperbolic(psi: ConformalMap, lambda0: Profile, mu0: Profile, chart: NullChart) -> HyperbolicSolution:
    """March (lambda, mu) from the line s = s0 along the characteristics.

    d_s lambda - d_t lambda = a mu and d_s mu + d_t mu = b lambda, with
    a = -(psi1' + psi2')/2 and b = -(psi1' - psi2')/2.  lambda is carried
    along t + s = const, mu along t - s = const; each step is a trapezoid
    rule on both characteristics, coupled through a 2x2 solve.
    """
    _require_equal_spacing(chart)
    h = chart.h_s
    n_s, n_t = chart.shape
    pad = n_s - 1
    t_ext = chart.origin[1] + h * np.arange(-pad, n_t + pad)
    s_vals = chart.s
    lam = lambda0(t_ext)
    mu = mu0(t_ext)
    dpsi2 = psi.psi2.deriv(t_ext)
    for name, arr in (("lambda", lam), ("mu", mu)):
        bad = arr * np.sign(arr[pad]) <= 0
        if np.any(bad):
            k = int(np.argmax(bad))
            raise ZeroCrossing(f"{name} vanishes or changes sign on the initial line",
                               (float(s_vals[0]), float(t_ext[k])))
    out_lam = np.empty(chart.shape)
    out_mu = np.empty(chart.shape)
    out_lam[0] = lam[pad:pad + n_t]
    out_mu[0] = mu[pad:pad + n_t]
    sgn_l, sgn_m = np.sign(lam[pad]), np.sign(mu[pad])
    d1_old = psi.psi1.deriv(s_vals[0])
    for i in range(n_s - 1):
        d1_new = psi.psi1.deriv(s_vals[i + 1])
        # old row covers t_ext[i : len - i]; new row covers t_ext[i+1 : len-i-1]
        dp2 = dpsi2[i:len(dpsi2) - i]
        a_old = -0.5 * (d1_old + dp2)
        b_old = -0.5 * (d1_old - dp2)
        dp2_new = dp2[1:-1]
        a_new = -0.5 * (d1_new + dp2_new)
        b_new = -0.5 * (d1_new - dp2_new)
        r1 = lam[2:] + 0.5 * h * a_old[2:] * mu[2:]
        r2 = mu[:-2] + 0.5 * h * b_old[:-2] * lam[:-2]
        det = 1 - 0.25 * h * h * a_new * b_new
        if np.any(np.abs(det) < 1e-14):
            raise ZeroCrossing("characteristic step is singular", (float(s_vals[i + 1]), float(chart.t[0])))
        lam = (r1 + 0.5 * h * a_new * r2) / det
        mu = (r2 + 0.5 * h * b_new * r1) / det
        d1_old = d1_new
        for name, arr, sgn in (("lambda", lam, sgn_l), ("mu", mu, sgn_m)):
            bad = arr * sgn <= 0
            if np.any(bad):
                k = int(np.argmax(bad))
                t_at = float(t_ext[i + 1 + k])
                raise ZeroCrossing(f"{name} crosses zero", (float(s_vals[i + 1]), t_at))
        off = pad - (i + 1)
        out_lam[i + 1] = lam[off:off + n_t]
        out_mu[i + 1] = mu[off:off + n_t]
    return HyperbolicSolution(chart, lam=out_lam, mu=out_mu)


def hyperbolic_residual(sol: HyperbolicSolution, psi: ConformalMap) -> np.ndarray:
    """|d_u mu + lambda d_u theta2| + |d_v lambda + mu d_v theta2| by central differences."""
    c = sol.chart
    S, T = c.grid()
    d1 = psi.psi1.deriv(S)
    d2 = psi.psi2.deriv(T)
    du_theta2 = (d1 - d2) / 2
    dv_theta2 = (d1 + d2) / 2
    r1 = c.d_du(sol.mu) + sol.lam * du_theta2
    r2 = c.d_dv(sol.lam) + sol.mu * dv_theta2
    return np.abs(r1) + np.abs(r2)


# ------------------------------------------------------------ spin frames

@dataclass
class SpinFrameField:
    chart: NullChart
    g: QuatAC
    branch: str
    g1: np.ndarray  # (n_s, 4) complex quaternion coefficients, plus component
    g2: np.ndarray  # (n_t, 4), minus component


def _form_coeffs(form: str, psi):
    psi = np.asarray(psi, float)
    out = np.zeros(psi.shape + (4,), complex)
    if form == "A":
        out[..., 2] = np.cosh(psi)
        out[..., 3] = 1j * np.sinh(psi)
    else:
        out[..., 2] = np.sinh(psi)
        out[..., 3] = 1j * np.cosh(psi)
    return out


def _integrate_component(coeff_func, x: np.ndarray, start: np.ndarray) -> np.ndarray:
    """dg/dx = m(x) g for one null component, midpoint exponential steps."""
    h = x[1] - x[0] if len(x) > 1 else 0.0
    mids = x[:-1] + h / 2
    m = coeff_func(mids)
    steps = quat_exp(QuatAC(np.stack([m * h, m * h], axis=-2))).data[..., 0, :]
    out = np.empty((len(x), 4), complex)
    out[0] = start
    cur = QuatAC(np.stack([start, start], axis=0))
    for k in range(len(x) - 1):
        step = QuatAC(np.stack([steps[k], steps[k]], axis=0))
        cur = renormalize(step * cur)
        out[k + 1] = cur.data[0]
    return out


def integrate_spin_frame(psi: ConformalMap, branch: str, g0: QuatAC, chart: NullChart) -> SpinFrameField:
    """g = (1+sigma)/2 g1(s) + (1-sigma)/2 g2(t) with g' g^{-1} given by the branch forms."""
    if branch not in BRANCH_FORMS:
        raise InputError(f"unknown branch {branch!r}")
    check_unit(g0)
    form1, form2 = BRANCH_FORMS[branch]
    g1 = _integrate_component(lambda s: _form_coeffs(form1, psi.psi1(s)), chart.s, g0.data[0])
    g2 = _integrate_component(lambda t: _form_coeffs(form2, psi.psi2(t)), chart.t, g0.data[1])
    data = np.empty(chart.shape + (2, 4), complex)
    data[..., 0, :] = g1[:, None, :]
    data[..., 1, :] = g2[None, :, :]
    return SpinFrameField(chart, QuatAC(data), branch, g1, g2)


def spin_frame_derivative_norm(frame: SpinFrameField):
    """H(g', g') on the grid, with g' differentiated along s (plus) and t (minus)."""
    c = frame.chart
    d = np.empty_like(frame.g.data)
    d[..., 0, :] = c.d_ds(frame.g.data[..., 0, :])
    d[..., 1, :] = c.d_dt(frame.g.data[..., 1, :])
    return h_form(QuatAC(d), QuatAC(d))


# ------------------------------------------------------------ assembly

def _null_frame_pos(lam, mu, theta1, sign):
    """Coordinate (s, t) components of N1 and N2 for Delta > 0."""
    a1 = sign * np.exp(theta1) / SQRT2 / lam
    b1 = sign * np.exp(theta1) / SQRT2 / mu
    a2 = np.exp(-theta1) / SQRT2 / lam
    b2 = -np.exp(-theta1) / SQRT2 / mu
    # a d_u + b d_v = (a + b) d_s + (a - b) d_t
    n1 = np.stack([a1 + b1, a1 - b1], axis=-1)
    n2 = np.stack([a2 + b2, a2 - b2], axis=-1)
    return n1, n2


def _null_frame_neg(nu, rho, theta1, sign):
    r2 = nu ** 2 + rho ** 2
    n1 = sign * np.exp(theta1)[..., None] / SQRT2 * np.stack([rho / r2, nu / r2], axis=-1)
    n2 = np.exp(-theta1)[..., None] / SQRT2 * np.stack([-nu / r2, rho / r2], axis=-1)
    return n1, n2


def mean_curvature_pos(lam, mu, theta2):
    """(H0, H1) from (1/mu, 1/lambda) = -[[cosh, sinh], [sinh, cosh]](theta2) (H0, H1)."""
    c, s = np.cosh(theta2), np.sinh(theta2)
    h0 = -(c / mu - s / lam)
    h1 = -(-s / mu + c / lam)
    return np.stack([h0, h1], axis=-1)


def mean_curvature_neg(nu, rho, theta2):
    """Invert (nu, rho)/(nu^2 + rho^2) = [[-e^-t, e^-t], [-e^t, -e^t]] (H0, H1), t = theta2."""
    r2 = nu ** 2 + rho ** 2
    x = nu / r2 * np.exp(theta2)
    y = rho / r2 * np.exp(-theta2)
    # -H0 + H1 = x, -H0 - H1 = y
    h0 = -(x + y) / 2
    h1 = (x - y) / 2
    return np.stack([h0, h1], axis=-1)


def _grid_location(chart: NullChart, magnitude: np.ndarray) -> tuple:
    i, j = np.unravel_index(np.argmin(magnitude), magnitude.shape)
    return (float(chart.s[i]), float(chart.t[j]))


def _finish(result: ImmersionResult, chart: NullChart, fields: dict, kind: str, sign: int, metric: MetricField):
    result.kind = kind
    result.sign = sign
    result.fields.update(fields)
    result.fields["expected_metric"] = metric
    return result


def assemble_flat_immersion(sol: HyperbolicSolution, frame: SpinFrameField, psi: ConformalMap,
                            sign: int | None = None, base=(0.0, 0.0, 0.0, 0.0), closed_tol=None) -> ImmersionResult:
    """Delta > 0 assembly: parallel frame from (lambda, mu), spinor g, xi and F.

    The induced metric is sign * (lambda^2 du^2 - mu^2 dv^2).
    """
    if not frame.branch.startswith("delta_pos"):
        raise InputError("Delta > 0 assembly needs a delta_pos branch")
    sign = branch_sign(frame.branch, sign)
    chart = sol.chart
    lam, mu = sol.lam, sol.mu
    for name, arr in (("lambda", lam), ("mu", mu)):
        if np.min(np.abs(arr)) == 0:
            raise ZeroCrossing(f"{name} vanishes", _grid_location(chart, np.abs(arr)))
    theta1, theta2 = psi.thetas(chart)
    n1, n2 = _null_frame_pos(lam, mu, theta1, sign)
    phi = SpinorField(chart, frame.g, orthonormal_frame_from_null(n1, n2))
    hvec = mean_curvature_pos(lam, mu, theta2)
    result = immersion_from_spinor(phi, base, closed_tol, hvec)
    metric = MetricField.from_lambda_mu(chart, lam, mu, sign)
    return _finish(result, chart, {"lam": lam, "mu": mu, "branch": frame.branch}, "flat_delta_pos", sign, metric)


def metric_neg(chart: NullChart, nu, rho, sign: int) -> MetricField:
    """sign * 4 (nu rho (-ds^2 + dt^2) + (rho^2 - nu^2) ds dt)."""
    g_ss = -4 * sign * nu * rho
    g_st = 2 * sign * (rho ** 2 - nu ** 2)
    return MetricField(chart, g_ss, g_st, -g_ss)


def assemble_flat_immersion_neg(f: np.ndarray, frame: SpinFrameField, psi: ConformalMap,
                                sign: int | None = None, base=(0.0, 0.0, 0.0, 0.0), closed_tol=None) -> ImmersionResult:
    """Delta < 0 assembly from f = rho - i nu and a spin frame on a mixed branch."""
    if not frame.branch.startswith("delta_neg"):
        raise InputError("Delta < 0 assembly needs a delta_neg branch")
    sign = branch_sign(frame.branch, sign)
    chart = frame.chart
    rho = np.real(f)
    nu = -np.imag(f)
    if np.min(nu ** 2 + rho ** 2) < 1e-24:
        raise ZeroCrossing("f vanishes on the grid", _grid_location(chart, nu ** 2 + rho ** 2))
    theta1, theta2 = psi.thetas(chart)
    n1, n2 = _null_frame_neg(nu, rho, theta1, sign)
    phi = SpinorField(chart, frame.g, orthonormal_frame_from_null(n1, n2))
    hvec = mean_curvature_neg(nu, rho, theta2)
    result = immersion_from_spinor(phi, base, closed_tol, hvec)
    metric = metric_neg(chart, nu, rho, sign)
    return _finish(result, chart, {"nu": nu, "rho": rho, "branch": frame.branch}, "flat_delta_neg", sign, metric)


# ------------------------------------------------------ pseudoanalytic solve

def pseudoanalytic_coefficient(psi: ConformalMap, chart: NullChart) -> np.ndarray:
    """b = (-d_s theta2 - i d_t theta2) / 2, the coefficient that makes (N1, N2) parallel."""
    S, T = chart.grid()
    ds_theta2 = psi.psi1.deriv(S) / 2
    dt_theta2 = -psi.psi2.deriv(T) / 2
    return 0.5 * (-ds_theta2 - 1j * dt_theta2)


def conformal_map_for_constant_b(b: complex) -> ConformalMap:
    """A conformal map whose pseudoanalytic coefficient is the constant b."""
    b = complex(b)
    return ConformalMap(Profile.poly([0.0, -4 * b.real]), Profile.poly([0.0, 4 * b.imag]))


def exponential_solution(b: complex, alphas):
    """Exact solutions for constant b: sum of alpha exp(conj(m) z + m zbar) with m = b conj(alpha) / alpha.

    The equation is real-linear, so real combinations of these terms solve it too.
    """
    b = complex(b)
    terms = []
    for a in alphas:
        a = complex(a)
        if a == 0:
            raise InputError("exponential solution coefficients must be nonzero")
        terms.append((a, b * np.conj(a) / a))

    def f(z):
        z = np.asarray(z, complex)
        return sum(a * np.exp(np.conj(m) * z + m * np.conj(z)) for a, m in terms)

    return f


def _diff_matrix(n: int, h: float) -> sp.csr_matrix:
    """Second-order first derivative on n points, one-sided at both ends."""
    rows, cols, vals = [], [], []
    for k in range(1, n - 1):
        rows += [k, k]
        cols += [k - 1, k + 1]
        vals += [-0.5 / h, 0.5 / h]
    rows += [0, 0, 0, n - 1, n - 1, n - 1]
    cols += [0, 1, 2, n - 1, n - 2, n - 3]
    vals += [-1.5 / h, 2.0 / h, -0.5 / h, 1.5 / h, -2.0 / h, 0.5 / h]
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def solve_pseudoanalytic(b, seed, chart: NullChart) -> np.ndarray:
    """Solve d f / d zbar = b conj(f) on the chart, z = s + i t.

    Unknowns are Re f and Im f at every node.  Equations: the two real
    components of the first-order system at every node, Re f = Re seed on
    the boundary and Im f = Im seed at the first node.  The overdetermined
    sparse system is solved in the least-squares sense via its normal
    equations.
    """
    n_s, n_t = chart.shape
    N = n_s * n_t
    S, T = chart.grid()
    b = np.broadcast_to(np.asarray(b, complex), chart.shape)
    seed_vals = np.asarray(seed(S + 1j * T) if callable(seed) else np.broadcast_to(seed, chart.shape), complex)
    Ds = sp.kron(_diff_matrix(n_s, chart.h_s), sp.identity(n_t), format="csr")
    Dt = sp.kron(sp.identity(n_s), _diff_matrix(n_t, chart.h_t), format="csr")
    br = sp.diags(np.real(b).ravel())
    bi = sp.diags(np.imag(b).ravel())
    # f = p + i q, dzbar f = (f_s + i f_t)/2, b conj f = (br p + bi q) + i (bi p - br q)
    eq_re = sp.hstack([0.5 * Ds - br, -0.5 * Dt - bi])
    eq_im = sp.hstack([0.5 * Dt - bi, 0.5 * Ds + br])
    boundary = np.zeros(chart.shape, bool)
    boundary[0, :] = boundary[-1, :] = boundary[:, 0] = boundary[:, -1] = True
    bidx = np.flatnonzero(boundary.ravel())
    nb = len(bidx)
    weight = 1.0 / chart.h
    pin_re = sp.csr_matrix((np.full(nb, weight), (np.arange(nb), bidx)), shape=(nb, 2 * N))
    pin_im = sp.csr_matrix(([weight], ([0], [N])), shape=(1, 2 * N))
    A = sp.vstack([eq_re, eq_im, pin_re, pin_im], format="csr")
    rhs = np.concatenate([np.zeros(2 * N), weight * np.real(seed_vals).ravel()[bidx],
                          [weight * np.imag(seed_vals).ravel()[0]]])
    normal = (A.T @ A).tocsc()
    with warnings.catch_warnings():
        warnings.simplefilter("error", MatrixRankWarning)
        try:
            x = spsolve(normal, A.T @ rhs)
        except (MatrixRankWarning, RuntimeError) as exc:
            raise SingularSystem(f"pseudoanalytic system is singular: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystem("pseudoanalytic solve produced non-finite values")
    return (x[:N] + 1j * x[N:]).reshape(chart.shape)


def pseudoanalytic_residual(f: np.ndarray, b, chart: NullChart) -> np.ndarray:
    dzbar = 0.5 * (chart.d_ds(f) + 1j * chart.d_dt(f))
    return np.abs(dzbar - b * np.conj(f))


# --------------------------------------------------------- quasi-umbilic

@dataclass
class RuledInput:
    gamma: object  # callable s -> (..., 4)
    gamma_prime: object
    T: object
    tol: float = 1e-9


def generate_quasi_umbilic(r: RuledInput, chart: NullChart) -> ImmersionResult:
    """F(s, t) = gamma(s) + t T(s) with lightlike gamma' and T, and its invariant report."""
    s = chart.s
    gam = np.asarray(r.gamma(s), float)
    dgam = np.asarray(r.gamma_prime(s), float)
    T = np.asarray(r.T(s), float)
    scale = max(1.0, float(np.max(np.abs(dgam))), float(np.max(np.abs(T))))
    if np.max(np.abs(norm22(dgam))) > r.tol * scale ** 2 or np.max(np.abs(norm22(T))) > r.tol * scale ** 2:
        raise InputError("gamma' and T must be lightlike")
    wedge = np.abs(norm22(dgam, T))
    # two independent null vectors span a Lorentzian plane iff their product is nonzero
    if np.min(wedge) <= r.tol * scale ** 2:
        k = int(np.argmin(wedge))
        raise DegenerateRuling(f"gamma' and T fail to span a Lorentzian plane at s = {s[k]:.6g}")
    S, Tt = chart.grid()
    F = gam[:, None, :] + Tt[..., None] * T[:, None, :]
    geo = analyze_immersion(F, chart)
    xi = XiForm(chart, geo.F_s, geo.F_t)
    result = ImmersionResult(chart, F, xi, metric=geo.metric, mean_curvature=geo.mean_curvature, kind="quasi_umbilic")
    delta = delta_invariant(geo.G, geo.metric, check_regular=False)
    result.fields["geometry"] = geo
    result.report.update({
        "K": max_interior(geo.K, 2),
        "K_N": max_interior(geo.K_N, 2),
        "mean_curvature_sq": max_interior(geo.mean_curvature_sq, 2),
        "Delta": max_interior(delta.Delta, 2),
    })
    return result


__all__ = [
    "Profile", "ConformalMap", "BRANCH_SIGN", "branch_sign", "HyperbolicSolution", "SpinFrameField", "RuledInput", "BRANCH_FORMS",
    "solve_hyperbolic", "hyperbolic_residual", "integrate_spin_frame", "spin_frame_derivative_norm",
    "assemble_flat_immersion", "assemble_flat_immersion_neg", "solve_pseudoanalytic",
    "pseudoanalytic_residual", "pseudoanalytic_coefficient", "generate_quasi_umbilic", "metric_neg",
    "mean_curvature_pos", "mean_curvature_neg", "conformal_map_for_constant_b", "exponential_solution",
]
