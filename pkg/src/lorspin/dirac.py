"""Spinor fields on a chart, the Dirac and Killing operators, the form xi and its primitive F.

Bundles are trivialized by a parallel frame: the normal frame (e0, e1) and
the tangent frame (e2, e3) are parallel, so covariant derivatives of the
spinor coordinates g = [phi] are plain partial derivatives.  The tangent
frame is recorded by its coordinate components frame[..., a, k] (component
of e_{2+k} along d_s for a = 0, along d_t for a = 1).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.linalg import expm, sqrtm
from scipy.optimize import least_squares

from .errors import IntegrabilityViolated, NotClosed, NotNormalized
from .lorentz import METRIC_22, QuatAC, h1_to_vector, quat_exp, r22_defect, vector_to_h1
from .spin import E0, E1, E2, E3, check_unit, real_product, renormalize, spinor_pairing, vector_action
from .surface import EPS, MetricField, NullChart, SecondFundamentalForm, fundamental_residuals, interior

NORMALIZED_TOL = 1e-8
R22_TOL = 1e-10

_TANGENT = (E2, E3)
_NORMAL = (E0, E1)


@dataclass
class SpinorField:
    chart: NullChart
    g: QuatAC
    frame: np.ndarray  # grid + (2, 2)

    def __post_init__(self):
        self.frame = np.broadcast_to(np.asarray(self.frame, float), self.chart.shape + (2, 2)).copy()

    @property
    def inverse_frame(self) -> np.ndarray:
        """Frame components of d_s, d_t: column a holds (e2, e3) coefficients of d_a."""
        return np.linalg.inv(self.frame)

    def d_coord(self):
        c = self.chart
        return QuatAC(c.d_ds(self.g.data)), QuatAC(c.d_dt(self.g.data))

    def d_frame(self):
        """(nabla_{e2} g, nabla_{e3} g)."""
        g_s, g_t = self.d_coord()
        out = []
        for k in range(2):
            ca = self.frame[..., 0, k][..., None, None]
            cb = self.frame[..., 1, k][..., None, None]
            out.append(QuatAC(ca * g_s.data + cb * g_t.data))
        return out

    def normalization_defect(self) -> float:
        h = spinor_pairing(self.g, self.g)[1]
        return float(max(np.max(np.abs(h.plus - 1)), np.max(np.abs(h.minus - 1))))

    def require_normalized(self, tol: float = NORMALIZED_TOL):
        d = self.normalization_defect()
        if d > tol:
            raise NotNormalized(f"H(phi, phi) deviates from 1 by {d:.3e}")


def orthonormal_frame_from_null(n1: np.ndarray, n2: np.ndarray) -> np.ndarray:
    """e2 = (N1 - N2)/sqrt 2, e3 = (N1 + N2)/sqrt 2 from coordinate components of N1, N2."""
    e2 = (n1 - n2) / np.sqrt(2)
    e3 = (n1 + n2) / np.sqrt(2)
    return np.stack([e2, e3], axis=-1)


def normal_vector(h0, h1) -> np.ndarray:
    h0 = np.asarray(h0, float)
    h1 = np.asarray(h1, float)
    z = np.zeros(np.broadcast(h0, h1).shape)
    return np.stack([h0 + z, h1 + z, z, z], axis=-1)


def dirac_apply(phi: SpinorField) -> QuatAC:
    """D phi = -e2 . nabla_{e2} phi + e3 . nabla_{e3} phi."""
    d2, d3 = phi.d_frame()
    return vector_action(E3, d3) - vector_action(E2, d2)


def dirac_residual(phi: SpinorField, mean_curvature) -> np.ndarray:
    """Pointwise |D phi - H . phi| with H = H0 e0 + H1 e1 given as (..., 2)."""
    mc = np.asarray(mean_curvature, float)
    hvec = normal_vector(mc[..., 0], mc[..., 1])
    res = dirac_apply(phi) - vector_action(hvec, phi.g)
    return np.max(np.abs(res.data), axis=(-1, -2))


def _b_of(B: SecondFundamentalForm, i: int, j: int) -> np.ndarray:
    return B.component(i + 2, j + 2)


def eta_multipliers(B: SecondFundamentalForm, frame: np.ndarray) -> list[QuatAC]:
    """[eta(d_a)] as left multipliers in H0, for a = s, t.

    eta(X) = -1/2 sum_j eps_j e_j . B(X, e_j), and e_j . nu . g = [e_j] hat([nu]) g.
    """
    cinv = np.linalg.inv(frame)
    out = []
    for a in range(2):
        total = None
        for j, (ej, eps) in enumerate(zip(_TANGENT, EPS)):
            bxj = sum(cinv[..., i, a, None] * _b_of(B, i, j) for i in range(2))
            nu = normal_vector(bxj[..., 0], bxj[..., 1])
            term = (vector_to_h1(ej) * vector_to_h1(nu).hat()) * (-0.5 * eps)
            total = term if total is None else total + term
        out.append(total)
    return out


def killing_residual(phi: SpinorField, B: SecondFundamentalForm) -> np.ndarray:
    """max over X in (d_s, d_t) of |nabla_X phi - eta(X) . phi|."""
    derivs = phi.d_coord()
    etas = eta_multipliers(B, phi.frame)
    res = [np.max(np.abs((d - e * phi.g).data), axis=(-1, -2)) for d, e in zip(derivs, etas)]
    return np.maximum(*res)


def extract_B(phi: SpinorField, tol: float = NORMALIZED_TOL) -> SecondFundamentalForm:
    """<B(X, Y), nu> = -2 <X . nabla_Y phi, nu . phi> with <,> = Re H."""
    phi.require_normalized(tol)
    grads = phi.d_frame()
    nu_phi = [vector_action(n, phi.g) for n in _NORMAL]
    comps = {}
    for i in range(2):
        for j in range(2):
            x_grad = vector_action(_TANGENT[i], grads[j])
            b0 = -2 * real_product(x_grad, nu_phi[0])
            b1 = -2 * real_product(x_grad, nu_phi[1])
            # <B, e0> = -B^0 and <B, e1> = B^1
            comps[i, j] = np.stack([-b0, b1], axis=-1)
    sym = SecondFundamentalForm(comps[0, 0], 0.5 * (comps[0, 1] + comps[1, 0]), comps[1, 1], phi.frame)
    sym.asymmetry = np.max(np.abs(comps[0, 1] - comps[1, 0]), axis=-1)
    return sym


@dataclass
class XiForm:
    chart: NullChart
    xi_s: np.ndarray
    xi_t: np.ndarray

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(self.xi_s)), np.max(np.abs(self.xi_t))))


def xi_of_vectors(phi: SpinorField, vectors) -> list[np.ndarray]:
    """xi(X) = <<X . phi, phi>> for fixed frame vectors, as R^{2,2} coordinates."""
    out = []
    for x in vectors:
        q = spinor_pairing(vector_action(x, phi.g), phi.g)[0]
        out.append(h1_to_vector(q, tol=R22_TOL))
    return out


def exterior_derivative(xi: XiForm) -> np.ndarray:
    """d xi (d_s, d_t) per plaquette from the trapezoid circulation."""
    c = xi.chart
    xs, xt = xi.xi_s, xi.xi_t
    bottom = 0.5 * c.h_s * (xs[:-1, :-1] + xs[1:, :-1])
    right = 0.5 * c.h_t * (xt[1:, :-1] + xt[1:, 1:])
    top = 0.5 * c.h_s * (xs[:-1, 1:] + xs[1:, 1:])
    left = 0.5 * c.h_t * (xt[:-1, :-1] + xt[:-1, 1:])
    return (bottom + right - top - left) / (c.h_s * c.h_t)


def xi_and_closedness(phi: SpinorField):
    """The form xi in coordinates and its discrete exterior derivative."""
    xe2, xe3 = xi_of_vectors(phi, _TANGENT)
    cinv = phi.inverse_frame
    xi_s = cinv[..., 0, 0, None] * xe2 + cinv[..., 1, 0, None] * xe3
    xi_t = cinv[..., 0, 1, None] * xe2 + cinv[..., 1, 1, None] * xe3
    xi = XiForm(phi.chart, xi_s, xi_t)
    return xi, exterior_derivative(xi)


def closed_tolerance(xi: XiForm, factor: float = 1.0) -> float:
    return factor * xi.max_abs() * xi.chart.h


@dataclass
class ImmersionResult:
    chart: NullChart
    F: np.ndarray
    xi: XiForm
    metric: MetricField | None = None
    spinor: SpinorField | None = None
    mean_curvature: np.ndarray | None = None
    normals: np.ndarray | None = None  # grid + (2, 4): xi(e0), xi(e1)
    kind: str = "immersion"
    sign: int = 1
    fields: dict = field(default_factory=dict)
    report: dict = field(default_factory=dict)

    @property
    def diameter(self) -> float:
        pts = self.F.reshape(-1, 4)
        return float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))


def _path_integrals(xi: XiForm, base):
    c = xi.chart
    base = np.asarray(base, float)
    # row first: along s at t = t0, then along t
    along_s = cumulative_trapezoid(xi.xi_s[:, 0], dx=c.h_s, axis=0, initial=0)
    row = base + along_s[:, None, :] + cumulative_trapezoid(xi.xi_t, dx=c.h_t, axis=1, initial=0)
    along_t = cumulative_trapezoid(xi.xi_t[0, :], dx=c.h_t, axis=0, initial=0)
    col = base + along_t[None, :, :] + cumulative_trapezoid(xi.xi_s, dx=c.h_s, axis=0, initial=0)
    return row, col


def integrate_immersion(xi: XiForm, base=(0.0, 0.0, 0.0, 0.0), closed_tol: float | None = None,
                        dxi: np.ndarray | None = None) -> ImmersionResult:
    """F with dF = xi and F(s0, t0) = base, by trapezoid sums along lattice paths.

    The result is the mean of the row-first and column-first primitives; their
    difference is reported as the path-independence defect.
    """
    if dxi is None:
        dxi = exterior_derivative(xi)
    tol = closed_tolerance(xi) if closed_tol is None else closed_tol
    worst = float(np.max(np.abs(dxi), initial=0.0))
    if worst > tol:
        idx = np.unravel_index(np.argmax(np.max(np.abs(dxi), axis=-1)), dxi.shape[:2])
        s = xi.chart.s[idx[0]]
        t = xi.chart.t[idx[1]]
        raise NotClosed(f"|d xi| = {worst:.3e} exceeds {tol:.3e} near (s, t) = ({s:.6g}, {t:.6g})")
    row, col = _path_integrals(xi, base)
    F = 0.5 * (row + col)
    result = ImmersionResult(xi.chart, F, xi)
    result.report["dxi_max"] = worst
    result.report["path_defect"] = float(np.max(np.abs(row - col)))
    return result


def immersion_from_spinor(phi: SpinorField, base=(0.0, 0.0, 0.0, 0.0), closed_tol=None,
                          mean_curvature=None) -> ImmersionResult:
    xi, dxi = xi_and_closedness(phi)
    res = integrate_immersion(xi, base, closed_tol, dxi)
    res.spinor = phi
    res.normals = np.stack(xi_of_vectors(phi, _NORMAL), axis=-2)
    res.mean_curvature = mean_curvature
    f_s, f_t = xi.xi_s, xi.xi_t
    res.metric = MetricField.from_tangents(phi.chart, f_s, f_t)
    return res


def integrate_killing(B: SecondFundamentalForm, chart: NullChart, phi0: QuatAC,
                      renormalize_steps: bool = True) -> QuatAC:
    """Solve nabla_X g = eta(X) g with g(s0, t0) = phi0 by midpoint exponential steps.

    Integration runs along s on the first row, then along t for every s.
    """
    check_unit(phi0)
    eta_s, eta_t = eta_multipliers(B, B.frame)
    g = QuatAC.zeros(chart.shape)
    g.data[0, 0] = phi0.data
    for i in range(chart.n_s - 1):
        step = QuatAC((eta_s.data[i, 0] + eta_s.data[i + 1, 0]) * (0.5 * chart.h_s))
        nxt = quat_exp(step) * QuatAC(g.data[i, 0])
        g.data[i + 1, 0] = (renormalize(nxt) if renormalize_steps else nxt).data
    for j in range(chart.n_t - 1):
        step = QuatAC((eta_t.data[:, j] + eta_t.data[:, j + 1]) * (0.5 * chart.h_t))
        nxt = quat_exp(step) * QuatAC(g.data[:, j])
        g.data[:, j + 1] = (renormalize(nxt) if renormalize_steps else nxt).data
    return g


def integrability_tolerance(chart: NullChart) -> float:
    return max(1e-6, 100 * chart.h ** 2)


def two_step_integrate(m: MetricField, B: SecondFundamentalForm, phi0: QuatAC,
                       base=(0.0, 0.0, 0.0, 0.0), integrability_tol: float | None = None,
                       closed_tol: float | None = None) -> ImmersionResult:
    """Rebuild an immersion from (metric, B) with a parallel frame and flat normal bundle."""
    check_unit(phi0)
    tol = integrability_tolerance(m.chart) if integrability_tol is None else integrability_tol
    res = fundamental_residuals(m, B).max(width=2)
    bad = {k: v for k, v in res.items() if v > tol}
    if bad:
        raise IntegrabilityViolated(f"structure equations fail: {bad} (tolerance {tol:.2e})")
    g = integrate_killing(B, m.chart, phi0)
    phi = SpinorField(m.chart, g, B.frame)
    out = immersion_from_spinor(phi, base, closed_tol, B.mean_curvature())
    out.kind = "two_step"
    out.report["integrability"] = res
    return out


# ------------------------------------------------------------ rigid motions

ETA = METRIC_22


def _so22_generator(params: np.ndarray) -> np.ndarray:
    S = np.zeros((4, 4))
    S[np.triu_indices(4, 1)] = params
    S = S - S.T
    return ETA @ S


@dataclass
class Alignment:
    A: np.ndarray
    b: np.ndarray
    max_distance: float
    rms: float

    def apply(self, X: np.ndarray) -> np.ndarray:
        return X @ self.A.T + self.b


def isometry_defect(A: np.ndarray) -> float:
    return float(np.max(np.abs(A.T @ ETA @ A - ETA)))


def align_rigid(X: np.ndarray, Y: np.ndarray) -> Alignment:
    """Best A in O(2,2) and translation b with A x + b close to y, pointwise correspondence."""
    P = np.asarray(X, float).reshape(-1, 4)
    Q = np.asarray(Y, float).reshape(-1, 4)
    design = np.hstack([P, np.ones((len(P), 1))])
    sol, *_ = np.linalg.lstsq(design, Q, rcond=None)
    A0 = sol[:4].T
    gram = ETA @ A0.T @ ETA @ A0
    try:
        root = np.real(sqrtm(gram))
        A_init = A0 @ np.linalg.inv(root)
    except (ValueError, np.linalg.LinAlgError):
        A_init = np.eye(4)
    if not np.all(np.isfinite(A_init)) or isometry_defect(A_init) > 1e-6:
        A_init = np.eye(4)

    def residual(p):
        A = A_init @ expm(_so22_generator(p[:6]))
        return (P @ A.T + p[6:] - Q).ravel()

    p0 = np.zeros(10)
    p0[6:] = Q.mean(axis=0) - P.mean(axis=0) @ A_init.T
    fit = least_squares(residual, p0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
    A = A_init @ expm(_so22_generator(fit.x[:6]))
    b = fit.x[6:]
    dist = np.linalg.norm(P @ A.T + b - Q, axis=-1)
    return Alignment(A, b, float(dist.max()), float(np.sqrt(np.mean(dist ** 2))))


__all__ = [
    "SpinorField", "XiForm", "ImmersionResult", "Alignment", "dirac_apply", "dirac_residual",
    "killing_residual", "extract_B", "xi_and_closedness", "xi_of_vectors", "exterior_derivative",
    "integrate_immersion", "immersion_from_spinor", "integrate_killing", "two_step_integrate",
    "align_rigid", "isometry_defect", "orthonormal_frame_from_null", "normal_vector",
    "closed_tolerance", "interior", "r22_defect",
]
