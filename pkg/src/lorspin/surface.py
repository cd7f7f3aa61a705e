"""Discrete Lorentzian charts, curvature, Gauss map, the Delta invariant and structure-equation residuals.

Grid conventions: arrays are indexed [i, j] with s = s0 + i h_s and
t = t0 + j h_t.  u = (s + t)/2 and v = (s - t)/2, so d/du = d/ds + d/dt and
d/dv = d/ds - d/dt.  Derivatives are second-order central differences
(one-sided second order on the outer ring, which residual norms skip).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateMetric, GaussMapNotRegular, NotUnitSpinor
from .lorentz import (
    LorentzNumber,
    QuatAC,
    QI,
    cross,
    h_form_real,
    imh0_coords,
    norm22,
    vector_to_h1,
    wedge_pairing,
)
from .spin import check_unit

DEGENERATE_TOL = 1e-12
RANK_TOL = 1e-8


@dataclass(frozen=True)
class NullChart:
    n_s: int
    n_t: int
    h_s: float
    h_t: float
    origin: tuple = (0.0, 0.0)

    @classmethod
    def square(cls, n: int, extent: float, origin=(0.0, 0.0)) -> "NullChart":
        h = extent / (n - 1)
        return cls(n, n, h, h, tuple(origin))

    @property
    def shape(self):
        return (self.n_s, self.n_t)

    @property
    def s(self) -> np.ndarray:
        return self.origin[0] + self.h_s * np.arange(self.n_s)

    @property
    def t(self) -> np.ndarray:
        return self.origin[1] + self.h_t * np.arange(self.n_t)

    def grid(self):
        return np.meshgrid(self.s, self.t, indexing="ij")

    def uv(self):
        S, T = self.grid()
        return (S + T) / 2, (S - T) / 2

    @property
    def h(self) -> float:
        return max(self.h_s, self.h_t)

    def d_ds(self, f):
        return np.gradient(f, self.h_s, axis=0, edge_order=2)

    def d_dt(self, f):
        return np.gradient(f, self.h_t, axis=1, edge_order=2)

    def d_du(self, f):
        return self.d_ds(f) + self.d_dt(f)

    def d_dv(self, f):
        return self.d_ds(f) - self.d_dt(f)


def interior(a, width: int = 1):
    """Drop the outer ring of grid points (first two axes)."""
    if width == 0:
        return a
    return a[width:-width, width:-width]


def max_interior(a, width: int = 1) -> float:
    a = np.abs(interior(np.asarray(a), width))
    return float(np.max(a, initial=0.0))


# ------------------------------------------------------------------ metrics

@dataclass
class MetricField:
    """Symmetric metric g_ss ds^2 + 2 g_st ds dt + g_tt dt^2 on a chart.

    When built from (lambda, mu, sign) it is sign * (lambda^2 du^2 - mu^2 dv^2).
    """

    chart: NullChart
    g_ss: np.ndarray
    g_st: np.ndarray
    g_tt: np.ndarray
    lam: np.ndarray | None = None
    mu: np.ndarray | None = None
    sign: int = 1

    @classmethod
    def from_lambda_mu(cls, chart, lam, mu, sign=1) -> "MetricField":
        lam = np.asarray(lam, float) * np.ones(chart.shape)
        mu = np.asarray(mu, float) * np.ones(chart.shape)
        a = sign * (lam ** 2 - mu ** 2) / 4
        b = sign * (lam ** 2 + mu ** 2) / 4
        return cls(chart, a, b, a.copy(), lam, mu, sign)

    @classmethod
    def from_tangents(cls, chart, f_s, f_t) -> "MetricField":
        return cls(chart, norm22(f_s), norm22(f_s, f_t), norm22(f_t))

    def matrix(self) -> np.ndarray:
        return np.stack([np.stack([self.g_ss, self.g_st], -1), np.stack([self.g_st, self.g_tt], -1)], -2)

    def det(self) -> np.ndarray:
        return self.g_ss * self.g_tt - self.g_st ** 2

    def check_nondegenerate(self):
        if self.lam is not None:
            if np.min(np.abs(self.lam)) < DEGENERATE_TOL or np.min(np.abs(self.mu)) < DEGENERATE_TOL:
                raise DegenerateMetric("lambda or mu vanishes on the grid")
        if np.min(np.abs(self.det())) < DEGENERATE_TOL:
            raise DegenerateMetric("metric determinant vanishes on the grid")


def christoffel(m: MetricField) -> dict:
    """The six symbols of sign*(lambda^2 du^2 - mu^2 dv^2) in (u, v), by central differences."""
    if m.lam is None:
        raise ValueError("christoffel needs a (lambda, mu) metric")
    m.check_nondegenerate()
    c = m.chart
    lam, mu = m.lam, m.mu
    lu, lv, mu_u, mv = c.d_du(lam), c.d_dv(lam), c.d_du(mu), c.d_dv(mu)
    return {
        "u_uu": lu / lam,
        "u_uv": lv / lam,
        "v_uv": mu_u / mu,
        "v_vv": mv / mu,
        "v_uu": lam * lv / mu ** 2,
        "u_vv": mu * mu_u / lam ** 2,
    }


def christoffel_st(m: MetricField) -> np.ndarray:
    """Gamma[k, i, j] of a general metric in (s, t) coordinates."""
    c = m.chart
    g = m.matrix()
    ginv = np.linalg.inv(g)
    dg = np.stack([c.d_ds(g), c.d_dt(g)], axis=0)  # dg[l, ..., i, j] = d_l g_ij
    # Gamma_lij (lowered) = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    low = np.empty((2, 2, 2) + c.shape)
    for l_ in range(2):
        for i in range(2):
            for j in range(2):
                low[l_, i, j] = 0.5 * (dg[i][..., j, l_] + dg[j][..., i, l_] - dg[l_][..., i, j])
    gam = np.einsum("...kl,lij...->kij...", ginv, low)
    return gam


def intrinsic_curvature(m: MetricField) -> np.ndarray:
    """K = <R(d1, d2) d2, d1> / det g from finite differences of the metric."""
    m.check_nondegenerate()
    c = m.chart
    gam = christoffel_st(m)
    dgam = [c.d_ds(gam.transpose(3, 4, 0, 1, 2)).transpose(2, 3, 4, 0, 1),
            c.d_dt(gam.transpose(3, 4, 0, 1, 2)).transpose(2, 3, 4, 0, 1)]
    # R^a_{b c d} with b = 1 (t), c = 0 (s), d = 1 (t):
    # R^a_{212} = d_s Gamma^a_{tt} - d_t Gamma^a_{st} + Gamma^a_{se} Gamma^e_{tt} - Gamma^a_{te} Gamma^e_{st}
    r = (dgam[0][:, 1, 1] - dgam[1][:, 0, 1]
         + np.einsum("ae...,e...->a...", gam[:, 0, :], gam[:, 1, 1])
         - np.einsum("ae...,e...->a...", gam[:, 1, :], gam[:, 0, 1]))
    g = m.matrix()
    r_1212 = g[..., 0, 0] * r[0] + g[..., 0, 1] * r[1]
    return r_1212 / m.det()


# ------------------------------------------------- second fundamental form

EPS = (-1.0, 1.0)  # <e2,e2>, <e3,e3>


@dataclass
class SecondFundamentalForm:
    """B(e_i, e_j) for the tangent frame (e2, e3), as coefficients on (e0, e1).

    b22, b23, b33 have shape grid + (2,).  frame holds the coordinate
    components of e2 and e3: frame[..., a, k] = component of e_{2+k} along
    the a-th coordinate vector (s or t).
    """

    b22: np.ndarray
    b23: np.ndarray
    b33: np.ndarray
    frame: np.ndarray | None = None
    asymmetry: np.ndarray | None = None

    def component(self, i: int, j: int) -> np.ndarray:
        if (i, j) == (2, 2):
            return self.b22
        if (i, j) in ((2, 3), (3, 2)):
            return self.b23
        if (i, j) == (3, 3):
            return self.b33
        raise IndexError((i, j))

    def mean_curvature(self) -> np.ndarray:
        """(H0, H1) with H = 1/2 tr_g B = 1/2 (-B22 + B33)."""
        return 0.5 * (-self.b22 + self.b33)

    def coordinate_components(self) -> np.ndarray:
        """B(d_a, d_b) for a, b in (s, t); shape grid + (2, 2, 2)."""
        if self.frame is None:
            raise ValueError("frame needed for coordinate components")
        cinv = np.linalg.inv(self.frame)  # columns: frame components of d_s, d_t
        bf = np.stack([np.stack([self.b22, self.b23], -2), np.stack([self.b23, self.b33], -2)], -3)
        return np.einsum("...ia,...jb,...ijn->...abn", cinv, cinv, bf)


def _normal_inner(x, y):
    """<x, y> for normal vectors given by coefficients on (e0, e1)."""
    return -x[..., 0] * y[..., 0] + x[..., 1] * y[..., 1]


def extrinsic_curvatures(B: SecondFundamentalForm):
    """(K, K_N) from the Gauss and Ricci equations."""
    K = _normal_inner(B.b23, B.b23) - _normal_inner(B.b22, B.b33)
    # b_nu(i, k) = <B(e_i, e_k), nu> for nu = e0, e1
    def b(i, k, n):
        comp = B.component(i, k)
        return -comp[..., 0] if n == 0 else comp[..., 1]
    KN = 0.0
    for k, eps in zip((2, 3), EPS):
        KN = KN + eps * (b(2, k, 1) * b(3, k, 0) - b(2, k, 0) * b(3, k, 1))
    return K, KN


@dataclass
class Curvatures:
    K: np.ndarray
    K_N: np.ndarray | None
    K_intrinsic: np.ndarray
    K_extrinsic: np.ndarray | None


def curvatures(m: MetricField, B: SecondFundamentalForm | None = None) -> Curvatures:
    k_int = intrinsic_curvature(m)
    if B is None:
        return Curvatures(k_int, None, k_int, None)
    k_ext, kn = extrinsic_curvatures(B)
    return Curvatures(k_ext, kn, k_int, k_ext)


@dataclass
class Residuals:
    gauss: np.ndarray
    codazzi: np.ndarray
    ricci: np.ndarray

    def max(self, width: int = 1) -> dict:
        return {name: max_interior(getattr(self, name), width) for name in ("gauss", "codazzi", "ricci")}


def fundamental_residuals(m: MetricField, B: SecondFundamentalForm, normal_conn=None) -> Residuals:
    """Pointwise residuals of the Gauss, Codazzi and Ricci equations.

    normal_conn is the 1-form omega with grad e0 = omega e1 and grad e1 =
    omega e0, given by its (s, t) components (shape grid + (2,)); None means
    a parallel normal frame.
    """
    m.check_nondegenerate()
    c = m.chart
    k_int = intrinsic_curvature(m)
    k_ext, kn_ext = extrinsic_curvatures(B)
    if normal_conn is None:
        normal_conn = np.zeros(c.shape + (2,))
    w_s, w_t = normal_conn[..., 0], normal_conn[..., 1]
    frame = B.frame
    dw = c.d_ds(w_t) - c.d_dt(w_s)
    kn_int = dw * (frame[..., 0, 0] * frame[..., 1, 1] - frame[..., 1, 0] * frame[..., 0, 1])

    bc = B.coordinate_components()  # [..., a, b, n]
    gam = christoffel_st(m)  # [k, i, j, ...]
    gam = np.moveaxis(gam, (0, 1, 2), (-3, -2, -1))  # [..., k, i, j]
    dB = [c.d_ds(bc), c.d_dt(bc)]
    swap = bc[..., ::-1]
    omega = [w_s, w_t]

    def cov(a, b_, cc):
        val = dB[a][..., b_, cc, :]
        val = val - np.einsum("...d,...dn->...n", gam[..., :, a, b_], bc[..., :, cc, :])
        val = val - np.einsum("...d,...dn->...n", gam[..., :, a, cc], bc[..., b_, :, :])
        return val + omega[a][..., None] * swap[..., b_, cc, :]

    codazzi = np.stack([cov(0, 1, cc) - cov(1, 0, cc) for cc in range(2)], axis=-2)
    return Residuals(k_int - k_ext, np.linalg.norm(codazzi.reshape(c.shape + (-1,)), axis=-1), kn_int - kn_ext)


# --------------------------------------------------------- Gauss map and Delta

def gauss_map_from_spin_frame(g: QuatAC, tol: float = 1e-9) -> QuatAC:
    """G = i g^{-1} I g for a grid of unit even elements."""
    check_unit(g, tol)
    return (g.inverse() * QI * g).times_i()


def gauss_map_from_frame(e2, e3) -> QuatAC:
    """G = e2 . e3 as an element of Im H0 (even part of the Clifford product)."""
    return vector_to_h1(e2) * vector_to_h1(e3).hat()


@dataclass
class DeltaResult:
    delta_form: np.ndarray  # grid + (2, 2), quadratic form in (s, t)
    Delta: np.ndarray | None
    Delta_sign: np.ndarray


def _sign_field(x, tol):
    out = np.zeros(np.shape(x), dtype=int)
    out[x > tol] = 1
    out[x < -tol] = -1
    return out


def jacobian_singular_values(G_s: QuatAC, G_t: QuatAC) -> np.ndarray:
    """Singular values of the real 6x2 Jacobian of G (coordinates (u_k, v_k) of i a1 I + a2 J + i a3 K)."""
    cols = []
    for dG in (G_s, G_t):
        a = imh0_coords(dG, tol=None)
        cols.append(np.stack([x for ak in a for x in (ak.u, ak.v)], axis=-1))
    jac = np.stack(cols, axis=-1)
    return np.linalg.svd(jac, compute_uv=False)


def delta_invariant(G=None, metric: MetricField | None = None, chart: NullChart | None = None,
                    profile=None, tol: float = 1e-10, check_regular: bool = True) -> DeltaResult:
    """Quadratic form 1/2 dG ^ dG and the sign of Delta = det_g of it.

    Either G (grid of Im H0 elements) with its chart, or profile = (h1, h2)
    from the normalized spin frame, in which case delta = h1 ds^2 - h2 dt^2.
    """
    if profile is not None:
        h1, h2 = (np.asarray(p, float) for p in profile)
        h1, h2 = np.broadcast_arrays(h1, h2)
        form = np.zeros(h1.shape + (2, 2))
        form[..., 0, 0] = h1
        form[..., 1, 1] = -h2
        return DeltaResult(form, None, _sign_field(h1 * h2, tol))
    chart = chart or metric.chart
    G_s = QuatAC(chart.d_ds(G.data))
    G_t = QuatAC(chart.d_dt(G.data))
    if check_regular:
        sv = interior(jacobian_singular_values(G_s, G_t))
        big = sv[..., 0]
        if sv.size and np.any(sv[..., 1] <= RANK_TOL * big):
            raise GaussMapNotRegular("dG has deficient rank somewhere on the grid")
    d_ss = 0.5 * wedge_pairing(G_s, G_s)
    d_tt = 0.5 * wedge_pairing(G_t, G_t)
    d_st = 0.5 * wedge_pairing(G_s, G_t)
    form = np.stack([np.stack([d_ss, d_st], -1), np.stack([d_st, d_tt], -1)], -2)
    det_d = d_ss * d_tt - d_st ** 2
    if metric is None:
        # Delta has the sign of -det(delta) for a Lorentzian metric
        scale = np.max(np.abs(det_d), initial=0.0)
        return DeltaResult(form, None, _sign_field(-det_d, tol * max(scale, 1.0)))
    Delta = det_d / metric.det()
    scale = np.max(np.abs(Delta), initial=0.0)
    return DeltaResult(form, Delta, _sign_field(Delta, tol * max(scale, 1.0)))


def pullback_check(G: QuatAC, K, K_N, m: MetricField) -> LorentzNumber:
    """[G_s, G_t, G] - (K + sigma K_N) omega_M(d_s, d_t), with omega_M(e2, e3) = 1."""
    c = m.chart
    G_s = QuatAC(c.d_ds(G.data))
    G_t = QuatAC(c.d_dt(G.data))
    lhs = h_form_real(cross(G_s, G_t), G, tol=1e-6)
    area = np.sqrt(np.abs(m.det()))
    rhs = LorentzNumber.from_uv(K * area, K_N * area)
    return lhs - rhs


def lies_in_a_line(G_s: QuatAC, G_t: QuatAC, tol: float = 1e-8) -> np.ndarray:
    """Pointwise: is span(G_s, G_t) inside an A-line?  (cross product vanishes)."""
    cr = cross(G_s, G_t)
    scale = np.maximum(np.max(np.abs(G_s.data), axis=(-1, -2)) * np.max(np.abs(G_t.data), axis=(-1, -2)), 1e-300)
    return np.max(np.abs(cr.data), axis=(-1, -2)) <= tol * scale


def degenerate_cross_check(xi: QuatAC, xi2: QuatAC, tol: float = 1e-10) -> str:
    """Classify a pair of Im H0 vectors by what a vanishing cross product forces on them."""
    cr = cross(xi, xi2)
    scale = max(xi.max_abs() * xi2.max_abs(), 1e-300)
    if cr.max_abs() > tol * scale:
        return "independent"
    nx = [np.abs(xi.data[..., k, :]).max() for k in range(2)]
    ny = [np.abs(xi2.data[..., k, :]).max() for k in range(2)]
    zero_x = [n <= tol * max(max(nx), 1e-300) for n in nx]
    zero_y = [n <= tol * max(max(ny), 1e-300) for n in ny]
    # one null component of xi vanishing while xi2 lives on the other one
    if (zero_x[1] and zero_y[0] and not zero_x[0] and not zero_y[1]) or \
       (zero_x[0] and zero_y[1] and not zero_x[1] and not zero_y[0]):
        return "sigmaRelation"
    for k in range(2):
        if not zero_x[k] and zero_y[k]:
            continue
        if zero_x[k] and not zero_y[k]:
            return "antiScalar"
    return "scalarMultiple"


def sigma_relation_holds(xi: QuatAC, xi2: QuatAC, tol: float = 1e-10) -> bool:
    lhs = xi + xi2
    diff = (xi - xi2).times_sigma()
    return lhs.isclose(diff, tol) or lhs.isclose(-diff, tol)


# ------------------------------------------------ geometry of a sampled F

@dataclass
class SurfaceGeometry:
    chart: NullChart
    F: np.ndarray
    F_s: np.ndarray
    F_t: np.ndarray
    metric: MetricField
    e: np.ndarray  # grid + (4, 4): rows e0, e1, e2, e3 in R^{2,2}
    frame: np.ndarray  # coordinate components of e2, e3
    B: SecondFundamentalForm
    K: np.ndarray
    K_N: np.ndarray
    K_intrinsic: np.ndarray
    mean_curvature: np.ndarray
    G: QuatAC
    normal_conn: np.ndarray
    extras: dict = field(default_factory=dict)

    @property
    def mean_curvature_sq(self):
        h = self.mean_curvature
        return -h[..., 0] ** 2 + h[..., 1] ** 2


def _align_signs(vec: np.ndarray) -> np.ndarray:
    """Flip signs of a grid of vectors so that neighbours point the same way."""
    out = np.array(vec, copy=True)
    if out.ndim < 3:
        return out
    for j in range(1, out.shape[1]):
        flip = np.sum(out[0, j] * out[0, j - 1]) < 0
        if flip:
            out[0, j] = -out[0, j]
    for i in range(1, out.shape[0]):
        dots = np.sum(out[i] * out[i - 1], axis=-1)
        out[i] = out[i] * np.where(dots < 0, -1.0, 1.0)[..., None]
    return out


def _tangent_frame(g: np.ndarray):
    """Coordinate components (columns) of an oriented orthonormal (e2, e3)."""
    w, v = np.linalg.eigh(g)
    if np.any(w[..., 0] >= 0) or np.any(w[..., 1] <= 0):
        raise DegenerateMetric("metric is not Lorentzian on the whole grid")
    c2 = v[..., :, 0] / np.sqrt(-w[..., 0])[..., None]
    c3 = v[..., :, 1] / np.sqrt(w[..., 1])[..., None]
    c2 = c2 * np.where(c2[..., 0] + c2[..., 1] < 0, -1.0, 1.0)[..., None]
    c2 = _align_signs(c2)
    det = c2[..., 0] * c3[..., 1] - c2[..., 1] * c3[..., 0]
    c3 = c3 * np.sign(det)[..., None]
    return np.stack([c2, c3], axis=-1)


def _normal_frame(e2, e3):
    """Orthonormal (e0 timelike, e1 spacelike) normal frame with det(e0,e1,e2,e3) > 0."""
    eta = np.diag([-1.0, 1.0, -1.0, 1.0])
    shape = e2.shape[:-1]
    basis = np.broadcast_to(np.eye(4), shape + (4, 4))

    def project_out(x):
        return x - (-norm22(x, e2))[..., None] * e2 - norm22(x, e3)[..., None] * e3

    cand = np.stack([project_out(basis[..., k, :]) for k in range(4)], axis=-2)
    gram = np.einsum("...ia,ab,...jb->...ij", cand, eta, cand)
    w, v = np.linalg.eigh(gram)
    # two eigenvalues are ~0 (the tangent directions projected away); keep the extreme ones
    n0 = np.einsum("...i,...ia->...a", v[..., :, 0], cand)
    n1 = np.einsum("...i,...ia->...a", v[..., :, -1], cand)
    n0 = n0 / np.sqrt(np.abs(norm22(n0)))[..., None]
    n1 = n1 - (-norm22(n1, n0))[..., None] * n0
    n1 = n1 / np.sqrt(np.abs(norm22(n1)))[..., None]
    n0 = _align_signs(n0 * np.where(n0[..., 0] < 0, -1.0, 1.0)[..., None])
    det = np.linalg.det(np.stack([n0, n1, e2, e3], axis=-2))
    n1 = n1 * np.sign(det)[..., None]
    return n0, n1


def analyze_immersion(F: np.ndarray, chart: NullChart, xi_s=None, xi_t=None) -> SurfaceGeometry:
    """Frames, fundamental forms, curvatures and Gauss map of a sampled immersion."""
    F = np.asarray(F, float)
    F_s = chart.d_ds(F) if xi_s is None else np.asarray(xi_s, float)
    F_t = chart.d_dt(F) if xi_t is None else np.asarray(xi_t, float)
    metric = MetricField.from_tangents(chart, F_s, F_t)
    metric.check_nondegenerate()
    frame = _tangent_frame(metric.matrix())
    e2 = frame[..., 0, 0, None] * F_s + frame[..., 1, 0, None] * F_t
    e3 = frame[..., 0, 1, None] * F_s + frame[..., 1, 1, None] * F_t
    e0, e1 = _normal_frame(e2, e3)
    F_ss = chart.d_ds(F_s)
    F_tt = chart.d_dt(F_t)
    F_st = 0.5 * (chart.d_dt(F_s) + chart.d_ds(F_t))

    def normal_part(x):
        return np.stack([-norm22(x, e0), norm22(x, e1)], axis=-1)

    bc = np.stack([np.stack([normal_part(F_ss), normal_part(F_st)], -2),
                   np.stack([normal_part(F_st), normal_part(F_tt)], -2)], -3)
    bf = np.einsum("...ai,...bj,...abn->...ijn", frame, frame, bc)
    B = SecondFundamentalForm(bf[..., 0, 0, :], bf[..., 0, 1, :], bf[..., 1, 1, :], frame)
    K, KN = extrinsic_curvatures(B)
    K_int = intrinsic_curvature(metric)
    G = gauss_map_from_frame(e2, e3)
    e = np.stack([e0, e1, e2, e3], axis=-2)
    normal_conn = np.stack([norm22(chart.d_ds(e0), e1), norm22(chart.d_dt(e0), e1)], axis=-1)
    return SurfaceGeometry(chart, F, F_s, F_t, metric, e, frame, B, K, KN, K_int, B.mean_curvature(), G,
                           normal_conn)
