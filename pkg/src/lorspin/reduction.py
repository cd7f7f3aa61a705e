"""Surfaces in the hyperplanes R^{1,2} = (sigma i 1)^perp and R^{2,1} = (I)^perp.

Intrinsic spinors of the surface are pairs of complex numbers (z1, z2).  The
tangent frame acts by the matrices

    e2 -> [[0, 1], [1, 0]]      e3 -> [[0, 1], [-1, 0]]

so e2.e2 = 1, e3.e3 = -1 and e2.e3 = diag(-1, 1).  Identifications with the
positive half-spinors of R^{2,2} are solved for numerically, once per target.
With the opposite sign of e3 the norm relation of R^{1,2} has no solution.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dirac import SpinorField, XiForm, dirac_residual, xi_and_closedness, xi_of_vectors
from .errors import InputError, IntrinsicEquationViolated, NoSolution
from .lorentz import QJ, QuatAC, h0_to_real8, h1_to_vector, h_form, real8_to_h0
from .spin import E0, E1, E2, E3, real_structure, spinor_pairing, vector_action
from .surface import NullChart, interior

TARGETS = ("R12", "R21")
CONSTRAINT_TOL = 1e-12

CLIFFORD_E2 = np.array([[0, 1], [1, 0]], dtype=complex)
CLIFFORD_E3 = np.array([[0, 1], [-1, 0]], dtype=complex)

# Constant normal of each hyperplane, as an R^{2,2} vector, and its coordinate index.
HYPERPLANE_NORMAL = {"R12": 0, "R21": 1}


def _check_target(target: str) -> str:
    if target not in TARGETS:
        raise InputError(f"target must be one of {TARGETS}, got {target!r}")
    return target


# ------------------------------------------------------------ intrinsic side

def intrinsic_product(psi, phi, target: str):
    """Scalar product on intrinsic spinors (last axis holds z1, z2)."""
    _check_target(target)
    psi = np.asarray(psi, complex)
    phi = np.asarray(phi, complex)
    cross = psi[..., 0] * np.conj(phi[..., 1]) + phi[..., 0] * np.conj(psi[..., 1])
    if target == "R12":
        return -0.5 * np.imag(cross)
    return -0.5 * np.real(cross)


def intrinsic_action(x2, x3, psi) -> np.ndarray:
    """(x2 e2 + x3 e3) . psi."""
    psi = np.asarray(psi, complex)
    x2 = np.asarray(x2, float)[..., None]
    x3 = np.asarray(x3, float)[..., None]
    return x2 * (psi @ CLIFFORD_E2.T) + x3 * (psi @ CLIFFORD_E3.T)


def complex_conjugate(psi) -> np.ndarray:
    """alpha: conjugate both coordinates."""
    return np.conj(np.asarray(psi, complex))


def grading_conjugate(psi) -> np.ndarray:
    """psi+ - psi-; the first coordinate is the positive half."""
    psi = np.array(psi, complex)
    psi[..., 1] *= -1
    return psi


def _to_real4(psi) -> np.ndarray:
    psi = np.asarray(psi, complex)
    return np.stack([psi[..., 0].real, psi[..., 0].imag, psi[..., 1].real, psi[..., 1].imag], axis=-1)


def _from_real4(x) -> np.ndarray:
    x = np.asarray(x, float)
    return np.stack([x[..., 0] + 1j * x[..., 1], x[..., 2] + 1j * x[..., 3]], axis=-1)


def _intrinsic_matrix(fn) -> np.ndarray:
    return np.stack([_to_real4(fn(_from_real4(e))) for e in np.eye(4)], axis=-1)


def intrinsic_gram(target: str) -> np.ndarray:
    basis = _from_real4(np.eye(4))
    return np.array([[float(intrinsic_product(a, b, target)) for b in basis] for a in basis])


# ------------------------------------------------------------ identification

def _h0_matrix(fn) -> np.ndarray:
    return np.stack([h0_to_real8(fn(real8_to_h0(e))) for e in np.eye(8)], axis=-1)


def _sigma_action(target: str, k: int):
    """Right-hand side of the intertwining relation for e_{2+k} on Sigma."""
    x = (E2, E3)[k]
    if target == "R12":
        return lambda p: vector_action(x, vector_action(E1, p))
    return lambda p: vector_action(E0, vector_action(x, p)) * QJ


@dataclass(frozen=True)
class Identification:
    """Real-linear map from intrinsic spinors (a, b, c, d) into H0 (8 real coordinates)."""

    target: str
    matrix: np.ndarray  # (8, 4)
    gauge: float  # rotation applied to the raw nullspace solution, radians
    constraint_defect: float

    def apply(self, psi) -> QuatAC:
        x = _to_real4(psi) @ self.matrix.T
        return real8_to_h0(x)

    def metadata(self) -> dict:
        return {
            "target": self.target,
            "gauge": "phase fixed by the explicit xi formula; image of (1, 0) has positive first coordinate",
            "gauge_angle": self.gauge,
            "constraint_defect": self.constraint_defect,
        }


def _norm_sign(target: str) -> float:
    return 1.0 if target == "R12" else -1.0


def _plus_gram(L: np.ndarray) -> np.ndarray:
    images = [real8_to_h0(L[:, k]) for k in range(L.shape[1])]
    return np.array([[float(np.real(h_form(a, b).plus)) for b in images] for a in images])


def identification_defects(ident: Identification) -> dict:
    """Residuals of every defining constraint, for both tangent vectors."""
    L = ident.matrix
    jr = _h0_matrix(lambda p: p * QJ)
    ji = _intrinsic_matrix(lambda z: 1j * z)
    out = {
        "complex_linear": float(np.max(np.abs(jr @ L - L @ ji))),
        "positive_half": float(np.max(np.abs(L[1::2]))),
    }
    for k, clifford in enumerate((CLIFFORD_E2, CLIFFORD_E3)):
        mx = _intrinsic_matrix(lambda z, c=clifford: z @ c.T)
        ax = _h0_matrix(_sigma_action(ident.target, k))
        out[f"intertwine_e{k + 2}"] = float(np.max(np.abs(L @ mx - ax @ L)))
    gram = _plus_gram(L)
    out["norm"] = float(np.max(np.abs(gram - _norm_sign(ident.target) * intrinsic_gram(ident.target))))
    minus = np.array([[float(np.real(h_form(real8_to_h0(L[:, i]), real8_to_h0(L[:, j])).minus))
                       for j in range(4)] for i in range(4)])
    out["norm_minus"] = float(np.max(np.abs(minus)))
    return out


def _point_xi_mismatch(target: str, L: np.ndarray) -> float:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(4):
        psi = rng.normal(size=2) + 1j * rng.normal(size=2)
        star = real8_to_h0(_to_real4(psi) @ L.T)
        g = _lift_spinor(star, target)
        for x2, x3 in ((1.0, 0.0), (0.0, 1.0)):
            vec = np.array([0.0, 0.0, x2, x3])
            lifted = h1_to_vector(spinor_pairing(vector_action(vec, g), g)[0], tol=None)
            explicit = _explicit_vector(intrinsic_action(x2, x3, psi), psi, target)
            worst = max(worst, float(np.max(np.abs(lifted - explicit))))
    return worst


def _fix_phase(target: str, L: np.ndarray, jr: np.ndarray) -> float:
    # start from the phase making the J coordinate of the image of (1, 0) vanish,
    # then try the eighth turns
    col = L[:, 0]
    start = -np.arctan2(col[4], col[0]) if abs(col[0]) + abs(col[4]) > 1e-8 else -np.arctan2(col[6], col[2])
    best = None
    for k in range(8):
        theta = start + k * np.pi / 4
        cand = (np.cos(theta) * np.eye(8) + np.sin(theta) * jr) @ L
        if cand[0, 0] <= 1e-12:
            continue
        err = _point_xi_mismatch(target, cand)
        if best is None or err < best[0]:
            best = (err, theta)
    if best is None or best[0] > 1e-10:
        raise NoSolution(f"{target}: no phase reconciles the lift with the explicit xi formula")
    return float(np.mod(best[1], 2 * np.pi))


@lru_cache(maxsize=None)
def build_identification(target: str) -> Identification:
    """Solve the linear constraints, then fix scale by the norm relation and the phase by the gauge rule."""
    _check_target(target)
    jr = _h0_matrix(lambda p: p * QJ)
    ji = _intrinsic_matrix(lambda z: 1j * z)
    eye4, eye8 = np.eye(4), np.eye(8)
    # vec(A L B) = (B^T kron A) vec(L), column-major vec
    blocks = [np.kron(eye4, jr) - np.kron(ji.T, eye8)]
    for k, clifford in enumerate((CLIFFORD_E2, CLIFFORD_E3)):
        mx = _intrinsic_matrix(lambda z, c=clifford: z @ c.T)
        ax = _h0_matrix(_sigma_action(target, k))
        blocks.append(np.kron(mx.T, eye8) - np.kron(eye4, ax))
    minus_rows = eye8[1::2]
    blocks.append(np.kron(eye4, minus_rows))
    system = np.vstack(blocks)
    _, sv, vt = np.linalg.svd(system)
    rank = int(np.sum(sv > 1e-10 * sv[0]))
    null = vt[rank:]
    if null.shape[0] == 0:
        raise NoSolution(f"{target}: intertwining constraints have no nonzero solution")
    raw = null[0].reshape(4, 8).T
    gram = _plus_gram(raw)
    target_gram = _norm_sign(target) * intrinsic_gram(target)
    kappa = float(np.sum(gram * target_gram) / np.sum(target_gram * target_gram))
    if kappa <= 0 or np.max(np.abs(gram - kappa * target_gram)) > 1e-9 * max(1.0, abs(kappa)):
        raise NoSolution(f"{target}: norm relation cannot be met by the intertwining solutions")
    L = raw / np.sqrt(kappa)
    # Remaining freedom: a unit complex scalar, i.e. right multiplication by
    # cos(theta) + sin(theta) J.  The phase is the one for which the explicit
    # xi formula holds; of the two such phases (theta, theta + pi) keep the one
    # whose image of (1, 0) has a positive first coordinate.
    theta = _fix_phase(target, L, jr)
    rot = np.cos(theta) * eye8 + np.sin(theta) * jr
    L = rot @ L
    L[np.abs(L) < 1e-15] = 0.0
    ident = Identification(target, L, float(theta), 0.0)
    defect = max(identification_defects(ident).values())
    if defect > CONSTRAINT_TOL:
        raise NoSolution(f"{target}: identification constraints violated by {defect:.3e}")
    return Identification(target, L, float(theta), defect)


# ------------------------------------------------------------ fields

@dataclass
class IntrinsicField:
    """Grid of intrinsic spinors with the orthonormal tangent frame used to express them."""

    chart: NullChart
    psi: np.ndarray  # grid + (2,) complex
    frame: np.ndarray  # grid + (2, 2), as SpinorField.frame

    def __post_init__(self):
        self.psi = np.asarray(self.psi, complex)
        if self.psi.shape != self.chart.shape + (2,):
            raise InputError(f"intrinsic spinor grid must have shape {self.chart.shape + (2,)}")
        self.frame = np.broadcast_to(np.asarray(self.frame, float), self.chart.shape + (2, 2)).copy()

    def d_frame(self):
        ps = self.chart.d_ds(self.psi)
        pt = self.chart.d_dt(self.psi)
        return [self.frame[..., 0, k, None] * ps + self.frame[..., 1, k, None] * pt for k in range(2)]

    def dirac(self) -> np.ndarray:
        d2, d3 = self.d_frame()
        return -(d2 @ CLIFFORD_E2.T) + d3 @ CLIFFORD_E3.T


def intrinsic_dirac_residual(field: IntrinsicField, H, target: str) -> np.ndarray:
    """|D psi - H psi| (R12) or |D psi - i H psi| (R21), together with the norm drift."""
    _check_target(target)
    H = np.asarray(H, float)[..., None]
    rhs = H * field.psi if target == "R12" else 1j * H * field.psi
    return np.max(np.abs(field.dirac() - rhs), axis=-1)


def intrinsic_norm_defect(field: IntrinsicField, target: str) -> float:
    expected = 1.0 if target == "R12" else -1.0
    return float(np.max(np.abs(intrinsic_product(field.psi, field.psi, target) - expected)))


def intrinsic_tolerance(chart: NullChart) -> float:
    return max(1e-8, 50.0 * max(chart.h_s, chart.h_t) ** 2)


def _check_intrinsic(field: IntrinsicField, H, target: str, tol: float | None):
    tol = intrinsic_tolerance(field.chart) if tol is None else tol
    res = interior(intrinsic_dirac_residual(field, H, target))
    worst = float(np.max(res))
    if worst > tol:
        idx = np.unravel_index(int(np.argmax(res)), res.shape)
        raise IntrinsicEquationViolated(f"intrinsic Dirac residual {worst:.3e} > {tol:.1e} at interior index {idx}")
    drift = intrinsic_norm_defect(field, target)
    if drift > tol:
        raise IntrinsicEquationViolated(f"intrinsic norm deviates by {drift:.3e} > {tol:.1e}")


def _lift_spinor(star: QuatAC, target: str) -> QuatAC:
    if target == "R12":
        return star + vector_action(E0, star)
    return star + vector_action(E1, real_structure(star))


def lift_intrinsic(field: IntrinsicField, H, target: str, tol: float | None = None,
                   check: bool = True) -> SpinorField:
    """phi = psi* + e0.psi* (R12) or psi* + e1.beta(psi*) (R21)."""
    _check_target(target)
    if check:
        _check_intrinsic(field, H, target, tol)
    star = build_identification(target).apply(field.psi)
    return SpinorField(field.chart, _lift_spinor(star, target), field.frame)


def lifted_mean_curvature(H, target: str) -> np.ndarray:
    """Components (H0, H1) of the mean curvature vector of a lift."""
    H = np.asarray(H, float)
    z = np.zeros_like(H)
    return np.stack([z, H] if target == "R12" else [H, z], axis=-1)


@dataclass
class EmbedReport:
    target: str
    algebraic: float  # |e0.phi - phi| or |e1.phi + beta(phi)|
    normal: float  # |<<e_r.phi, phi>> - constant normal|
    norm: float

    @property
    def deviation(self) -> float:
        return max(self.algebraic, self.normal, self.norm)

    def as_dict(self) -> dict:
        return {"target": self.target, "algebraic": self.algebraic, "normal": self.normal,
                "norm": self.norm, "deviation": self.deviation}


def embed_check(phi: SpinorField, target: str) -> EmbedReport:
    """Pointwise membership conditions for the hyperplane; report only."""
    _check_target(target)
    g = phi.g
    if target == "R12":
        acted = vector_action(E0, g)
        algebraic = (acted - g).max_abs()
        expected = np.array([1.0, 0, 0, 0])
    else:
        acted = vector_action(E1, g)
        algebraic = (acted + real_structure(g)).max_abs()
        expected = np.array([0, 1.0, 0, 0])
    bracket = spinor_pairing(acted, g)[0]
    normal = h1_to_vector(bracket, tol=None)
    return EmbedReport(target, float(algebraic), float(np.max(np.abs(normal - expected))),
                       phi.normalization_defect())


# The formulas hold up to one global sign with the Clifford conventions used
# here; it was pinned against the lifted xi.
XI_SIGN = -1.0


def _explicit_vector(xpsi, psi, target: str) -> np.ndarray:
    vec = np.zeros(np.shape(psi)[:-1] + (4,))
    if target == "R12":
        chi = grading_conjugate(psi)
        alpha_chi = complex_conjugate(chi)
        vec[..., 1] = -intrinsic_product(xpsi, alpha_chi, target)
        vec[..., 2] = intrinsic_product(xpsi, 1j * chi, target)
        vec[..., 3] = -intrinsic_product(xpsi, 1j * alpha_chi, target)
    else:
        alpha = complex_conjugate(psi)
        vec[..., 0] = intrinsic_product(xpsi, alpha, target)
        vec[..., 2] = -intrinsic_product(xpsi, 1j * alpha, target)
        vec[..., 3] = -intrinsic_product(xpsi, grading_conjugate(psi), target)
    return XI_SIGN * vec


def explicit_xi(field: IntrinsicField, target: str) -> XiForm:
    """xi from intrinsic data: coordinates of X.psi in a fixed orthonormal basis of the hyperplane."""
    _check_target(target)
    cinv = np.linalg.inv(field.frame)
    out = [_explicit_vector(intrinsic_action(cinv[..., 0, a], cinv[..., 1, a], field.psi), field.psi, target)
           for a in range(2)]
    return XiForm(field.chart, out[0], out[1])


def omitted_pairing(field: IntrinsicField, target: str) -> float:
    """The pairing left out of the explicit formula; it vanishes identically."""
    psi = field.psi
    cinv = np.linalg.inv(field.frame)
    worst = 0.0
    for a in range(2):
        xpsi = intrinsic_action(cinv[..., 0, a], cinv[..., 1, a], psi)
        other = grading_conjugate(psi) if target == "R12" else 1j * grading_conjugate(psi)
        worst = max(worst, float(np.max(np.abs(intrinsic_product(xpsi, other, target)))))
    return worst


def explicit_basis(psi, target: str) -> list[np.ndarray]:
    """(chi, alpha chi, i chi, i alpha chi) for R12, (alpha psi, i psibar, i alpha psi, psibar) for R21."""
    psi = np.asarray(psi, complex)
    if target == "R12":
        chi = grading_conjugate(psi)
        return [chi, complex_conjugate(chi), 1j * chi, 1j * complex_conjugate(chi)]
    bar = grading_conjugate(psi)
    alpha = complex_conjugate(psi)
    return [alpha, 1j * bar, 1j * alpha, bar]


def lifted_xi(phi: SpinorField) -> XiForm:
    return xi_and_closedness(phi)[0]


# ------------------------------------------------------------ test solutions

def constant_h_solution(chart: NullChart, H: float, psi0, target: str, direction=(0.0, 1.0)) -> IntrinsicField:
    """Separable solution on the flat chart with metric -ds^2 + dt^2 and frame e2 = d_s, e3 = d_t.

    psi = exp(c (alpha s + beta t) N) psi0 with N = (alpha e2 - beta e3)^{-1} and
    c = -H (R12) or -i H (R21); (alpha, beta) must be a spacelike direction so the
    exponential is a rotation and preserves the norm in the R12 case.
    """
    _check_target(target)
    alpha, beta = map(float, direction)
    if beta * beta - alpha * alpha <= 0:
        raise InputError("direction must satisfy beta^2 > alpha^2")
    v = -alpha * CLIFFORD_E2 + beta * CLIFFORD_E3
    n = -np.linalg.inv(v)
    c = -H if target == "R12" else -1j * H
    s, t = chart.grid()
    phase = c * (alpha * s + beta * t)
    # N^2 = -1 / (beta^2 - alpha^2): closed form exponential
    w = 1.0 / np.sqrt(beta * beta - alpha * alpha)
    cos = np.cos(phase * w)[..., None, None]
    sin = (np.sin(phase * w) / w)[..., None, None]
    expo = cos * np.eye(2) + sin * n
    psi = expo @ np.asarray(psi0, complex)
    return IntrinsicField(chart, psi, np.eye(2))


def unit_intrinsic(target: str, rng=None) -> np.ndarray:
    """A random intrinsic spinor with |psi|^2 = 1 (R12) or -1 (R21)."""
    rng = np.random.default_rng(rng)
    want = 1.0 if target == "R12" else -1.0
    while True:
        psi = rng.normal(size=2) + 1j * rng.normal(size=2)
        n = float(intrinsic_product(psi, psi, target))
        if n * want > 0.05:
            return psi / np.sqrt(n * want)


__all__ = [
    "TARGETS", "CLIFFORD_E2", "CLIFFORD_E3", "HYPERPLANE_NORMAL", "intrinsic_product", "intrinsic_action",
    "complex_conjugate", "grading_conjugate", "intrinsic_gram", "Identification", "identification_defects",
    "build_identification", "IntrinsicField", "intrinsic_dirac_residual", "intrinsic_norm_defect",
    "intrinsic_tolerance", "lift_intrinsic", "lifted_mean_curvature", "EmbedReport", "embed_check",
    "XI_SIGN", "explicit_xi", "omitted_pairing", "explicit_basis", "lifted_xi", "constant_h_solution", "unit_intrinsic",
    "dirac_residual", "xi_of_vectors",
]
