"""Spin representation on H0: Clifford action, Spin(2,2), double cover, splittings, pairings."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NegativeSquareRoot, NotUnitSpinor
from .lorentz import (
    SIGMA_I_ONE,
    CliffordElement,
    LorentzNumber,
    QuatAC,
    QI,
    QJ,
    h1_to_vector,
    h_form,
    h_form_real,
    real8_to_h0,
    vector_to_h1,
)

UNIT_TOL = 1e-9
COVER_TOL = 1e-10


def even_action(p: QuatAC, s: QuatAC) -> QuatAC:
    return p * s


def _odd_part(x) -> QuatAC:
    if isinstance(x, QuatAC):
        return x
    if isinstance(x, CliffordElement):
        return x.odd
    return vector_to_h1(x)


def vector_action(x, s: QuatAC) -> QuatAC:
    """Clifford action of a vector (R^{2,2} coordinates or its H1 image): sigma i [x] hat(s)."""
    return SIGMA_I_ONE * _odd_part(x) * s.hat()


def clifford_action(c: CliffordElement, s: QuatAC) -> QuatAC:
    """Action of a general Clifford element: p s + sigma i q hat(s)."""
    return c.even * s + SIGMA_I_ONE * c.odd * s.hat()


def right_j(s: QuatAC) -> QuatAC:
    """Complex structure of the spinor space."""
    return s * QJ


def unit_defect(p: QuatAC) -> float:
    h = h_form(p, p)
    return float(max(np.max(np.abs(h.plus - 1), initial=0.0), np.max(np.abs(h.minus - 1), initial=0.0)))


def check_unit(p: QuatAC, tol: float = UNIT_TOL) -> None:
    d = unit_defect(p)
    if d > tol:
        raise NotUnitSpinor(f"|H(p,p) - 1| = {d:.3e} exceeds {tol:.1e}")


def renormalize(p: QuatAC) -> QuatAC:
    """Divide by the A-square root of H(p, p)."""
    h = h_form_real(p, p, tol=1e-6)
    if np.any(np.asarray(h.plus) <= 0) or np.any(np.asarray(h.minus) <= 0):
        raise NotUnitSpinor("H(p,p) has a non-positive null component")
    try:
        root = h.sqrt()
    except NegativeSquareRoot as exc:  # pragma: no cover - guarded above
        raise NotUnitSpinor(str(exc)) from exc
    return p.scale(root.inverse())


def random_unit(rng=None, scale: float = 1.0) -> QuatAC:
    """Random element of Spin(2,2) (both null components of H positive, then normalized)."""
    rng = np.random.default_rng(rng)
    while True:
        p = real8_to_h0(scale * rng.normal(size=8))
        h = h_form_real(p, p, tol=None)
        if float(h.plus) > 0.05 and float(h.minus) > 0.05:
            return renormalize(p)


def quat_conjugation(p: QuatAC, q: QuatAC) -> QuatAC:
    """q -> p q hat(p)^{-1}."""
    return p * q * p.hat().inverse()


_BASIS = [np.eye(4)[k] for k in range(4)]


def double_cover(p: QuatAC, tol: float = UNIT_TOL) -> np.ndarray:
    """4x4 matrix of q -> p q hat(p)^{-1} on R^{2,2} (columns are images of e0..e3)."""
    check_unit(p, tol)
    hinv = p.hat().inverse()
    cols = []
    for e in _BASIS:
        image = p * vector_to_h1(e) * hinv
        cols.append(h1_to_vector(image, tol=COVER_TOL))
    return np.stack(cols, axis=-1)


def s1a_element(a: LorentzNumber) -> QuatAC:
    """cosh(a) + i sinh(a) I, a generator of the stabilizer of the splitting."""
    return QuatAC.from_coeffs(a.cosh()) + QI.times_i() * a.sinh()


@dataclass(frozen=True)
class SplitMask:
    """Addresses one of the four lines: sign of sigma and sign of e0.e1."""

    sign_sigma: int
    sign_e01: int

    def __post_init__(self):
        if self.sign_sigma not in (1, -1) or self.sign_e01 not in (1, -1):
            raise ValueError("signs must be +1 or -1")

    @classmethod
    def from_label(cls, label: str) -> "SplitMask":
        """Label 'ab' of Sigma^{ab}: a is the e0.e1 sign, b the e2.e3 sign."""
        e01 = 1 if label[0] == "+" else -1
        e23 = 1 if label[1] == "+" else -1
        return cls(e01 * e23, e01)


E0 = np.array([1.0, 0, 0, 0])
E1 = np.array([0, 1.0, 0, 0])
E2 = np.array([0, 0, 1.0, 0])
E3 = np.array([0, 0, 0, 1.0])


def e01_action(s: QuatAC) -> QuatAC:
    return vector_action(E0, vector_action(E1, s))


def split_project(s: QuatAC, mask: SplitMask) -> QuatAC:
    by_sigma = (s + s.times_sigma() * mask.sign_sigma) * 0.5
    return (by_sigma + e01_action(by_sigma) * mask.sign_e01) * 0.5


def real_structure(s: QuatAC) -> QuatAC:
    """beta(s) = i sigma s I."""
    return (s * QI).times_sigma().times_i()


def spinor_pairing(s: QuatAC, t: QuatAC):
    """Return (sigma i bar(t) s, its sigma i 1 coefficient)."""
    bracket = SIGMA_I_ONE * t.bar() * s
    c0 = bracket.data[..., :, 0]
    # divide by sigma i: plus component by i, minus component by -i
    h = LorentzNumber(np.real(c0[..., 0] / 1j), np.real(-c0[..., 1] / 1j))
    return bracket, h


def real_product(s: QuatAC, t: QuatAC):
    """<s, t> = Re H(s, t) (the coefficient of 1 in A)."""
    return h_form_real(s, t, tol=None).u


def real_gram(basis: list[QuatAC]) -> np.ndarray:
    n = len(basis)
    return np.array([[float(real_product(basis[i], basis[j])) for j in range(n)] for i in range(n)])
