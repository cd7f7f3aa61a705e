"""Lorentz numbers, their complexification, and quaternions over them.

Everything over the ring A = R[sigma]/(sigma^2 = 1) is stored in the null
(idempotent) basis: a = (1+sigma)/2 * plus + (1-sigma)/2 * minus.  In that
basis multiplication, exp and inversion act componentwise, and a quaternion
over A_C is simply a pair of complex quaternions.

Quaternion arrays have shape (..., 2, 4): axis -2 is the null component
(0 = plus, 1 = minus), axis -1 the coefficients of 1, I, J, K.  Leading axes
are grid axes and broadcast normally.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import InverseOfZeroDivisor, NegativeSquareRoot

ALGEBRA_TOL = 1e-12


class _NullPair:
    """Shared arithmetic of A and A_C in the null basis."""

    __slots__ = ("plus", "minus")

    def __init__(self, plus, minus):
        self.plus = plus
        self.minus = minus

    @classmethod
    def from_uv(cls, u, v):
        u = np.asarray(u)
        v = np.asarray(v)
        return cls(u + v, u - v)

    @property
    def u(self):
        return (self.plus + self.minus) / 2

    @property
    def v(self):
        return (self.plus - self.minus) / 2

    def _wrap(self, plus, minus):
        if np.iscomplexobj(plus) or np.iscomplexobj(minus):
            return LorentzComplex(plus, minus)
        return type(self)(plus, minus)

    @staticmethod
    def _parts(other):
        if isinstance(other, _NullPair):
            return other.plus, other.minus
        return other, other

    def __add__(self, other):
        p, m = self._parts(other)
        return self._wrap(self.plus + p, self.minus + m)

    __radd__ = __add__

    def __sub__(self, other):
        p, m = self._parts(other)
        return self._wrap(self.plus - p, self.minus - m)

    def __rsub__(self, other):
        p, m = self._parts(other)
        return self._wrap(p - self.plus, m - self.minus)

    def __mul__(self, other):
        if isinstance(other, QuatAC):
            return other.scale(self)
        p, m = self._parts(other)
        return self._wrap(self.plus * p, self.minus * m)

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.plus, -self.minus)

    def __truediv__(self, other):
        if isinstance(other, _NullPair):
            return self * other.inverse()
        return self._wrap(self.plus / other, self.minus / other)

    def hat(self):
        return self._wrap(self.minus, self.plus)

    def inverse(self):
        if np.any(np.asarray(self.plus) == 0) or np.any(np.asarray(self.minus) == 0):
            raise InverseOfZeroDivisor("a null component is zero")
        return self._wrap(1 / self.plus, 1 / self.minus)

    def exp(self):
        return self._wrap(np.exp(self.plus), np.exp(self.minus))

    def cosh(self):
        return self._wrap(np.cosh(self.plus), np.cosh(self.minus))

    def sinh(self):
        return self._wrap(np.sinh(self.plus), np.sinh(self.minus))

    def isclose(self, other, tol=ALGEBRA_TOL) -> bool:
        p, m = self._parts(other)
        return bool(np.all(np.abs(self.plus - p) <= tol) and np.all(np.abs(self.minus - m) <= tol))

    def __repr__(self):
        return f"{type(self).__name__}(u={self.u!r}, v={self.v!r})"


class LorentzNumber(_NullPair):
    """Element u + sigma v of A (real null components)."""

    __slots__ = ()

    def __init__(self, plus, minus):
        plus = np.asarray(plus, dtype=float) if not np.isscalar(plus) else float(plus)
        minus = np.asarray(minus, dtype=float) if not np.isscalar(minus) else float(minus)
        super().__init__(plus, minus)

    def sqrt(self):
        if np.any(np.asarray(self.plus) < 0) or np.any(np.asarray(self.minus) < 0):
            raise NegativeSquareRoot("square root needs both null components >= 0")
        return LorentzNumber(np.sqrt(self.plus), np.sqrt(self.minus))


class LorentzComplex(_NullPair):
    """Element of A_C = A tensor C (complex null components)."""

    __slots__ = ()

    def __init__(self, plus, minus):
        super().__init__(np.asarray(plus, dtype=complex), np.asarray(minus, dtype=complex))

    def _wrap(self, plus, minus):
        return LorentzComplex(plus, minus)

    def conj(self):
        return LorentzComplex(np.conj(self.plus), np.conj(self.minus))

    def real_part(self, tol=None) -> LorentzNumber:
        """Drop the imaginary part; with tol set, insist it is negligible."""
        if tol is not None:
            worst = max(np.max(np.abs(np.imag(self.plus)), initial=0.0),
                        np.max(np.abs(np.imag(self.minus)), initial=0.0))
            if worst > tol:
                raise ValueError(f"imaginary part {worst:.3e} exceeds {tol:.1e}")
        return LorentzNumber(np.real(self.plus), np.real(self.minus))


SIGMA = LorentzNumber(1.0, -1.0)
ONE_A = LorentzNumber(1.0, 1.0)


def a_arith(x: LorentzNumber, y: LorentzNumber | None = None, kind: str = "add"):
    """Ring operations on A: add, mul, hat or inverse (y unused for the last two)."""
    if kind == "add":
        return x + y
    if kind == "mul":
        return x * y
    if kind == "hat":
        return x.hat()
    if kind == "inverse":
        return x.inverse()
    raise ValueError(f"unknown kind {kind!r}")


def a_exp_family(a: _NullPair, kind: str = "exp"):
    if kind == "exp":
        return a.exp()
    if kind == "cosh":
        return a.cosh()
    if kind == "sinh":
        return a.sinh()
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------- quaternions

def _qmul(a, b):
    a0, a1, a2, a3 = (a[..., k] for k in range(4))
    b0, b1, b2, b3 = (b[..., k] for k in range(4))
    return np.stack([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ], axis=-1)


class QuatAC:
    """Quaternion zeta_0 1 + zeta_1 I + zeta_2 J + zeta_3 K with zeta_k in A_C."""

    __slots__ = ("data",)
    __array_priority__ = 100

    def __init__(self, data):
        data = np.asarray(data, dtype=complex)
        if data.shape[-2:] != (2, 4):
            raise ValueError(f"quaternion data must end in (2, 4), got {data.shape}")
        self.data = data

    @classmethod
    def from_coeffs(cls, c0=0, c1=0, c2=0, c3=0):
        """Build from four A_C coefficients (LorentzNumber/LorentzComplex or plain numbers)."""
        cols = []
        for c in (c0, c1, c2, c3):
            if isinstance(c, _NullPair):
                cols.append(np.stack(np.broadcast_arrays(np.asarray(c.plus, complex),
                                                         np.asarray(c.minus, complex)), axis=-1))
            else:
                c = np.asarray(c, dtype=complex)
                cols.append(np.stack([c, c], axis=-1))
        cols = np.broadcast_arrays(*cols)
        return cls(np.stack(cols, axis=-1))

    @classmethod
    def zeros(cls, shape=()):
        return cls(np.zeros(tuple(shape) + (2, 4), dtype=complex))

    @property
    def shape(self):
        return self.data.shape[:-2]

    def coeff(self, k: int) -> LorentzComplex:
        return LorentzComplex(self.data[..., 0, k], self.data[..., 1, k])

    def __getitem__(self, idx):
        # Indexes the grid axes only.
        return QuatAC(self.data[idx])

    def __add__(self, other):
        return QuatAC(self.data + _as_quat(other).data)

    __radd__ = __add__

    def __sub__(self, other):
        return QuatAC(self.data - _as_quat(other).data)

    def __rsub__(self, other):
        return QuatAC(_as_quat(other).data - self.data)

    def __neg__(self):
        return QuatAC(-self.data)

    def __mul__(self, other):
        if isinstance(other, QuatAC):
            return QuatAC(_qmul(self.data, other.data))
        if isinstance(other, _NullPair):
            return self.scale(other)
        return QuatAC(self.data * other)

    def __rmul__(self, other):
        if isinstance(other, _NullPair):
            return self.scale(other)
        return QuatAC(other * self.data)

    def __truediv__(self, other):
        if isinstance(other, _NullPair):
            return self.scale(other.inverse())
        return QuatAC(self.data / other)

    def scale(self, a: _NullPair) -> "QuatAC":
        """Multiply by an A_C scalar (central, so side does not matter)."""
        pm = np.stack(np.broadcast_arrays(np.asarray(a.plus, complex), np.asarray(a.minus, complex)), axis=-1)
        return QuatAC(self.data * pm[..., None])

    def times_i(self) -> "QuatAC":
        return QuatAC(1j * self.data)

    def times_sigma(self) -> "QuatAC":
        return QuatAC(self.data * np.array([1.0, -1.0])[:, None])

    def bar(self) -> "QuatAC":
        return QuatAC(self.data * np.array([1.0, -1.0, -1.0, -1.0]))

    def hat(self) -> "QuatAC":
        return QuatAC(self.data[..., ::-1, :])

    def conj(self) -> "QuatAC":
        return QuatAC(np.conj(self.data))

    def norm_scalar(self) -> LorentzComplex:
        """q * bar(q), which is the scalar H(q, q)."""
        n = np.sum(self.data * self.data, axis=-1)
        return LorentzComplex(n[..., 0], n[..., 1])

    def inverse(self) -> "QuatAC":
        return self.bar().scale(self.norm_scalar().inverse())

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.data), initial=0.0))

    def isclose(self, other, tol=ALGEBRA_TOL) -> bool:
        return bool(np.all(np.abs(self.data - _as_quat(other).data) <= tol))

    def __repr__(self):
        return f"QuatAC(shape={self.shape}, data={self.data!r})"


def _as_quat(x) -> QuatAC:
    if isinstance(x, QuatAC):
        return x
    if isinstance(x, _NullPair):
        return QuatAC.from_coeffs(x)
    return QuatAC.from_coeffs(x)


ONE = QuatAC.from_coeffs(1)
QI = QuatAC.from_coeffs(0, 1)
QJ = QuatAC.from_coeffs(0, 0, 1)
QK = QuatAC.from_coeffs(0, 0, 0, 1)
SIGMA_ONE = QuatAC.from_coeffs(SIGMA)
SIGMA_I_ONE = SIGMA_ONE.times_i()


def quat_arith(x: QuatAC, y: QuatAC | None = None, kind: str = "mul") -> QuatAC:
    if kind == "add":
        return x + y
    if kind == "mul":
        return x * y
    if kind == "bar":
        return x.bar()
    if kind == "hat":
        return x.hat()
    raise ValueError(f"unknown kind {kind!r}")


def h_form(x: QuatAC, y: QuatAC) -> LorentzComplex:
    """Symmetric A_C-bilinear form sum_k x_k y_k."""
    s = np.sum(x.data * y.data, axis=-1)
    return LorentzComplex(s[..., 0], s[..., 1])


def h_form_real(x: QuatAC, y: QuatAC, tol=1e-9) -> LorentzNumber:
    """H restricted to even (or otherwise real-valued) arguments."""
    return h_form(x, y).real_part(tol=tol)


def quat_exp(q: QuatAC, tail_tol: float = 1e-14) -> QuatAC:
    """Exponential by truncated series with scaling and squaring."""
    data = q.data
    size = float(np.max(np.abs(data), initial=0.0))
    squarings = max(0, int(math.ceil(math.log2(size / 0.25)))) if size > 0.25 else 0
    x = data / (2.0 ** squarings)
    result = np.zeros_like(x)
    result[..., 0] = 1.0
    term = result.copy()
    # With |x| <= 1/4 per coefficient the quaternion norm is <= 1/2.
    k = 1
    while True:
        term = _qmul(term, x) / k
        result = result + term
        if np.max(np.abs(term), initial=0.0) <= tail_tol * 1e-2 or k > 60:
            break
        k += 1
    for _ in range(squarings):
        result = _qmul(result, result)
    return QuatAC(result)


# ---------------------------------------------------- even / odd subspaces

def h0_element(p0=0.0, p1=0.0, p2=0.0, p3=0.0) -> QuatAC:
    """p0 1 + i p1 I + p2 J + i p3 K with p_k in A."""
    q = QuatAC.from_coeffs(p0, p1, p2, p3)
    return QuatAC(q.data * np.array([1, 1j, 1, 1j]))


def h1_element(q0=0.0, q1=0.0, q2=0.0, q3=0.0) -> QuatAC:
    """i q0 1 + q1 I + i q2 J + q3 K with q_k in A."""
    q = QuatAC.from_coeffs(q0, q1, q2, q3)
    return QuatAC(q.data * np.array([1j, 1, 1j, 1]))


def imh0_element(a1=0.0, a2=0.0, a3=0.0) -> QuatAC:
    """i a1 I + a2 J + i a3 K with a_k in A."""
    return h0_element(0.0, a1, a2, a3)


def _real_checked(z, tol, what):
    worst = float(np.max(np.abs(np.imag(z)), initial=0.0))
    if tol is not None and worst > tol:
        raise ValueError(f"{what}: parity violation {worst:.3e} > {tol:.1e}")
    return np.real(z)


def h0_coords(q: QuatAC, tol: float | None = 1e-9) -> list[LorentzNumber]:
    d = q.data / np.array([1, 1j, 1, 1j])
    out = []
    for k in range(4):
        r = _real_checked(d[..., :, k], tol, "H0 coordinate")
        out.append(LorentzNumber(r[..., 0], r[..., 1]))
    return out


def h1_coords(q: QuatAC, tol: float | None = 1e-9) -> list[LorentzNumber]:
    d = q.data / np.array([1j, 1, 1j, 1])
    out = []
    for k in range(4):
        r = _real_checked(d[..., :, k], tol, "H1 coordinate")
        out.append(LorentzNumber(r[..., 0], r[..., 1]))
    return out


def imh0_coords(q: QuatAC, tol: float | None = 1e-9) -> list[LorentzNumber]:
    p = h0_coords(q, tol)
    if tol is not None:
        worst = float(np.max(np.abs(np.stack([p[0].plus, p[0].minus])), initial=0.0))
        if worst > tol:
            raise ValueError(f"scalar part {worst:.3e} is not zero")
    return p[1:]


def h0_to_real8(q: QuatAC) -> np.ndarray:
    """Real coordinates (p0+, p0-, p1+, p1-, ..., p3-) of an even element."""
    d = q.data / np.array([1, 1j, 1, 1j])
    return np.real(np.swapaxes(d, -1, -2)).reshape(q.shape + (8,))


def real8_to_h0(x) -> QuatAC:
    x = np.asarray(x, dtype=float)
    d = np.swapaxes(x.reshape(x.shape[:-1] + (4, 2)), -1, -2).astype(complex)
    return QuatAC(d * np.array([1, 1j, 1, 1j]))


# ----------------------------------------------------------- R^{2,2} inside H1

METRIC_22 = np.diag([-1.0, 1.0, -1.0, 1.0])


def norm22(x, y=None):
    """<x, y> = -x0 y0 + x1 y1 - x2 y2 + x3 y3 (y defaults to x)."""
    x = np.asarray(x, dtype=float)
    y = x if y is None else np.asarray(y, dtype=float)
    return -x[..., 0] * y[..., 0] + x[..., 1] * y[..., 1] - x[..., 2] * y[..., 2] + x[..., 3] * y[..., 3]


def vector_to_h1(x) -> QuatAC:
    """sigma i x0 1 + x1 I + i x2 J + x3 K."""
    x = np.asarray(x, dtype=float)
    return h1_element(LorentzNumber(x[..., 0], -x[..., 0]), x[..., 1], x[..., 2], x[..., 3])


def h1_to_vector(q: QuatAC, tol: float | None = 1e-10) -> np.ndarray:
    """Inverse of vector_to_h1; with tol set, check membership in R^{2,2}."""
    if tol is not None:
        defect = float(np.max(np.abs((q + q.bar().hat()).data), initial=0.0))
        if defect > tol * max(1.0, q.max_abs()):
            raise ValueError(f"not in R^(2,2): defect {defect:.3e}")
    d = q.data
    x0 = np.real(d[..., 0, 0] / 1j + (-d[..., 1, 0] / 1j)) / 2
    x1 = np.real(d[..., 0, 1] + d[..., 1, 1]) / 2
    x2 = np.real(d[..., 0, 2] / 1j + d[..., 1, 2] / 1j) / 2
    x3 = np.real(d[..., 0, 3] + d[..., 1, 3]) / 2
    return np.stack([x0, x1, x2, x3], axis=-1)


def r22_defect(q: QuatAC) -> float:
    """Distance from the -hat(bar(.))-fixed subspace."""
    return float(np.max(np.abs((q + q.bar().hat()).data), initial=0.0))


class CliffordElement:
    """Block matrix [[even, odd], [hat(odd), hat(even)]] of Cl(2,2)."""

    __slots__ = ("even", "odd")

    def __init__(self, even: QuatAC, odd: QuatAC):
        self.even = even
        self.odd = odd

    def __mul__(self, other: "CliffordElement") -> "CliffordElement":
        p1, q1, p2, q2 = self.even, self.odd, other.even, other.odd
        return CliffordElement(p1 * p2 + q1 * q2.hat(), p1 * q2 + q1 * p2.hat())

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        return CliffordElement(self.even + other.even, self.odd + other.odd)

    def scaled(self, c) -> "CliffordElement":
        return CliffordElement(self.even * c, self.odd * c)

    def max_abs(self) -> float:
        return max(self.even.max_abs(), self.odd.max_abs())

    def isclose(self, other, tol=ALGEBRA_TOL) -> bool:
        return self.even.isclose(other.even, tol) and self.odd.isclose(other.odd, tol)


def gamma_map(x) -> CliffordElement:
    """Clifford map of a vector of R^{2,2}: zero even part, odd part in H1."""
    q = vector_to_h1(x)
    return CliffordElement(QuatAC.zeros(q.shape), q)


def clifford_identity(shape=()) -> CliffordElement:
    one = QuatAC(np.broadcast_to(ONE.data, tuple(shape) + (2, 4)).copy())
    return CliffordElement(one, QuatAC.zeros(shape))


# ------------------------------------------------------- Im H0 and bivectors

def cross(x: QuatAC, y: QuatAC) -> QuatAC:
    return (x * y - y * x) * 0.5


def mixed(x: QuatAC, y: QuatAC, z: QuatAC) -> LorentzNumber:
    return h_form_real(cross(x, y), z)


def cross_mixed(x: QuatAC, y: QuatAC, z: QuatAC | None = None):
    """Cross product of two Im H0 elements, or their mixed product with z."""
    return cross(x, y) if z is None else mixed(x, y, z)


def bivector_norm(x: QuatAC) -> tuple:
    """Split H(x, x) = scalar - sigma * wedge into its two real parts.

    scalar is the natural Lambda^2 product, wedge is x ^ x measured against
    e0 ^ e1 ^ e2 ^ e3.
    """
    a1, a2, a3 = imh0_coords(x, tol=None)
    u1, v1, u2, v2, u3, v3 = a1.u, a1.v, a2.u, a2.v, a3.u, a3.v
    scalar = -(u1 ** 2 + v1 ** 2) + (u2 ** 2 + v2 ** 2) - (u3 ** 2 + v3 ** 2)
    wedge = 2 * (u1 * v1 - u2 * v2 + u3 * v3)
    return scalar, wedge


def wedge_pairing(x: QuatAC, y: QuatAC):
    """Symmetric bilinear form x ^ y (real), polarized from bivector_norm."""
    _, w_sum = bivector_norm(x + y)
    _, w_diff = bivector_norm(x - y)
    return (w_sum - w_diff) / 4
