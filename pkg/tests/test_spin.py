import numpy as np
import pytest

from conftest import random_h0, random_vector
from lorspin.errors import NotUnitSpinor
from lorspin.lorentz import (
    ONE,
    ONE_A,
    QI,
    QJ,
    SIGMA,
    SIGMA_I_ONE,
    LorentzNumber,
    QuatAC,
    h_form,
    h_form_real,
    norm22,
    real8_to_h0,
)
from lorspin.spin import (
    E0,
    E1,
    E2,
    E3,
    SplitMask,
    double_cover,
    e01_action,
    even_action,
    random_unit,
    real_gram,
    real_structure,
    renormalize,
    right_j,
    s1a_element,
    spinor_pairing,
    split_project,
    unit_defect,
    vector_action,
)

METRIC = np.diag([-1.0, 1.0, -1.0, 1.0])
MASKS = [SplitMask(a, b) for a in (1, -1) for b in (1, -1)]


def units(rng, n):
    return [random_unit(rng) for _ in range(n)]


def test_even_action_examples(rng):
    assert even_action(QJ, ONE).isclose(QJ)
    half = QuatAC.from_coeffs((ONE_A + SIGMA) / 2)
    assert even_action(QuatAC.from_coeffs(SIGMA), half).isclose(half)
    p, q, s = random_h0(rng, (20,)), random_h0(rng, (20,)), random_h0(rng, (20,))
    assert (even_action(p, even_action(q, s)) - even_action(p * q, s)).max_abs() <= 1e-12


def test_actions_commute_with_complex_structure(rng):
    s = random_h0(rng, (20,))
    x = random_vector(rng, (20,))
    assert (right_j(right_j(s)) + s).max_abs() <= 1e-15
    assert (vector_action(x, right_j(s)) - right_j(vector_action(x, s))).max_abs() <= 1e-12


def test_vector_action_examples(rng):
    assert vector_action(E2, ONE).isclose(-QJ.times_sigma())
    s = random_h0(rng, (10,))
    assert (vector_action(E3, vector_action(E3, s)) + s).max_abs() <= 1e-13
    assert (vector_action(E0, vector_action(E0, s)) - s).max_abs() <= 1e-13


def test_vector_action_squares_to_minus_norm(rng):
    x = random_vector(rng, (100,))
    s = random_h0(rng, (100,))
    twice = vector_action(x, vector_action(x, s))
    expected = QuatAC(-norm22(x)[:, None, None] * s.data)
    assert (twice - expected).max_abs() <= 1e-12 * 30


def test_double_cover_examples():
    assert np.allclose(double_cover(ONE), np.eye(4), atol=1e-15)
    assert np.allclose(double_cover(-ONE), np.eye(4), atol=1e-15)
    v = 0.3
    p = QuatAC.from_coeffs(np.cosh(v)) + SIGMA_I_ONE * QI * np.sinh(v)
    boost = np.eye(4)
    boost[:2, :2] = [[np.cosh(2 * v), -np.sinh(2 * v)], [-np.sinh(2 * v), np.cosh(2 * v)]]
    assert np.allclose(double_cover(p), boost, atol=1e-14)


def test_double_cover_rejects_non_unit():
    with pytest.raises(NotUnitSpinor):
        double_cover(ONE * 2.0)


def test_double_cover_homomorphism_and_isometry(rng):
    for p, q in zip(units(rng, 100), units(rng, 100)):
        A, B = double_cover(p), double_cover(q)
        scale = np.max(np.abs(A)) * np.max(np.abs(B))
        assert np.max(np.abs(double_cover(p * q) - A @ B)) <= 1e-10 * scale
        assert np.max(np.abs(A.T @ METRIC @ A - METRIC)) <= 1e-10 * scale
        assert np.max(np.abs(double_cover(-p) - A)) <= 1e-12 * scale
        assert np.linalg.det(A) == pytest.approx(1.0, abs=1e-8 * scale ** 2)


def test_s1a_generators_are_block_diagonal(rng):
    for u, v in rng.normal(size=(20, 2)):
        M = double_cover(s1a_element(LorentzNumber.from_uv(u, v)))
        assert np.max(np.abs(M[:2, 2:])) <= 1e-10 and np.max(np.abs(M[2:, :2])) <= 1e-10
        for blk in (M[:2, :2], M[2:, 2:]):
            J = np.diag([-1.0, 1.0])
            assert np.max(np.abs(blk.T @ J @ blk - J)) <= 1e-10 * np.max(np.abs(blk)) ** 2


def test_split_projections(rng):
    first = split_project(ONE, SplitMask(1, 1))
    expected = QuatAC.from_coeffs((ONE_A + SIGMA) / 4, (ONE_A + SIGMA) / 4 * 1j)
    assert first.isclose(expected)
    s = random_h0(rng, (10,))
    parts = [split_project(s, m) for m in MASKS]
    total = parts[0] + parts[1] + parts[2] + parts[3]
    assert (total - s).max_abs() <= 1e-14
    for m, part in zip(MASKS, parts):
        assert (split_project(part, m) - part).max_abs() <= 1e-14
        assert (part.times_sigma() - part * m.sign_sigma).max_abs() <= 1e-14
        assert (e01_action(part) - part * m.sign_e01).max_abs() <= 1e-14
        for other in MASKS:
            if other != m:
                assert split_project(part, other).max_abs() <= 1e-14


def test_split_label_convention():
    # Sigma^{++} and Sigma^{--} make up Sigma^+ (sigma acts as +1)
    assert SplitMask.from_label("++").sign_sigma == 1
    assert SplitMask.from_label("--").sign_sigma == 1
    assert SplitMask.from_label("+-").sign_sigma == -1
    with pytest.raises(ValueError):
        SplitMask(0, 1)


def test_real_structure_properties(rng):
    assert real_structure(ONE).isclose(QI.times_i().times_sigma())
    s = random_h0(rng, (50,))
    x = random_vector(rng, (50,))
    assert (real_structure(real_structure(s)) - s).max_abs() <= 1e-14
    # anti-linear for the complex structure of the spinor space
    assert (real_structure(right_j(s)) + right_j(real_structure(s))).max_abs() <= 1e-14
    assert (real_structure(vector_action(x, s)) + vector_action(x, real_structure(s))).max_abs() <= 1e-12
    hb = h_form(real_structure(s), real_structure(s))
    hs = h_form(s, s)
    assert np.max(np.abs(hb.plus + hs.plus)) <= 1e-12 and np.max(np.abs(hb.minus + hs.minus)) <= 1e-12


def test_spinor_pairing_examples():
    bracket, h = spinor_pairing(ONE, ONE)
    assert bracket.isclose(SIGMA_I_ONE)
    assert h.isclose(ONE_A)


def test_spinor_pairing_adjunction(rng):
    x = random_vector(rng, (200,))
    s, t = random_h0(rng, (200,)), random_h0(rng, (200,))
    lhs, _ = spinor_pairing(vector_action(x, s), t)
    rhs, _ = spinor_pairing(s, vector_action(x, t))
    assert (lhs + rhs.hat()).max_abs() <= 1e-11
    h1 = h_form(vector_action(x, s), t)
    h2 = h_form(s, vector_action(x, t)).hat()
    assert np.max(np.abs(h1.plus - h2.plus)) <= 1e-11
    # h-part equals H(s, t)
    _, h = spinor_pairing(s, t)
    ref = h_form_real(s, t)
    assert np.allclose(h.plus, ref.plus, atol=1e-12) and np.allclose(h.minus, ref.minus, atol=1e-12)


def test_real_product_signature():
    gram = real_gram([real8_to_h0(e) for e in np.eye(8)])
    eig = np.linalg.eigvalsh(gram)
    assert int(np.sum(eig > 0)) == 4 and int(np.sum(eig < 0)) == 4


def test_unit_frame_quadruple(rng):
    for phi in units(rng, 100):
        quad = [
            phi,
            vector_action(E2, vector_action(E3, phi)),
            vector_action(E3, vector_action(E1, phi)),
            vector_action(E1, vector_action(E2, phi)),
        ]
        for i, a in enumerate(quad):
            for j, b in enumerate(quad):
                h = h_form_real(a, b, tol=1e-9)
                want = [1, -1, 1, -1][i] if i == j else 0
                assert abs(h.plus - want) <= 1e-10 and abs(h.minus - want) <= 1e-10


def test_random_unit_and_renormalize(rng):
    p = random_unit(rng)
    assert unit_defect(p) <= 1e-14
    assert unit_defect(renormalize(p * 3.0)) <= 1e-14
    with pytest.raises(NotUnitSpinor):
        renormalize(QI.times_i())  # H(iI, iI) = -1
