import numpy as np
import pytest

from conftest import generated
from lorspin.dirac import dirac_residual, immersion_from_spinor, xi_of_vectors
from lorspin.errors import InputError, IntrinsicEquationViolated
from lorspin.lorentz import QJ, QuatAC, h_form
from lorspin.reduction import (
    HYPERPLANE_NORMAL,
    TARGETS,
    IntrinsicField,
    build_identification,
    constant_h_solution,
    embed_check,
    explicit_basis,
    explicit_xi,
    identification_defects,
    intrinsic_action,
    intrinsic_gram,
    intrinsic_product,
    lift_intrinsic,
    lifted_mean_curvature,
    lifted_xi,
    omitted_pairing,
    unit_intrinsic,
)
from lorspin.report import empirical_orders
from lorspin.spin import E0, E1, real_structure, vector_action
from lorspin.surface import NullChart, max_interior


def random_intrinsic(rng, n):
    return rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))


@pytest.mark.parametrize("target", TARGETS)
def test_identification_constraints(target):
    ident = build_identification(target)
    assert max(identification_defects(ident).values()) <= 1e-12
    assert ident.matrix.shape == (8, 4)
    assert ident.matrix[0, 0] > 0
    assert ident.metadata()["target"] == target


@pytest.mark.parametrize("target, sign", [("R12", 1.0), ("R21", -1.0)])
def test_norm_relation(target, sign, rng):
    psi = random_intrinsic(rng, 100)
    star = build_identification(target).apply(psi)
    h = h_form(star, star)
    size = intrinsic_product(psi, psi, target)
    # H(psi*, psi*) = +-(1 + sigma)/2 |psi|^2: full weight on the plus component
    assert np.max(np.abs(h.plus - sign * size)) <= 1e-12 * np.max(np.abs(size))
    assert np.max(np.abs(h.minus)) <= 1e-12


@pytest.mark.parametrize("target", TARGETS)
def test_clifford_intertwining(target, rng):
    ident = build_identification(target)
    psi = random_intrinsic(rng, 50)
    star = ident.apply(psi)
    for x2, x3 in ((1.0, 0.0), (0.0, 1.0), (0.4, -1.3)):
        x = np.array([0.0, 0.0, x2, x3])
        lhs = ident.apply(intrinsic_action(x2, x3, psi))
        if target == "R12":
            rhs = vector_action(x, vector_action(E1, star))
        else:
            rhs = vector_action(E0, vector_action(x, star)) * QJ
        assert (lhs - rhs).max_abs() <= 1e-12


@pytest.mark.parametrize("target", TARGETS)
def test_intrinsic_products(target, rng):
    eig = np.linalg.eigvalsh(intrinsic_gram(target))
    assert int(np.sum(eig > 0)) == 2 and int(np.sum(eig < 0)) == 2
    psi = unit_intrinsic(target, rng)
    assert intrinsic_product(psi, psi, target) == pytest.approx(1.0 if target == "R12" else -1.0, abs=1e-14)


def test_explicit_basis_signature(rng):
    for _ in range(10):
        psi = unit_intrinsic("R12", rng)
        B = explicit_basis(psi, "R12")
        gram = np.array([[intrinsic_product(a, b, "R12") for b in B] for a in B])
        assert np.allclose(gram, np.diag([-1.0, 1.0, -1.0, 1.0]), atol=1e-12)


@pytest.mark.parametrize("target", TARGETS)
def test_omitted_pairing_vanishes(target, rng):
    c = NullChart.square(5, 1.0)
    psi = rng.normal(size=c.shape + (2,)) + 1j * rng.normal(size=c.shape + (2,))
    frame = np.eye(2) + 0.3 * rng.normal(size=c.shape + (2, 2))
    assert omitted_pairing(IntrinsicField(c, psi, frame), target) <= 1e-12


@pytest.mark.parametrize("target", TARGETS)
def test_lift_of_constant_spinor_is_a_plane(target):
    c = NullChart.square(9, 1.0)
    f = constant_h_solution(c, 0.0, unit_intrinsic(target, 1), target)
    assert np.max(np.abs(f.psi - f.psi[0, 0])) == 0
    phi = lift_intrinsic(f, 0.0, target)
    assert phi.normalization_defect() <= 1e-13
    res = immersion_from_spinor(phi, (0.0, 0.0, 0.0, 0.0))
    F = res.F.reshape(-1, 4)
    # affine in (s, t): rank-2 displacement set
    sv = np.linalg.svd(F - F.mean(0), compute_uv=False)
    assert sv[2] <= 1e-12 * sv[0]


@pytest.mark.parametrize("target", TARGETS)
def test_lift_suite(target):
    H = 0.7
    dirac, hs = [], []
    for n in (33, 65, 129):
        c = NullChart.square(n, 1.0)
        f = constant_h_solution(c, H, unit_intrinsic(target, 3), target, direction=(0.3, 1.0))
        phi = lift_intrinsic(f, H, target)
        hvec = lifted_mean_curvature(np.full(c.shape, H), target)
        dirac.append(max_interior(dirac_residual(phi, hvec)))
        hs.append(c.h)
        assert phi.normalization_defect() <= 1e-12
        assert embed_check(phi, target).deviation <= 1e-10
        xe, xl = explicit_xi(f, target), lifted_xi(phi)
        assert max(np.max(np.abs(xe.xi_s - xl.xi_s)), np.max(np.abs(xe.xi_t - xl.xi_t))) <= 1e-10
        F = immersion_from_spinor(phi, (0.0, 0.0, 0.0, 0.0), None, hvec).F
        assert np.ptp(F[..., HYPERPLANE_NORMAL[target]]) <= c.h ** 2
    assert all(abs(o - 2) < 0.3 for o in empirical_orders(dirac, hs))


@pytest.mark.parametrize("target", TARGETS)
def test_explicit_xi_random_fields(target, rng):
    c = NullChart.square(9, 1.0)
    worst = 0.0
    for k in range(100):
        f = constant_h_solution(c, rng.uniform(-1, 1), unit_intrinsic(target, rng), target,
                                direction=(rng.uniform(-0.5, 0.5), 1.0))
        phi = lift_intrinsic(f, 0.0, target, check=False)
        xe, xl = explicit_xi(f, target), lifted_xi(phi)
        worst = max(worst, np.max(np.abs(xe.xi_s - xl.xi_s)), np.max(np.abs(xe.xi_t - xl.xi_t)))
    assert worst <= 1e-10


def test_constant_normal_direction():
    c = NullChart.square(9, 1.0)
    f = constant_h_solution(c, 0.5, unit_intrinsic("R12", 2), "R12", direction=(0.2, 1.0))
    phi = lift_intrinsic(f, 0.5, "R12")
    assert (vector_action(E0, phi.g) - phi.g).max_abs() <= 1e-12
    (n0,) = xi_of_vectors(phi, (E0,))
    assert np.max(np.abs(n0 - [1.0, 0, 0, 0])) <= 1e-12


def test_real_structure_commutes_with_derivatives():
    c = NullChart.square(17, 1.0)
    f = constant_h_solution(c, 0.4, unit_intrinsic("R21", 5), "R21", direction=(0.1, 1.0))
    g = lift_intrinsic(f, 0.4, "R21").g
    lhs = real_structure(QuatAC(c.d_ds(g.data)))
    rhs = QuatAC(c.d_ds(real_structure(g).data))
    assert (lhs - rhs).max_abs() <= 1e-10


def test_generic_flat_spinor_is_not_in_a_hyperplane():
    r = generated(17)
    for target in TARGETS:
        assert embed_check(r.spinor, target).deviation > 0.1


@pytest.mark.parametrize("target", TARGETS)
def test_non_solution_is_rejected(target):
    c = NullChart.square(17, 1.0)
    f = constant_h_solution(c, 0.7, unit_intrinsic(target, 3), target, direction=(0.3, 1.0))
    with pytest.raises(IntrinsicEquationViolated):
        lift_intrinsic(f, 0.2, target)
    bad = IntrinsicField(c, 2 * f.psi, f.frame)
    with pytest.raises(IntrinsicEquationViolated):
        lift_intrinsic(bad, 0.7 * np.ones(c.shape), target)


def test_input_validation():
    c = NullChart.square(9, 1.0)
    with pytest.raises(InputError):
        constant_h_solution(c, 1.0, [1, 0], "R12", direction=(1.0, 0.5))
    with pytest.raises(InputError):
        IntrinsicField(c, np.zeros((3, 2)), np.eye(2))
    with pytest.raises(InputError):
        build_identification("R13")
