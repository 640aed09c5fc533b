import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coulomb_born.distributions import (
    ABS,
    COS,
    DELTA_HAT,
    HEAVISIDE,
    IDENTITIES,
    INV_R,
    INVERSE_FOURIER_CONSTANT,
    LAPLACIAN_OF_INVERSE_R,
    ONE,
    ONE_3D,
    SIN,
    GoodFunction,
    Meaning,
    SlowGrowthFunction,
    X,
    check_slow_growth,
    inverse_r_transform,
    laplacian_parts,
    pair,
    pair_derivative,
    pair_fourier,
    pair_laplacian_radial,
    rapid_decrease_check,
    route3_reconstruction,
    run_identity_suite,
    verify_fourier_laplacian,
)
from coulomb_born.born import coulomb_closed
from coulomb_born.errors import DomainError, IdentityError
from coulomb_born.potentials import Sign

SQRT_2PI = math.sqrt(2.0 * math.pi)

centers = st.floats(min_value=-1.5, max_value=1.5)
widths = st.floats(min_value=0.5, max_value=2.0)
orders = st.integers(min_value=0, max_value=3)


def gauss3(width=1.0):
    return GoodFunction.gaussian(0.0, width, dim=3)


# -- good functions -------------------------------------------------------


def test_gaussian_values():
    phi = GoodFunction.gaussian(2.0, 1.0)
    assert phi.value_at_origin() == pytest.approx(math.exp(-2.0), rel=1e-15)
    x = np.linspace(-3, 3, 7)
    np.testing.assert_allclose(phi(x), np.exp(-((x - 2.0) ** 2) / 2))


def test_hermite_gaussian_values():
    # physicists' H_2(u) = 4u^2 - 2
    phi = GoodFunction.hermite_gaussian(2, 0.5, 0.3)
    x = np.linspace(-2, 2, 9)
    u = (x - 0.3) / 0.5
    np.testing.assert_allclose(phi(x), (4 * u * u - 2) * np.exp(-u * u / 2), atol=1e-14)


@given(orders, centers, widths)
def test_derivative_matches_finite_differences(order, center, width):
    phi = GoodFunction.hermite_gaussian(order, width, center)
    x = np.linspace(center - 3 * width, center + 3 * width, 13)
    h = 1e-5 * width
    fd = (phi(x + h) - phi(x - h)) / (2 * h)
    scale = np.max(np.abs(phi.derivative()(x))) + 1.0
    np.testing.assert_allclose(phi.derivative()(x), fd, atol=1e-7 * scale)


@settings(max_examples=25, deadline=None)
@given(orders, centers, widths, st.floats(min_value=-3.0, max_value=3.0))
def test_fourier_transform_matches_quadrature(order, center, width, k):
    phi = GoodFunction.hermite_gaussian(order, width, center)
    x = np.linspace(center - 14 * width, center + 14 * width, 8001)
    direct = np.trapezoid(phi(x) * np.exp(-1j * k * x), x) if hasattr(np, "trapezoid") else np.trapz(
        phi(x) * np.exp(-1j * k * x), x)
    closed = complex(phi.fourier()(np.array([k]))[0])
    assert abs(closed - direct) <= 1e-9 * (1 + abs(direct))


def test_fourier_inversion_constant():
    # applying the transform twice reflects and multiplies by 2 pi per dimension
    phi = GoodFunction.hermite_gaussian(1, 0.8, 0.4)
    twice = phi.fourier().fourier()
    x = np.linspace(-2, 2, 11)
    np.testing.assert_allclose(INVERSE_FOURIER_CONSTANT * twice(x), phi(-x), atol=1e-13)


def test_three_dimensional_products():
    phi = GoodFunction.product(GoodFunction.gaussian(0.2, 1.0), GoodFunction.hermite_gaussian(1, 0.9),
                               GoodFunction.gaussian(-0.1, 1.2))
    assert phi.dim == 3
    x, y, z = 0.3, -0.2, 0.5
    expected = (math.exp(-((x - 0.2) ** 2) / 2) * (2 * y / 0.9) * math.exp(-((y / 0.9) ** 2) / 2)
                * math.exp(-((z + 0.1) / 1.2) ** 2 / 2))
    assert phi(x, y, z) == pytest.approx(expected, rel=1e-14)


def test_laplacian_of_gaussian():
    phi = gauss3()
    pts = np.array([0.0, 0.5, 1.3])
    r2 = 3 * pts**2
    np.testing.assert_allclose(phi.laplacian()(pts, pts, pts), (r2 - 3) * np.exp(-r2 / 2), atol=1e-14)


def test_laplacian_split_adds_up():
    phi = GoodFunction.product(GoodFunction.hermite_gaussian(2, 1.1, 0.3), GoodFunction.gaussian(-0.4, 0.8),
                               GoodFunction.hermite_gaussian(1, 1.3, 0.1))
    rng = np.random.default_rng(3)
    x, y, z = rng.normal(size=(3, 20))
    A, B, C = laplacian_parts(phi, x, y, z)
    np.testing.assert_allclose(A + B + C, phi.laplacian()(x, y, z), rtol=1e-10, atol=1e-12)


@given(orders, centers, widths)
def test_rapid_decrease(order, center, width):
    assert rapid_decrease_check(GoodFunction.hermite_gaussian(order, width, center))


def test_invalid_good_functions():
    with pytest.raises(DomainError):
        GoodFunction.hermite_gaussian(-1)
    with pytest.raises(ValueError):
        GoodFunction.product(gauss3())
    with pytest.raises(DomainError):
        pair(ONE, gauss3())


# -- slow growth ----------------------------------------------------------


@pytest.mark.parametrize("f", [ONE, X, HEAVISIDE, ABS, COS, SIN, INV_R, ONE_3D], ids=lambda f: f.name)
def test_builtins_have_valid_growth_certificates(f):
    assert check_slow_growth(f)


def test_understated_growth_certificate_fails():
    cubic = SlowGrowthFunction(lambda x: x**3, 1, "x^3")
    assert not check_slow_growth(cubic)


# -- pairings -------------------------------------------------------------


def test_direct_pairings():
    assert pair(ONE, GoodFunction.gaussian()).value == pytest.approx(SQRT_2PI, rel=1e-13)
    assert pair(HEAVISIDE, GoodFunction.gaussian()).value == pytest.approx(math.sqrt(math.pi / 2), rel=1e-13)
    rep = pair(INV_R, gauss3())
    assert rep.value == pytest.approx(4 * math.pi, rel=1e-11)
    assert rep.meaning is Meaning.DIRECT


def test_derivative_pairings():
    assert pair_derivative(HEAVISIDE, GoodFunction.gaussian()).value == pytest.approx(1.0, abs=1e-12)
    assert pair_derivative(X, GoodFunction.gaussian()).value == pytest.approx(SQRT_2PI, rel=1e-13)
    rep = pair_derivative(HEAVISIDE, GoodFunction.gaussian(2.0, 1.0))
    assert rep.value == pytest.approx(math.exp(-2.0), abs=1e-12)
    assert rep.meaning is Meaning.DERIVATIVE
    with pytest.raises(ValueError):
        pair_derivative(ONE, GoodFunction.gaussian(), 0)


def test_fourier_pairings():
    phi = GoodFunction.gaussian()
    assert pair_fourier(HEAVISIDE, phi, order=1).value == pytest.approx(DELTA_HAT * SQRT_2PI, rel=1e-12)
    assert pair_fourier(ONE, phi).value == pytest.approx(2 * math.pi, rel=1e-12)
    f = GoodFunction.gaussian()
    lhs = pair(SlowGrowthFunction.from_good(f.fourier()), phi)
    rhs = pair(SlowGrowthFunction.from_good(f), phi.fourier())
    assert lhs.value == pytest.approx(rhs.value, rel=1e-10)


def test_complex_pairing_carries_imaginary_part():
    # hat(phi) of an off-centre Gaussian is complex; <1, hat phi> = 2 pi phi(0) is real
    phi = GoodFunction.gaussian(0.7, 1.0)
    rep = pair_fourier(ONE, phi)
    assert rep.complex_value == pytest.approx(2 * math.pi * math.exp(-0.245), rel=1e-11)
    rep = pair_fourier(X, phi)
    assert abs(rep.imag) > 1e-3


def test_laplacian_pairings():
    for width in (1.0, 2.0):
        rep = pair_laplacian_radial(INV_R, gauss3(width), strict=True)
        assert rep.value == pytest.approx(LAPLACIAN_OF_INVERSE_R, rel=1e-9)
        assert rep.meaning is Meaning.LAPLACIAN
    assert abs(pair_laplacian_radial(ONE_3D, gauss3()).value) < 1e-9


def test_angular_terms_reported_and_strict_raises():
    phi = GoodFunction.product(GoodFunction.hermite_gaussian(1, 1.0, 0.3), GoodFunction.gaussian(0.2, 0.9),
                               GoodFunction.gaussian(-0.5, 1.1))
    rep = pair_laplacian_radial(INV_R, phi)
    assert abs(rep.extras["B"]) < 1e-9 and abs(rep.extras["C"]) < 1e-9
    with pytest.raises(IdentityError):
        pair_laplacian_radial(INV_R, phi, strict=True, angular_tol=0.0)


def test_fourier_laplacian_examples():
    phi = GoodFunction.gaussian()
    assert verify_fourier_laplacian(SlowGrowthFunction.from_good(GoodFunction.gaussian()), phi).gap < 1e-10
    assert verify_fourier_laplacian(ONE, phi).gap < 1e-10
    rep = verify_fourier_laplacian(INV_R, gauss3())
    assert rep.gap < 1e-8
    assert rep.lhs.value == pytest.approx(LAPLACIAN_OF_INVERSE_R * (2 * math.pi) ** 1.5, rel=1e-9)


def test_second_derivative_of_abs_is_twice_delta():
    for phi in (GoodFunction.gaussian(0.4, 0.8), GoodFunction.hermite_gaussian(2, 1.3, -0.6)):
        rep = pair_derivative(ABS, phi, 2)
        assert rep.value == pytest.approx(2 * phi.value_at_origin().real, abs=1e-10)


@settings(max_examples=20, deadline=None)
@given(orders, centers, widths, orders, centers, widths,
       st.floats(min_value=-3, max_value=3), st.floats(min_value=-3, max_value=3))
def test_pairing_is_linear(o1, c1, w1, o2, c2, w2, a, b):
    p1 = GoodFunction.hermite_gaussian(o1, w1, c1)
    p2 = GoodFunction.hermite_gaussian(o2, w2, c2)
    for f in (ONE, X, HEAVISIDE, COS):
        r1, r2 = pair(f, p1), pair(f, p2)
        combo = pair(f, p1 * a + p2 * b)
        bound = abs(a) * r1.est_err + abs(b) * r2.est_err + combo.est_err + 1e-12
        assert abs(combo.value - (a * r1.value + b * r2.value)) <= bound


@settings(max_examples=25, deadline=None)
@given(orders, centers, widths)
def test_heaviside_derivative_is_point_evaluation(order, center, width):
    phi = GoodFunction.hermite_gaussian(order, width, center)
    assert pair_derivative(HEAVISIDE, phi).value == pytest.approx(phi.value_at_origin().real, abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(orders, centers, widths)
def test_delta_transform_is_total_integral(order, center, width):
    phi = GoodFunction.hermite_gaussian(order, width, center)
    lhs = pair_fourier(HEAVISIDE, phi, order=1).value
    rhs = pair(ONE, phi).value
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9 * width)


# -- identity suite and the Coulomb amplitude -----------------------------


def test_identity_suite_records():
    records = run_identity_suite(n_functions=2, seed=5, identities=["heaviside_delta", "parseval"])
    assert [r.identity for r in records] == ["heaviside_delta"] * 2 + ["parseval"] * 2
    for r in records:
        d = r.to_dict()
        assert set(d) == {"identity", "phi_params", "value", "expected", "gap", "est_err", "pass"}
        assert d["pass"] and d["gap"] <= IDENTITIES[r.identity][1]


def test_identity_suite_is_deterministic():
    a = run_identity_suite(n_functions=3, seed=11, identities=["delta_hat"])
    b = run_identity_suite(n_functions=3, seed=11, identities=["delta_hat"])
    assert [r.to_dict() for r in a] == [r.to_dict() for r in b]


def test_identity_suite_rejects_unknown_names():
    with pytest.raises(DomainError):
        run_identity_suite(n_functions=1, identities=["nonsense"])
    with pytest.raises(DomainError):
        run_identity_suite(n_functions=0)


def test_route3_values():
    assert route3_reconstruction(1.0, 1.0, Sign.REPULSIVE, 2.0).value == -0.5
    assert route3_reconstruction(1.0, 1.0, Sign.ATTRACTIVE, 1.0).value == 2.0
    assert inverse_r_transform(2.0) == pytest.approx(math.pi, rel=1e-15)
    with pytest.raises(DomainError):
        inverse_r_transform(0.0)


@given(st.floats(min_value=1e-3, max_value=1e3), st.sampled_from([Sign.REPULSIVE, Sign.ATTRACTIVE]))
def test_route3_agrees_with_closed_form(q, sign):
    assert route3_reconstruction(1.0, 1.0, sign, q).value == pytest.approx(
        coulomb_closed(1.0, 1.0, sign, q).value, rel=4e-16)
