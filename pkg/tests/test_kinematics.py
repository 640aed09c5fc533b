import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coulomb_born.errors import DomainError
from coulomb_born.kinematics import Kinematics, angle_from_q, momentum_transfer, q_squared_from_cosine

momenta = st.floats(min_value=1e-3, max_value=1e3)
angles = st.floats(min_value=0.0, max_value=math.pi)


def test_right_angle_transfer():
    assert momentum_transfer(1.0, math.pi / 2) == pytest.approx(math.sqrt(2.0), rel=1e-15)


def test_backscatter_transfer_is_twice_momentum():
    assert Kinematics(3.0, math.pi).q == pytest.approx(6.0, rel=1e-15)


def test_forward_transfer_vanishes():
    assert Kinematics(1.0, 0.0).q == 0.0


@pytest.mark.parametrize("p, theta", [(0.0, 1.0), (-1.0, 1.0), (math.inf, 1.0), (1.0, -0.1), (1.0, 4.0)])
def test_invalid_kinematics(p, theta):
    with pytest.raises(DomainError):
        Kinematics(p, theta)


def test_momentum_transfer_needs_angle():
    with pytest.raises(TypeError):
        momentum_transfer(1.0)


def test_angle_from_q_rejects_unreachable_transfer():
    with pytest.raises(DomainError):
        angle_from_q(1.0, 2.5)


@given(momenta, angles)
def test_two_ways_of_writing_q_squared_agree(p, theta):
    q = momentum_transfer(p, theta)
    assert q * q == pytest.approx(q_squared_from_cosine(p, theta), rel=1e-9, abs=1e-12 * p * p)


@given(momenta, st.floats(min_value=1e-3, max_value=math.pi))
def test_angle_round_trip(p, theta):
    assert angle_from_q(p, momentum_transfer(p, theta)) == pytest.approx(theta, rel=1e-7, abs=1e-7)


@pytest.mark.parametrize("m1, m2, expected", [(1.0, 1.0, 0.5), (2.0, 3.0, 1.2), (1.0, math.inf, 1.0)])
def test_reduced_mass(m1, m2, expected):
    from coulomb_born.born import reduced_mass

    assert reduced_mass(m1, m2) == pytest.approx(expected, rel=1e-15)


def test_reduced_mass_heavy_partner():
    from coulomb_born.born import reduced_mass

    assert reduced_mass(1.0, 1e12) == pytest.approx(1.0, rel=1e-11)
    with pytest.raises(DomainError):
        reduced_mass(0.0, 1.0)
