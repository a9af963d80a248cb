import cmath
import math

import numpy as np
import pytest

from starkres.excs import DomainError
from starkres.branchcut import (
    SpectralPoint,
    TWO_PI_OVER_THREE,
    branch_power,
    branch_power_array,
    closed_upper_arg,
    closed_upper_arg_array,
    log_branch,
    minus_ik_power,
)


UPPER_SAMPLES = [0.3 + 0.0j, 2 + 1j, 1j, -4 + 0.5j, -9 + 0.0j, 25 * cmath.exp(2.5j), 1e4 * cmath.exp(0.01j)]


def test_closed_upper_arg_keeps_negative_axis_at_pi():
    assert closed_upper_arg(-2 + 0j) == math.pi
    assert closed_upper_arg(complex(-2, -0.0)) == math.pi


def test_closed_upper_arg_just_below_the_axis():
    assert closed_upper_arg(1 - 1e-3j) == pytest.approx(-1e-3, rel=1e-6)
    assert closed_upper_arg(-1 - 1e-3j) == pytest.approx(math.pi + 1e-3, rel=1e-6)


def test_closed_upper_arg_array_matches_scalar():
    values = np.array([1 - 1e-3j, -1 - 1e-3j, complex(-3, -0.0), 2j, -2j])
    expected = [closed_upper_arg(v) for v in values]
    assert np.allclose(closed_upper_arg_array(values), expected, rtol=0, atol=1e-15)


def test_branch_power_of_minus_one():
    assert abs(branch_power(-1, 2 / 3) - cmath.exp(2j * math.pi / 3)) < 1e-15


def test_branch_power_positive_axis():
    assert branch_power(4, 0.5) == pytest.approx(2.0, abs=1e-15)
    assert branch_power(1, 2 / 3) == pytest.approx(1.0, abs=1e-15)


def test_branch_power_is_additive():
    for lam in UPPER_SAMPLES:
        lhs = branch_power(lam, 1 / 3) * branch_power(lam, 1 / 6)
        assert abs(lhs - branch_power(lam, 0.5)) <= 1e-13 * abs(lhs)


def test_branch_power_array_matches_scalar():
    values = np.array(UPPER_SAMPLES)
    expected = np.array([branch_power(v, 0.75) for v in values])
    assert np.allclose(branch_power_array(values, 0.75), expected, rtol=1e-14)


def test_branch_power_of_zero_raises():
    with pytest.raises(DomainError):
        branch_power(0, 0.5)
    with pytest.raises(DomainError):
        branch_power_array([1.0, 0.0], 0.5)


def test_minus_ik_power():
    assert abs(minus_ik_power(1j, 1) - 1) < 1e-15
    assert abs(minus_ik_power(1, 0.5) - cmath.exp(-0.25j * math.pi)) < 1e-15
    assert minus_ik_power(2j, 0.75) == pytest.approx(2 ** 0.75, rel=1e-14)
    with pytest.raises(DomainError):
        minus_ik_power(0, 0.5)


def test_log_branch_uses_stored_argument():
    point = SpectralPoint(-1 - 1e-3j, phi=math.pi + 1e-3)
    assert log_branch(point).imag == pytest.approx(math.pi + 1e-3)
    assert log_branch(-1).imag == pytest.approx(math.pi)


def test_spectral_point_invariants():
    for lam in UPPER_SAMPLES:
        point = SpectralPoint(lam)
        assert abs(point.k ** 2 - lam) <= 1e-12 * abs(lam)
        assert point.k.imag >= 0
        assert abs(point.z - (4 / 3) * point.k ** 3) <= 1e-12 * abs(point.z)
        assert point.s == pytest.approx(math.sin(1.5 * point.phi))
        assert point.c == pytest.approx(math.cos(1.5 * point.phi))


def test_spectral_point_sign_of_s_by_sector():
    assert SpectralPoint.from_polar(10, 1.0).s > 0
    assert SpectralPoint.from_polar(10, TWO_PI_OVER_THREE + 0.05).s < 0
    point = SpectralPoint(-16)
    assert point.s == pytest.approx(-1.0)
    # e^{−iz} decays in the forbidden sector
    assert (-1j * point.z).real < 0


def test_spectral_point_from_polar_keeps_phi():
    point = SpectralPoint.from_polar(9.0, math.pi)
    assert point.phi == math.pi
    assert point.k == pytest.approx(3j, abs=1e-14)


def test_spectral_point_conjugate_mirrors_phi():
    point = SpectralPoint(3 + 1j)
    mirrored = point.conjugate()
    assert mirrored.lambda_ == 3 - 1j
    assert mirrored.phi == pytest.approx(-point.phi)
    left = SpectralPoint(-3 + 1j).conjugate()
    assert left.phi == pytest.approx(2 * math.pi - closed_upper_arg(-3 + 1j))


def test_spectral_point_rejects_zero_and_infinity():
    with pytest.raises(DomainError):
        SpectralPoint(0)
    with pytest.raises(DomainError):
        SpectralPoint(complex(math.inf, 0))


def test_spectral_point_complex_cast():
    assert complex(SpectralPoint(2 + 3j)) == 2 + 3j


@pytest.mark.parametrize("p", [0.55, 0.75, 0.95])
def test_minus_ik_power_has_positive_real_part_on_the_closed_upper_half_plane(p):
    for modulus in (0.1, 1.0, 10.0, 1e3):
        for phi in np.linspace(0.0, math.pi, 25):
            k = cmath.rect(modulus, phi)
            assert minus_ik_power(k, p).real > 0
            assert minus_ik_power(k, 1).real >= -1e-12 * modulus
            assert abs(minus_ik_power(k, 1) + 1j * k) <= 1e-12 * modulus


@pytest.mark.parametrize("phi", [-math.pi / 2 + 1e-6, 3 * math.pi / 2 - 1e-6])
@pytest.mark.parametrize("alpha", [1 / 3, 0.5, 2 / 3])
def test_branch_power_is_continuous_along_rays_next_to_the_cut(phi, alpha):
    radii = np.geomspace(1e-3, 1e3, 50)
    values = np.array([cmath.rect(r, phi) for r in radii])
    expected = radii ** alpha * np.exp(1j * alpha * phi)
    scalar = np.array([branch_power(v, alpha) for v in values])
    assert np.allclose(scalar / expected, 1.0, rtol=0, atol=1e-12)
    assert np.allclose(branch_power_array(values, alpha) / expected, 1.0, rtol=0, atol=1e-12)


def test_branch_power_jumps_only_across_the_downward_ray():
    below_right = branch_power(cmath.rect(2.0, -math.pi / 2 + 1e-9), 0.5)
    below_left = branch_power(cmath.rect(2.0, 3 * math.pi / 2 - 1e-9), 0.5)
    assert abs(below_left / below_right - cmath.exp(1j * math.pi)) < 1e-8
    # crossing the negative real axis is smooth
    above = branch_power(cmath.rect(2.0, math.pi - 1e-9), 0.5)
    below = branch_power(cmath.rect(2.0, math.pi + 1e-9), 0.5)
    assert abs(above - below) < 1e-8
