"""Special-function accuracy against an arbitrary-precision oracle."""

import mpmath
import numpy as np
import pytest

from dielscat.specfun import DomainError, bessel_j, bessel_y, hankel1

mpmath.mp.dps = 40


def mp_j(order, z):
    v = mpmath.besselj(order, mpmath.mpc(z))
    return complex(v)


def mp_y(order, x):
    return float(mpmath.bessely(order, mpmath.mpf(x)))


def test_trivial_values():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0


def test_series_reference_points():
    # frozen from the arbitrary-precision series oracle
    assert abs(bessel_j(0, 1.0) - 0.7651976865579666) < 1e-15
    assert abs(bessel_y(0, 1.0) - 0.08825696421567696) < 1e-15
    assert abs(bessel_y(1, 1.0) - (-0.7812128213002887)) < 1e-15
    h = hankel1(1, 1.0)
    assert abs(h - (0.4400505857449335 - 0.7812128213002887j)) < 1e-14


def test_y0_small_argument_log_behavior():
    # Y0 ~ (2/pi)(ln(x/2) + gamma) J0 for x -> 0+: negative below 2 e^-gamma
    xs = np.array([1e-8, 1e-4, 1e-2, 0.5, 1.0])
    vals = bessel_y(0, xs)
    assert np.all(vals[:4] < 0)
    assert vals[0] < vals[1] < vals[2]  # logarithmic blow-down
    gamma = 0.5772156649015329
    approx = 2 / np.pi * (np.log(xs[0] / 2) + gamma)
    assert abs(vals[0] - approx) < 1e-12


def _modulus(order, x):
    """sqrt(J^2 + Y^2): the natural accuracy scale on the real axis.

    Relative error at a zero of J or Y is unbounded for any fixed-
    precision evaluation (the argument's own rounding already moves the
    value by eps * |x f'| ~ eps * |x| * modulus), so accuracy near zeros
    is measured against the modulus instead.
    """
    return float(mpmath.sqrt(mpmath.besselj(order, x) ** 2
                             + mpmath.bessely(order, x) ** 2))


@pytest.mark.parametrize("order", [0, 1])
def test_real_axis_oracle(order):
    rng = np.random.default_rng(20240811 + order)
    xs = rng.uniform(1e-3, 200.0, size=350)
    eps = np.finfo(float).eps
    for x in xs:
        jref = mp_j(order, x).real
        yref = mp_y(order, x)
        # conditioning floor: rounding the argument alone moves the
        # oscillatory value by ~ eps * x * modulus
        floor = 3 * eps * max(x, 1.0) * _modulus(order, x)
        assert abs(bessel_j(order, x) - jref) <= max(1e-12 * abs(jref), floor)
        assert abs(bessel_y(order, x) - yref) <= max(1e-12 * abs(yref), floor)


def mp_hankel1(order, z):
    """Oracle H^(1) at precision adapted to the e^{2 Im z} cancellation."""
    with mpmath.workdps(int(40 + 2 * abs(z.imag))):
        return complex(mpmath.hankel1(order, mpmath.mpc(z)))


@pytest.mark.parametrize("order", [0, 1])
def test_complex_sector_oracle(order):
    rng = np.random.default_rng(77 + order)
    r = rng.uniform(1e-2, 200.0, size=120)
    th = rng.uniform(0.0, np.pi / 2, size=120)
    for z in r * np.exp(1j * th):
        ref = mp_j(order, z)
        assert abs(bessel_j(order, z) - ref) <= 1e-12 * abs(ref)
    # Hankel oracle over moderate absorption (the kernel regime); deeper
    # in the upper half plane the values underflow below double range
    r = rng.uniform(1e-2, 150.0, size=60)
    im = rng.uniform(0.0, 50.0, size=60)
    for z in r + 1j * im:
        href = mp_hankel1(order, complex(z))
        assert abs(hankel1(order, z) - href) <= 1e-12 * abs(href)


def test_hankel_real_identity():
    xs = np.array([0.3, 1.7, 12.0, 90.0])
    np.testing.assert_allclose(hankel1(0, xs),
                               bessel_j(0, xs) + 1j * bessel_y(0, xs),
                               rtol=1e-14)


def test_hankel_upward_decay():
    # |H_0^(1)| decreases in Im z at fixed Re z; e^{iz} decay dominates
    base = abs(hankel1(0, 10.0))
    vals = [abs(hankel1(0, 10.0 + 1j * s)) for s in (1.0, 3.0, 10.0)]
    assert vals[0] < base and vals[1] < vals[0] and vals[2] < vals[1]
    assert vals[2] < 1e-4 * base
    ref = complex(mpmath.hankel1(0, mpmath.mpc(10.0, 10.0)))
    assert abs(hankel1(0, 10 + 10j) - ref) <= 1e-12 * abs(ref)


def test_wronskian():
    xs = np.geomspace(1e-3, 100.0, 60)
    w = bessel_j(0, xs) * bessel_y(1, xs) - bessel_j(1, xs) * bessel_y(0, xs)
    np.testing.assert_allclose(w, -2.0 / (np.pi * xs), rtol=1e-12)


def test_hankel_derivative_identity():
    # H0' = -H1 checked by central differences, O(h^2) consistency
    z = 3.7 + 0.9j
    errs = []
    for h in (1e-2, 5e-3, 2.5e-3):
        fd = (hankel1(0, z + h) - hankel1(0, z - h)) / (2 * h)
        errs.append(abs(fd + hankel1(1, z)))
    assert errs[1] < errs[0] / 3 and errs[2] < errs[1] / 3
    assert errs[2] < 1e-6


def test_domain_errors():
    with pytest.raises(DomainError):
        bessel_j(2, 1.0)
    with pytest.raises(DomainError):
        bessel_j(0, 3.0e4)
    with pytest.raises(DomainError):
        bessel_j(0, -1.0)
    with pytest.raises(DomainError):
        bessel_j(0, 1.0 + 700j)
    with pytest.raises(DomainError):
        bessel_y(0, 0.0)
    with pytest.raises(DomainError):
        bessel_y(0, -2.0)
    with pytest.raises(DomainError):
        hankel1(0, 0.0)
    with pytest.raises(DomainError):
        hankel1(0, -1.0 + 1j)
    with pytest.raises(DomainError):
        hankel1(0, 1.0 - 1j)
