"""Shared fixtures and independent oracles for the test suite."""

import numpy as np
import pytest
from scipy.special import h1vp, hankel1 as sp_h1, jv, jvp

from dielscat.geometry import make_curve


@pytest.fixture(scope="session")
def kite():
    return make_curve("kite")


@pytest.fixture(scope="session")
def petal():
    return make_curve("five_petal")


@pytest.fixture(scope="session")
def circle():
    return make_curve("circle")


def richardson_diagonal(fn, t, hs=(1e-2, 5e-3, 2.5e-3, 1.25e-3)):
    """Extrapolate fn(t, t+-h) to h = 0 (Neville in h^2 on even averages).

    The achievable precision is a few 1e-8 relative: the symmetrized
    section is a series in h^2 whose coefficients grow with the distance
    to the nearest complex zero of |x(t)-x(t+h)|^2 / h^2, and the
    smallest steps sit on the 1/sin^2 cancellation noise floor.
    """
    vals = np.array([(fn(t, t + h) + fn(t, t - h)) / 2.0 for h in hs])
    x = np.array(hs, dtype=float) ** 2
    for _ in range(1, len(hs)):
        vals = (vals[1:] * x[:-1] - vals[:-1] * x[1:]) / (x[:-1] - x[1:])
        x = x[1:]
    return vals[0]


def mie_far_field(params, angles, n_modes=80):
    """Exact far field of a unit-circle scatterer under the plane wave.

    Separation of variables: per-mode 2x2 transmission conditions, far
    field from the large-argument Hankel asymptotics. Valid for the
    incidence direction (0, -1).
    """
    assert tuple(params.direction) == (0.0, -1.0)
    k1, k2, nu = params.k1, params.k2, params.nu
    out = np.zeros(np.shape(angles), dtype=complex)
    for m in range(-n_modes, n_modes + 1):
        bm, _ = mie_coeffs(params, m)
        out = out + bm * np.sqrt(2 / (np.pi * k1)) * np.exp(-1j * np.pi / 4) \
            * (-1j) ** m * np.exp(1j * m * np.asarray(angles))
    return out


def mie_coeffs(params, m):
    """Scattered/interior expansion coefficients of mode m (unit circle)."""
    k1, k2, nu = params.k1, params.k2, params.nu
    am = (-1.0) ** m  # e^{-i k1 x2} = sum_m (-1)^m J_m(k1 r) e^{im theta}
    lhs = np.array([[sp_h1(m, k1), -jv(m, k2)],
                    [k1 * h1vp(m, k1), -nu * k2 * jvp(m, k2)]])
    rhs = -am * np.array([jv(m, k1), k1 * jvp(m, k1)])
    bm, cm = np.linalg.solve(lhs, rhs)
    return bm, cm


def mie_fields(params, points, region, n_modes=80):
    """Exact scattered (exterior) or interior field at given points."""
    pts = np.atleast_2d(points)
    rho = np.hypot(pts[:, 0], pts[:, 1])
    th = np.arctan2(pts[:, 1], pts[:, 0])
    out = np.zeros(len(pts), dtype=complex)
    for m in range(-n_modes, n_modes + 1):
        bm, cm = mie_coeffs(params, m)
        if region == "exterior":
            out = out + bm * sp_h1(m, params.k1 * rho) * np.exp(1j * m * th)
        else:
            out = out + cm * jv(m, params.k2 * rho) * np.exp(1j * m * th)
    return out
